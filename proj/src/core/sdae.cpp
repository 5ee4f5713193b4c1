#include "aliasnet/sdae.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "aliasnet/rng.hpp"
#include "aliasnet/tensor_io.hpp"
#include "binary.hpp"

namespace aliasnet {

namespace {

std::string shape_of(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_shapes(const Eigen::Ref<const Matrix>& inputs, const Eigen::Ref<const Matrix>& targets,
                    const Layer& layer, const char* what) {
  if (layer.analysis.cols() != inputs.rows() + 1)
    throw DimensionError(std::string(what) + ": analysis is " + shape_of(layer.analysis) + " but inputs have " +
                         std::to_string(inputs.rows()) + " rows");
  if (targets.rows() != layer.synthesis.rows() || targets.cols() != inputs.cols())
    throw DimensionError(std::string(what) + ": targets " + std::to_string(targets.rows()) + "x" +
                         std::to_string(targets.cols()) + " do not match synthesis " + shape_of(layer.synthesis) +
                         " and " + std::to_string(inputs.cols()) + " input columns");
  if (layer.synthesis.cols() != layer.analysis.rows())
    throw DimensionError(std::string(what) + ": synthesis " + shape_of(layer.synthesis) +
                         " incompatible with analysis " + shape_of(layer.analysis));
}

Matrix apply_sigmoid(const Matrix& z) { return z.unaryExpr([](double t) { return sigmoid(t); }); }

double smooth_l1(const Matrix& z, double eps) {
  return z.unaryExpr([eps](double t) { return std::sqrt(t * t + eps * eps); }).sum();
}

}  // namespace

void Layer::validate() const {
  if (analysis.rows() < 1 || synthesis.rows() < 1) throw DimensionError("layer: empty weight matrix");
  if (analysis.cols() != synthesis.rows() + 1 || synthesis.cols() != analysis.rows())
    throw DimensionError("layer: analysis " + shape_of(analysis) + " and synthesis " + shape_of(synthesis) +
                         " are inconsistent");
  if (!analysis.allFinite() || !synthesis.allFinite()) throw DimensionError("layer: non-finite weights");
}

Layer Layer::initialized(Eigen::Index input_dim, Eigen::Index hidden_dim, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1) throw ArgumentError("layer dimensions must be positive");
  const double bound = std::sqrt(6.0 / static_cast<double>(input_dim + hidden_dim));
  Rng rng(seed);
  Layer layer;
  layer.analysis = Matrix::Zero(hidden_dim, input_dim + 1);
  layer.synthesis.resize(input_dim, hidden_dim);
  // Fill in row-major order so the draw sequence is independent of storage.
  for (Eigen::Index i = 0; i < hidden_dim; ++i)
    for (Eigen::Index j = 0; j < input_dim; ++j) layer.analysis(i, j) = rng.uniform(-bound, bound);
  for (Eigen::Index i = 0; i < input_dim; ++i)
    for (Eigen::Index j = 0; j < hidden_dim; ++j) layer.synthesis(i, j) = rng.uniform(-bound, bound);
  return layer;
}

Vector encode_layer(const Eigen::Ref<const Vector>& x, const Layer& layer) {
  const auto d = layer.analysis.cols() - 1;
  if (x.size() != d)
    throw DimensionError("encode_layer: input has " + std::to_string(x.size()) + " entries, layer expects " +
                         std::to_string(d));
  Vector z = layer.analysis.leftCols(d) * x + layer.analysis.col(d);
  return z.unaryExpr([](double t) { return sigmoid(t); });
}

Vector decode_layer(const Eigen::Ref<const Vector>& h, const Layer& layer) {
  if (h.size() != layer.synthesis.cols())
    throw DimensionError("decode_layer: code has " + std::to_string(h.size()) + " entries, layer expects " +
                         std::to_string(layer.synthesis.cols()));
  return layer.synthesis * h;
}

Matrix preactivation(const Eigen::Ref<const Matrix>& inputs, const Layer& layer) {
  const auto d = layer.analysis.cols() - 1;
  if (inputs.rows() != d)
    throw DimensionError("preactivation: inputs have " + std::to_string(inputs.rows()) + " rows, layer expects " +
                         std::to_string(d));
  Matrix z = layer.analysis.leftCols(d) * inputs;
  z.colwise() += layer.analysis.col(d);
  return z;
}

Matrix encode_batch(const Eigen::Ref<const Matrix>& inputs, const Layer& layer) {
  return apply_sigmoid(preactivation(inputs, layer));
}

double layer_cost(const Eigen::Ref<const Matrix>& inputs, const Eigen::Ref<const Matrix>& targets, const Layer& layer,
                  double lambda, double eps, Output output) {
  require_shapes(inputs, targets, layer, "layer_cost");
  const Matrix z = preactivation(inputs, layer);
  Matrix y = layer.synthesis * apply_sigmoid(z);
  if (output == Output::logistic) y = apply_sigmoid(y);
  const Matrix residual = y - targets;
  double cost = residual.squaredNorm();
  if (lambda != 0.0) cost += lambda * smooth_l1(z, eps);
  return cost;
}

LayerGradients layer_gradients(const Eigen::Ref<const Matrix>& inputs, const Eigen::Ref<const Matrix>& targets,
                               const Layer& layer, double lambda, double eps, Output output) {
  require_shapes(inputs, targets, layer, "layer_gradients");
  const auto d = inputs.rows();
  const Matrix z = preactivation(inputs, layer);
  const Matrix h = apply_sigmoid(z);
  Matrix dy = layer.synthesis * h;
  if (output == Output::logistic) {
    const Matrix y = apply_sigmoid(dy);
    dy = 2.0 * (y - targets).cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix()));
  } else {
    dy = 2.0 * (dy - targets);
  }

  LayerGradients g;
  g.synthesis.noalias() = dy * h.transpose();
  Matrix dz = (layer.synthesis.transpose() * dy).cwiseProduct(h.cwiseProduct((1.0 - h.array()).matrix()));
  if (lambda != 0.0)
    dz += lambda * z.unaryExpr([eps](double t) { return t / std::sqrt(t * t + eps * eps); });
  g.analysis.resize(layer.analysis.rows(), d + 1);
  g.analysis.leftCols(d).noalias() = dz * inputs.transpose();
  g.analysis.col(d) = dz.rowwise().sum();
  return g;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ArgumentError("learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ArgumentError("momentum must be in [0, 1)");
  if (epochs < 1) throw ArgumentError("epochs must be >= 1");
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  if (!(lambda_sparse >= 0.0)) throw ArgumentError("lambda_sparse must be >= 0");
  if (!(smooth_eps > 0.0)) throw ArgumentError("smooth_eps must be > 0");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw ArgumentError("validation_fraction must be in [0, 1)");
}

LayerTrainResult train_layer(const Matrix& inputs, const Matrix& targets, Eigen::Index hidden,
                             const TrainConfig& config, const Matrix* val_inputs, const Matrix* val_targets,
                             Output output) {
  config.validate();
  const Eigen::Index samples = inputs.cols();
  if (samples < config.batch_size)
    throw ArgumentError("train_layer: " + std::to_string(samples) + " samples < batch_size " +
                        std::to_string(config.batch_size));
  if (targets.cols() != samples) throw DimensionError("train_layer: inputs and targets differ in column count");
  if ((val_inputs == nullptr) != (val_targets == nullptr))
    throw ArgumentError("train_layer: validation inputs and targets must be given together");

  const auto start = std::chrono::steady_clock::now();
  const double lambda = config.lambda_sparse;
  const double eps = config.smooth_eps;

  LayerTrainResult result;
  Layer& layer = result.layer;
  layer = Layer::initialized(inputs.rows(), hidden, config.seed);
  require_shapes(inputs, targets, layer, "train_layer");
  const bool has_val = val_inputs != nullptr && val_inputs->cols() > 0;
  if (has_val) require_shapes(*val_inputs, *val_targets, layer, "train_layer validation");

  auto& report = result.report;
  report.initial_train_cost = layer_cost(inputs, targets, layer, lambda, eps, output) / static_cast<double>(samples);

  Matrix vel_analysis = Matrix::Zero(layer.analysis.rows(), layer.analysis.cols());
  Matrix vel_synthesis = Matrix::Zero(layer.synthesis.rows(), layer.synthesis.cols());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(samples));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(derive_seed(config.seed, 1));

  Matrix batch_in, batch_target;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_indices(order.data(), order.size(), rng);
    for (Eigen::Index first = 0; first < samples; first += config.batch_size) {
      const Eigen::Index count = std::min<Eigen::Index>(config.batch_size, samples - first);
      const auto cols = Eigen::Map<const Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 1>>(order.data() + first, count);
      batch_in = inputs(Eigen::all, cols);
      batch_target = targets(Eigen::all, cols);
      const LayerGradients g = layer_gradients(batch_in, batch_target, layer, lambda, eps, output);
      const double step = config.learning_rate / static_cast<double>(count);
      vel_analysis = config.momentum * vel_analysis - step * g.analysis;
      vel_synthesis = config.momentum * vel_synthesis - step * g.synthesis;
      layer.analysis += vel_analysis;
      layer.synthesis += vel_synthesis;
    }
    const double cost = layer_cost(inputs, targets, layer, lambda, eps, output) / static_cast<double>(samples);
    if (!std::isfinite(cost)) throw TrainingError("train_layer: cost became non-finite", epoch + 1);
    report.train_cost.push_back(cost);
    if (has_val)
      report.val_cost.push_back(layer_cost(*val_inputs, *val_targets, layer, lambda, eps, output) /
                                static_cast<double>(val_inputs->cols()));
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SdaeModel::SdaeModel(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DimensionError("SdaeModel: no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].validate();
    if (l > 0 && layers_[l].input_dim() != layers_[l - 1].hidden_dim())
      throw DimensionError("SdaeModel: layer " + std::to_string(l + 1) + " expects " +
                           std::to_string(layers_[l].input_dim()) + " inputs but layer " + std::to_string(l) +
                           " produces " + std::to_string(layers_[l - 1].hidden_dim()));
  }
}

SdaeModel SdaeModel::initialized(std::span<const int> dims, std::uint64_t seed) {
  if (dims.size() < 2) throw ArgumentError("SdaeModel::initialized: need at least [d, h1]");
  validate_dims(dims, dims[0]);
  std::vector<Layer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    layers.push_back(Layer::initialized(dims[l], dims[l + 1], l == 0 ? seed : derive_seed(seed, l)));
  return SdaeModel(std::move(layers));
}

std::vector<int> SdaeModel::dims() const {
  std::vector<int> out;
  if (layers_.empty()) return out;
  out.push_back(static_cast<int>(layers_.front().input_dim()));
  for (const auto& l : layers_) out.push_back(static_cast<int>(l.hidden_dim()));
  return out;
}

bool operator==(const SdaeModel& a, const SdaeModel& b) {
  if (a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    const auto& x = a.layers_[l];
    const auto& y = b.layers_[l];
    if (x.analysis.rows() != y.analysis.rows() || x.analysis.cols() != y.analysis.cols() ||
        x.synthesis.rows() != y.synthesis.rows() || x.synthesis.cols() != y.synthesis.cols())
      return false;
    if (x.analysis != y.analysis || x.synthesis != y.synthesis) return false;
  }
  return true;
}

void validate_dims(std::span<const int> dims, Eigen::Index data_dim) {
  if (dims.size() < 2) throw ArgumentError("dims must list the input size and at least one hidden size");
  if (dims[0] != data_dim)
    throw ArgumentError("dims[0] = " + std::to_string(dims[0]) + " does not match data dimension " +
                        std::to_string(data_dim));
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] < 1 || dims[i] >= dims[i - 1])
      throw ArgumentError("dims must be strictly decreasing and positive (entry " + std::to_string(i) + " is " +
                          std::to_string(dims[i]) + ")");
}

std::vector<int> default_dims(int n, int depth) {
  if (n < 2) throw ArgumentError("default_dims: n must be >= 2");
  if (depth < 1) throw ArgumentError("default_dims: depth must be >= 1");
  std::vector<int> dims{n * n};
  int side = n;
  for (int l = 0; l < depth; ++l) {
    side /= 2;
    if (side < 1)
      throw ArgumentError("default_dims: depth " + std::to_string(depth) + " is too deep for n=" + std::to_string(n));
    dims.push_back(side * side);
  }
  return dims;
}

StackResult stack_train(const TrainingSet& set, std::span<const int> dims, const TrainConfig& config) {
  config.validate();
  validate_dims(dims, set.dim());
  if (set.targets.rows() != set.dim() || set.targets.cols() != set.columns())
    throw DimensionError("stack_train: inputs and targets differ in shape");

  TrainValSplit split = split_training_set(set, config.validation_fraction);
  const bool has_val = split.val_inputs.cols() > 0;
  Matrix features = std::move(split.train_inputs);
  Matrix val_features = std::move(split.val_inputs);

  const std::size_t depth = dims.size() - 1;
  std::vector<Layer> layers;
  StackResult result;
  for (std::size_t l = 0; l < depth; ++l) {
    TrainConfig layer_config = config;
    layer_config.seed = l == 0 ? config.seed : derive_seed(config.seed, l);
    if (l + 1 != depth) layer_config.lambda_sparse = 0.0;

    LayerTrainResult trained =
        l == 0 ? train_layer(features, split.train_targets, dims[1], layer_config, has_val ? &val_features : nullptr,
                             has_val ? &split.val_targets : nullptr)
               : train_layer(features, features, dims[l + 1], layer_config, has_val ? &val_features : nullptr,
                             has_val ? &val_features : nullptr, Output::logistic);
    if (l + 1 != depth) {
      features = encode_batch(features, trained.layer);
      if (has_val) val_features = encode_batch(val_features, trained.layer);
    }
    layers.push_back(std::move(trained.layer));
    result.reports.push_back(std::move(trained.report));
  }
  result.model = SdaeModel(std::move(layers));
  return result;
}

Vector reconstruct_vector(const SdaeModel& model, const Eigen::Ref<const Vector>& aliased, InferenceStats* stats) {
  const auto& layers = model.layers();
  if (layers.empty()) throw DimensionError("reconstruct: empty model");
  if (aliased.size() != model.input_dim())
    throw DimensionError("reconstruct: image has " + std::to_string(aliased.size()) + " pixels, model expects " +
                         std::to_string(model.input_dim()));
  InferenceStats local;
  Vector h = aliased;
  Vector z;
  for (const auto& layer : layers) {
    const auto d = layer.analysis.cols() - 1;
    z.noalias() = layer.analysis.leftCols(d) * h;
    z += layer.analysis.col(d);
    ++local.matvecs;
    h = z.unaryExpr([](double t) { return sigmoid(t); });
    ++local.sigmoid_passes;
  }
  for (std::size_t l = layers.size(); l-- > 1;) {
    z.noalias() = layers[l].synthesis * h;
    ++local.matvecs;
    h = z.unaryExpr([](double t) { return sigmoid(t); });
    ++local.sigmoid_passes;
  }
  Vector out = layers.front().synthesis * h;
  ++local.matvecs;
  if (stats) *stats = local;
  return out.cwiseMax(0.0).cwiseMin(1.0);
}

RealImage reconstruct(const SdaeModel& model, const RealImage& aliased, InferenceStats* stats) {
  return unvectorize(reconstruct_vector(model, vectorize(aliased), stats), aliased.size());
}

namespace {

constexpr std::uint32_t kModelVersion = 1;

void write_matrix(detail::ByteWriter& out, const Matrix& m) {
  out.u32(static_cast<std::uint32_t>(m.rows()));
  out.u32(static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.f64(m(i, j));
}

Matrix read_matrix(detail::ByteReader& in) {
  const auto rows = in.u32("matrix rows");
  const auto cols = in.u32("matrix cols");
  if (rows == 0 || cols == 0) in.fail("empty matrix");
  in.need(static_cast<std::size_t>(rows) * cols * 8, "matrix payload");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = in.f64("matrix payload");
  return m;
}

}  // namespace

std::vector<std::byte> encode_model(const SdaeModel& model) {
  detail::ByteWriter out;
  out.magic("SDAE");
  out.u32(kModelVersion);
  out.u32(static_cast<std::uint32_t>(model.depth()));
  for (const auto& layer : model.layers()) {
    write_matrix(out, layer.analysis);
    write_matrix(out, layer.synthesis);
  }
  return out.take();
}

SdaeModel decode_model(std::span<const std::byte> bytes) {
  detail::ByteReader in(bytes, "SDAE model");
  in.expect_magic("SDAE");
  const auto version = in.u32("version");
  if (version != kModelVersion)
    in.fail("unsupported version " + std::to_string(version) + " (expected " + std::to_string(kModelVersion) + ")");
  const auto depth = in.u32("layer count");
  if (depth == 0) in.fail("model has no layers");
  std::vector<Layer> layers;
  for (std::uint32_t l = 0; l < depth; ++l) {
    Layer layer;
    layer.analysis = read_matrix(in);
    layer.synthesis = read_matrix(in);
    layers.push_back(std::move(layer));
  }
  in.expect_end();
  try {
    return SdaeModel(std::move(layers));
  } catch (const DimensionError& e) {
    throw FormatError(std::string("SDAE model: ") + e.what(), in.offset());
  }
}

void save_model(const SdaeModel& model, const std::filesystem::path& path) {
  write_file_bytes(path, encode_model(model));
}

SdaeModel load_model(const std::filesystem::path& path) { return decode_model(read_file_bytes(path)); }

}  // namespace aliasnet
