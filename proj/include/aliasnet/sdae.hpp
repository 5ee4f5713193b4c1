#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "aliasnet/grid.hpp"
#include "aliasnet/phantom.hpp"

namespace aliasnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Logistic function, evaluated without overflow for any finite t.
inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// One autoencoder stage. The encoder acts on the input augmented with a
/// constant 1, so its last column is the bias. The decoder is linear with no
/// bias.
struct Layer {
  Matrix analysis;   ///< hidden x (input + 1)
  Matrix synthesis;  ///< input x hidden

  Eigen::Index input_dim() const { return synthesis.rows(); }
  Eigen::Index hidden_dim() const { return analysis.rows(); }

  /// Throws DimensionError when the two matrices disagree or hold non-finite values.
  void validate() const;

  /// Glorot-uniform weights in +-sqrt(6 / (in + hidden)), zero bias.
  static Layer initialized(Eigen::Index input_dim, Eigen::Index hidden_dim, std::uint64_t seed);
};

/// sigmoid(W_A [x; 1])
Vector encode_layer(const Eigen::Ref<const Vector>& x, const Layer& layer);
/// W_S h
Vector decode_layer(const Eigen::Ref<const Vector>& h, const Layer& layer);

/// Pre-activations W_A [X; 1] for a column batch.
Matrix preactivation(const Eigen::Ref<const Matrix>& inputs, const Layer& layer);
Matrix encode_batch(const Eigen::Ref<const Matrix>& inputs, const Layer& layer);

/// How a layer's reconstruction is formed during training. Inner layers of a
/// stack are followed by a sigmoid at inference, so they train with one too.
enum class Output { linear, logistic };

/// ||T - Y||_F^2 + lambda * sum sqrt(Z^2 + eps^2), Z = W_A [X; 1], where
/// Y = W_S sigmoid(Z) (linear) or sigmoid(W_S sigmoid(Z)) (logistic).
double layer_cost(const Eigen::Ref<const Matrix>& inputs, const Eigen::Ref<const Matrix>& targets,
                  const Layer& layer, double lambda, double eps, Output output = Output::linear);

struct LayerGradients {
  Matrix analysis;
  Matrix synthesis;
};

/// Exact gradient of layer_cost with respect to both weight matrices.
LayerGradients layer_gradients(const Eigen::Ref<const Matrix>& inputs, const Eigen::Ref<const Matrix>& targets,
                               const Layer& layer, double lambda, double eps,
                               Output output = Output::linear);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int epochs = 200;
  int batch_size = 64;
  double lambda_sparse = 1e-3;  ///< bottleneck sparsity weight
  double smooth_eps = 1e-8;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Costs are per-sample means (layer_cost / N) evaluated on the full
/// training and validation sets after each epoch.
struct TrainReport {
  std::vector<double> train_cost;
  std::vector<double> val_cost;
  double initial_train_cost = 0.0;
  double seconds = 0.0;
};

struct LayerTrainResult {
  Layer layer;
  TrainReport report;
};

/// Mini-batch gradient descent with momentum on layer_cost (lambda taken from
/// config.lambda_sparse). Batches follow a seeded permutation per epoch; the
/// update uses the batch-mean gradient. Validation matrices are optional and
/// leave val_cost empty when absent.
LayerTrainResult train_layer(const Matrix& inputs, const Matrix& targets, Eigen::Index hidden,
                             const TrainConfig& config, const Matrix* val_inputs = nullptr,
                             const Matrix* val_targets = nullptr, Output output = Output::linear);

class SdaeModel {
 public:
  SdaeModel() = default;
  explicit SdaeModel(std::vector<Layer> layers);

  /// Randomly initialized model with the same scheme as training.
  static SdaeModel initialized(std::span<const int> dims, std::uint64_t seed);

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  /// [d, h1, ..., hL]
  std::vector<int> dims() const;
  Eigen::Index input_dim() const { return layers_.empty() ? 0 : layers_.front().input_dim(); }

  friend bool operator==(const SdaeModel& a, const SdaeModel& b);

 private:
  std::vector<Layer> layers_;
};

struct StackResult {
  SdaeModel model;
  std::vector<TrainReport> reports;  ///< one per layer, outermost first
};

/// Greedy layer-wise training. Layer 1 maps aliased inputs to clean targets;
/// each deeper layer is a plain autoencoder on the previous layer's codes of
/// the aliased inputs, trained with a logistic output to match the decode
/// path. Only the deepest layer gets lambda_sparse. There is no joint
/// fine-tuning afterwards.
StackResult stack_train(const TrainingSet& set, std::span<const int> dims, const TrainConfig& config);

/// Checks dims[0] == d, at least one hidden layer and strictly decreasing sizes.
void validate_dims(std::span<const int> dims, Eigen::Index data_dim);

/// Architecture for an n x n image: each stage halves the side (floor) and
/// uses its square, so n=100 gives [10000, 2500, 625, 144, 36] and n=32 gives
/// [1024, 256, 64, 16, 4]. Returns the first depth+1 entries.
std::vector<int> default_dims(int n, int depth);

/// Operation counts of one inference, filled in when requested.
struct InferenceStats {
  std::size_t matvecs = 0;
  std::size_t sigmoid_passes = 0;
};

/// Full encode/decode pass. Encoder stages apply the sigmoid; decoder stages
/// apply it between synthesis maps but not after the last one. The result is
/// clipped to [0, 1].
Vector reconstruct_vector(const SdaeModel& model, const Eigen::Ref<const Vector>& aliased,
                          InferenceStats* stats = nullptr);
RealImage reconstruct(const SdaeModel& model, const RealImage& aliased, InferenceStats* stats = nullptr);

/// Model file: "SDAE", u32 version (1), u32 L, then per layer the analysis
/// and synthesis matrices as u32 rows, u32 cols and float64 row-major data.
std::vector<std::byte> encode_model(const SdaeModel& model);
SdaeModel decode_model(std::span<const std::byte> bytes);
void save_model(const SdaeModel& model, const std::filesystem::path& path);
SdaeModel load_model(const std::filesystem::path& path);

}  // namespace aliasnet
