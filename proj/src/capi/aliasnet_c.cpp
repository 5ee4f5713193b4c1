#include "aliasnet/aliasnet.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "aliasnet/baselines.hpp"
#include "aliasnet/kspace.hpp"
#include "aliasnet/metrics.hpp"
#include "aliasnet/phantom.hpp"
#include "aliasnet/report.hpp"
#include "aliasnet/rng.hpp"
#include "aliasnet/sdae.hpp"
#include "aliasnet/tensor_io.hpp"

using namespace aliasnet;

struct an_mask {
  SamplingMask mask;
};
struct an_sequence {
  std::vector<RealImage> frames;
};
struct an_kspace {
  std::vector<KSpaceFrame> frames;
};
struct an_trainset {
  TrainingSet set;
};
struct an_model {
  SdaeModel model;
};
struct an_train_log {
  std::vector<TrainReport> reports;
};
struct an_recon {
  std::vector<FrameEstimate> estimates;
};
struct an_metric_table {
  std::vector<MetricRow> rows;
};

namespace {

thread_local std::string g_last_error;

an_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Argument: return AN_ERR_ARGUMENT;
    case ErrorKind::Dimension: return AN_ERR_DIMENSION;
    case ErrorKind::Format: return AN_ERR_FORMAT;
    case ErrorKind::Io: return AN_ERR_IO;
    case ErrorKind::Training: return AN_ERR_TRAINING;
    case ErrorKind::Solver: return AN_ERR_SOLVER;
    case ErrorKind::Nondeterminism: return AN_ERR_NONDETERMINISM;
  }
  return AN_ERR_INTERNAL;
}

template <class F>
an_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return AN_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return AN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return AN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return AN_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw ArgumentError(std::string(what) + " must not be NULL");
}

int side(uint32_t n) {
  if (n > 1u << 15) throw ArgumentError("side length " + std::to_string(n) + " is too large");
  return static_cast<int>(n);
}

void require_len(size_t len, size_t expected, const char* what) {
  if (len != expected)
    throw DimensionError(std::string(what) + ": buffer holds " + std::to_string(len) + " values, need " +
                         std::to_string(expected));
}

template <class Handle, class... Args>
void emit(Handle** out, Args&&... args) {
  require(out, "out");
  *out = new Handle{std::forward<Args>(args)...};
}

std::vector<int> to_dims(const uint32_t* dims, size_t len) {
  require(dims, "dims");
  std::vector<int> out;
  for (size_t i = 0; i < len; ++i) {
    if (dims[i] > static_cast<uint32_t>(std::numeric_limits<int>::max())) throw ArgumentError("dimension too large");
    out.push_back(static_cast<int>(dims[i]));
  }
  return out;
}

void copy_dims(const std::vector<int>& src, uint32_t* dims, size_t capacity, size_t* len) {
  require(len, "len");
  *len = src.size();
  if (dims == nullptr) return;
  for (size_t i = 0; i < src.size() && i < capacity; ++i) dims[i] = static_cast<uint32_t>(src[i]);
}

IstaConfig to_ista(const an_ista_config* c) {
  IstaConfig cfg;
  if (c) {
    cfg.lambda = c->lambda;
    cfg.max_iters = static_cast<int>(c->max_iters);
    cfg.tol = c->tol;
    cfg.step = c->step;
  }
  return cfg;
}

Method to_method(an_method m) {
  switch (m) {
    case AN_METHOD_ZERO_FILLED: return Method::ZeroFilled;
    case AN_METHOD_DIFF_CS: return Method::DiffCs;
    case AN_METHOD_SDAE: return Method::Sdae;
  }
  throw ArgumentError("unknown method code " + std::to_string(static_cast<int>(m)));
}

const SdaeModel* model_for(an_method method, const an_model* model) {
  if (method != AN_METHOD_SDAE) return nullptr;
  require(model, "model");
  return &model->model;
}

RealImage image_from(const double* data, uint32_t n) {
  require(data, "image data");
  const int s = side(n);
  const auto area = static_cast<size_t>(s) * s;
  return RealImage(s, std::vector<double>(data, data + area));
}

}  // namespace

extern "C" {

const char* an_last_error(void) { return g_last_error.c_str(); }

const char* an_status_name(an_status status) {
  switch (status) {
    case AN_OK: return "ok";
    case AN_ERR_ARGUMENT: return "argument error";
    case AN_ERR_DIMENSION: return "dimension error";
    case AN_ERR_FORMAT: return "format error";
    case AN_ERR_IO: return "io error";
    case AN_ERR_TRAINING: return "training error";
    case AN_ERR_SOLVER: return "solver error";
    case AN_ERR_NONDETERMINISM: return "nondeterminism error";
    case AN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* an_version(void) { return "0.1.0"; }

// ---- masks

an_status an_mask_variable_density(uint32_t n, double fraction, double decay, uint64_t seed, an_mask** out) {
  return guarded([&] { emit(out, mask_variable_density(side(n), fraction, decay, seed)); });
}

an_status an_mask_radial(uint32_t n, uint32_t lines, uint64_t seed, an_mask** out) {
  return guarded([&] {
    if (lines > 1u << 20) throw ArgumentError("too many radial lines");
    emit(out, mask_radial(side(n), static_cast<int>(lines), seed));
  });
}

an_status an_mask_uniform(uint32_t n, uint32_t factor, an_mask** out) {
  return guarded([&] {
    if (factor > 1u << 20) throw ArgumentError("uniform factor too large");
    emit(out, mask_uniform(side(n), static_cast<int>(factor)));
  });
}

an_status an_mask_from_spec(const char* spec, uint32_t n, uint64_t seed, an_mask** out) {
  return guarded([&] {
    require(spec, "spec");
    emit(out, mask_from_spec(spec, side(n), seed));
  });
}

an_status an_mask_load(const char* path, an_mask** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, mask_from_tensor(read_tensor(path)));
  });
}

an_status an_mask_save(const an_mask* mask, const char* path) {
  return guarded([&] {
    require(mask, "mask");
    require(path, "path");
    write_tensor(path, to_tensor(mask->mask));
  });
}

uint32_t an_mask_size(const an_mask* mask) { return mask ? static_cast<uint32_t>(mask->mask.size()) : 0; }
size_t an_mask_count(const an_mask* mask) { return mask ? mask->mask.count() : 0; }
double an_mask_fraction(const an_mask* mask) { return mask ? mask->mask.fraction() : 0.0; }

an_status an_mask_bits(const an_mask* mask, uint8_t* out, size_t len) {
  return guarded([&] {
    require(mask, "mask");
    require(out, "out");
    require_len(len, mask->mask.area(), "an_mask_bits");
    std::memcpy(out, mask->mask.bits().data(), len);
  });
}

void an_mask_free(an_mask* mask) { delete mask; }

// ---- sequences

an_status an_sequence_create(uint32_t n, size_t frames, const double* data, size_t len, an_sequence** out) {
  return guarded([&] {
    require(data, "data");
    const int s = side(n);
    const size_t area = static_cast<size_t>(s) * s;
    if (frames == 0) throw ArgumentError("an_sequence_create: frames must be >= 1");
    require_len(len, area * frames, "an_sequence_create");
    std::vector<RealImage> images;
    for (size_t f = 0; f < frames; ++f) images.emplace_back(s, std::vector<double>(data + f * area, data + (f + 1) * area));
    emit(out, std::move(images));
  });
}

an_status an_sequence_shepp_logan(uint32_t n, an_sequence** out) {
  return guarded([&] { emit(out, std::vector<RealImage>{shepp_logan(side(n))}); });
}

an_status an_sequence_dynamic_phantom(uint32_t n, size_t frames, size_t period, double motion_amp, uint64_t seed,
                                      an_sequence** out) {
  return guarded([&] {
    if (frames > 1u << 24 || period > 1u << 24) throw ArgumentError("frame count too large");
    auto seq = dynamic_phantom(side(n), static_cast<int>(frames), static_cast<int>(period), motion_amp, seed);
    emit(out, std::move(seq.frames));
  });
}

an_status an_sequence_concat(const an_sequence* const* parts, size_t count, an_sequence** out) {
  return guarded([&] {
    require(parts, "parts");
    if (count == 0) throw ArgumentError("an_sequence_concat: no sequences");
    std::vector<RealImage> frames;
    for (size_t i = 0; i < count; ++i) {
      require(parts[i], "sequence");
      for (const auto& f : parts[i]->frames) {
        if (!frames.empty()) require_same_size(f.size(), frames.front().size(), "an_sequence_concat");
        frames.push_back(f);
      }
    }
    emit(out, std::move(frames));
  });
}

an_status an_sequence_load(const char* path, an_sequence** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, real_frames_from_tensor(read_tensor(path)));
  });
}

an_status an_sequence_save(const an_sequence* seq, const char* path) {
  return guarded([&] {
    require(seq, "sequence");
    require(path, "path");
    write_tensor(path, frames_to_tensor(std::span<const RealImage>(seq->frames)));
  });
}

uint32_t an_sequence_size(const an_sequence* seq) {
  return seq && !seq->frames.empty() ? static_cast<uint32_t>(seq->frames.front().size()) : 0;
}

size_t an_sequence_frames(const an_sequence* seq) { return seq ? seq->frames.size() : 0; }

an_status an_sequence_frame(const an_sequence* seq, size_t index, double* out, size_t len) {
  return guarded([&] {
    require(seq, "sequence");
    require(out, "out");
    if (index >= seq->frames.size()) throw ArgumentError("frame index " + std::to_string(index) + " out of range");
    const auto& f = seq->frames[index];
    require_len(len, f.area(), "an_sequence_frame");
    std::memcpy(out, f.data(), len * sizeof(double));
  });
}

void an_sequence_free(an_sequence* seq) { delete seq; }

// ---- acquisition

an_status an_acquire(const an_sequence* seq, const an_mask* mask, double noise_sigma, uint64_t seed, an_kspace** out) {
  return guarded([&] {
    require(seq, "sequence");
    require(mask, "mask");
    std::vector<KSpaceFrame> frames;
    for (size_t t = 0; t < seq->frames.size(); ++t)
      frames.push_back(acquire(seq->frames[t], mask->mask, noise_sigma, derive_seed(seed, t)));
    emit(out, std::move(frames));
  });
}

an_status an_kspace_load(const char* path, an_kspace** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, complex_frames_from_tensor(read_tensor(path)));
  });
}

an_status an_kspace_save(const an_kspace* kspace, const char* path) {
  return guarded([&] {
    require(kspace, "kspace");
    require(path, "path");
    write_tensor(path, frames_to_tensor(std::span<const ComplexGrid>(kspace->frames)));
  });
}

size_t an_kspace_frames(const an_kspace* kspace) { return kspace ? kspace->frames.size() : 0; }

uint32_t an_kspace_size(const an_kspace* kspace) {
  return kspace && !kspace->frames.empty() ? static_cast<uint32_t>(kspace->frames.front().size()) : 0;
}

an_status an_zero_filled(const an_kspace* kspace, const an_mask* mask, an_sequence** out) {
  return guarded([&] {
    require(kspace, "kspace");
    require(mask, "mask");
    std::vector<RealImage> frames;
    for (const auto& k : kspace->frames) frames.push_back(zero_filled(k, mask->mask));
    emit(out, std::move(frames));
  });
}

void an_kspace_free(an_kspace* kspace) { delete kspace; }

// ---- training sets

an_status an_trainset_build(const an_sequence* const* sequences, size_t count, const an_mask* mask,
                            double noise_sigma, uint64_t seed, an_trainset** out) {
  return guarded([&] {
    require(sequences, "sequences");
    require(mask, "mask");
    std::vector<DynamicSequence> seqs;
    for (size_t i = 0; i < count; ++i) {
      require(sequences[i], "sequence");
      seqs.push_back(DynamicSequence{sequences[i]->frames, 1, 0});
    }
    emit(out, build_training_set(seqs, mask->mask, noise_sigma, seed));
  });
}

an_status an_trainset_load(const char* path, an_trainset** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, load_training_set(path));
  });
}

an_status an_trainset_save(const an_trainset* set, const char* path) {
  return guarded([&] {
    require(set, "training set");
    require(path, "path");
    save_training_set(path, set->set);
  });
}

size_t an_trainset_dim(const an_trainset* set) { return set ? static_cast<size_t>(set->set.dim()) : 0; }
size_t an_trainset_columns(const an_trainset* set) { return set ? static_cast<size_t>(set->set.columns()) : 0; }

an_status an_trainset_column(const an_trainset* set, size_t index, double* input, double* target, size_t len) {
  return guarded([&] {
    require(set, "training set");
    if (index >= static_cast<size_t>(set->set.columns())) throw ArgumentError("column index out of range");
    require_len(len, static_cast<size_t>(set->set.dim()), "an_trainset_column");
    const auto col = static_cast<Eigen::Index>(index);
    if (input) Eigen::Map<Eigen::VectorXd>(input, set->set.dim()) = set->set.inputs.col(col);
    if (target) Eigen::Map<Eigen::VectorXd>(target, set->set.dim()) = set->set.targets.col(col);
  });
}

void an_trainset_free(an_trainset* set) { delete set; }

// ---- SDAE

void an_train_config_default(an_train_config* config) {
  if (!config) return;
  const TrainConfig d;
  *config = an_train_config{d.learning_rate, d.momentum,   static_cast<uint32_t>(d.epochs),
                            static_cast<uint32_t>(d.batch_size), d.lambda_sparse, d.smooth_eps,
                            d.validation_fraction, d.seed};
}

an_status an_default_dims(uint32_t n, uint32_t depth, uint32_t* dims, size_t capacity, size_t* len) {
  return guarded([&] {
    if (depth > 64) throw ArgumentError("depth too large");
    copy_dims(default_dims(side(n), static_cast<int>(depth)), dims, capacity, len);
  });
}

an_status an_model_train(const an_trainset* set, const uint32_t* dims, size_t dims_len, const an_train_config* config,
                         an_model** model, an_train_log** log) {
  return guarded([&] {
    require(set, "training set");
    require(model, "model");
    TrainConfig cfg;
    if (config) {
      if (config->epochs > static_cast<uint32_t>(std::numeric_limits<int>::max()) ||
          config->batch_size > static_cast<uint32_t>(std::numeric_limits<int>::max()))
        throw ArgumentError("epochs or batch_size too large");
      cfg.learning_rate = config->learning_rate;
      cfg.momentum = config->momentum;
      cfg.epochs = static_cast<int>(config->epochs);
      cfg.batch_size = static_cast<int>(config->batch_size);
      cfg.lambda_sparse = config->lambda_sparse;
      cfg.smooth_eps = config->smooth_eps;
      cfg.validation_fraction = config->validation_fraction;
      cfg.seed = config->seed;
    }
    const auto d = to_dims(dims, dims_len);
    StackResult result = stack_train(set->set, d, cfg);
    *model = new an_model{std::move(result.model)};
    if (log) *log = new an_train_log{std::move(result.reports)};
  });
}

an_status an_model_random(const uint32_t* dims, size_t dims_len, uint64_t seed, an_model** out) {
  return guarded([&] {
    const auto d = to_dims(dims, dims_len);
    emit(out, SdaeModel::initialized(d, seed));
  });
}

an_status an_model_load(const char* path, an_model** out) {
  return guarded([&] {
    require(path, "path");
    emit(out, load_model(path));
  });
}

an_status an_model_save(const an_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    save_model(model->model, path);
  });
}

size_t an_model_depth(const an_model* model) { return model ? model->model.depth() : 0; }

an_status an_model_dims(const an_model* model, uint32_t* dims, size_t capacity, size_t* len) {
  return guarded([&] {
    require(model, "model");
    copy_dims(model->model.dims(), dims, capacity, len);
  });
}

an_status an_model_reconstruct_counted(const an_model* model, const double* aliased, double* out, size_t len,
                                       size_t* matvecs, size_t* sigmoid_passes) {
  return guarded([&] {
    require(model, "model");
    require(aliased, "aliased");
    require(out, "out");
    require_len(len, static_cast<size_t>(model->model.input_dim()), "an_model_reconstruct");
    InferenceStats stats;
    const auto n = static_cast<Eigen::Index>(len);
    Eigen::Map<Eigen::VectorXd>(out, n) = reconstruct_vector(model->model, Eigen::Map<const Eigen::VectorXd>(aliased, n), &stats);
    if (matvecs) *matvecs = stats.matvecs;
    if (sigmoid_passes) *sigmoid_passes = stats.sigmoid_passes;
  });
}

an_status an_model_reconstruct(const an_model* model, const double* aliased, double* out, size_t len) {
  return an_model_reconstruct_counted(model, aliased, out, len, nullptr, nullptr);
}

void an_model_free(an_model* model) { delete model; }

size_t an_train_log_layers(const an_train_log* log) { return log ? log->reports.size() : 0; }

size_t an_train_log_epochs(const an_train_log* log, size_t layer) {
  return log && layer < log->reports.size() ? log->reports[layer].train_cost.size() : 0;
}

an_status an_train_log_cost(const an_train_log* log, size_t layer, size_t epoch, double* train, double* val) {
  return guarded([&] {
    require(log, "log");
    if (layer >= log->reports.size()) throw ArgumentError("layer index out of range");
    const auto& r = log->reports[layer];
    if (epoch >= r.train_cost.size()) throw ArgumentError("epoch index out of range");
    if (train) *train = r.train_cost[epoch];
    if (val) *val = epoch < r.val_cost.size() ? r.val_cost[epoch] : std::numeric_limits<double>::quiet_NaN();
  });
}

an_status an_train_log_write_csv(const an_train_log* log, size_t layer, const char* path) {
  return guarded([&] {
    require(log, "log");
    require(path, "path");
    if (layer >= log->reports.size()) throw ArgumentError("layer index out of range");
    write_train_report_csv(path, log->reports[layer]);
  });
}

void an_train_log_free(an_train_log* log) { delete log; }

// ---- online reconstruction

void an_ista_config_default(an_ista_config* config) {
  if (!config) return;
  const IstaConfig d;
  *config = an_ista_config{d.lambda, static_cast<uint32_t>(d.max_iters), d.tol, d.step};
}

an_status an_method_parse(const char* name, an_method* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    switch (parse_method(name)) {
      case Method::ZeroFilled: *out = AN_METHOD_ZERO_FILLED; break;
      case Method::DiffCs: *out = AN_METHOD_DIFF_CS; break;
      case Method::Sdae: *out = AN_METHOD_SDAE; break;
    }
  });
}

const char* an_method_name(an_method method) {
  switch (method) {
    case AN_METHOD_ZERO_FILLED: return "zero_filled";
    case AN_METHOD_DIFF_CS: return "diff_cs";
    case AN_METHOD_SDAE: return "sdae";
  }
  return "unknown";
}

an_status an_online_reconstruct(const an_kspace* kspace, const an_mask* mask, an_method method, const an_model* model,
                                const an_ista_config* ista, an_recon** out) {
  return guarded([&] {
    require(kspace, "kspace");
    require(mask, "mask");
    emit(out, online_reconstruct(std::span<const KSpaceFrame>(kspace->frames), mask->mask, to_method(method),
                                 model_for(method, model), to_ista(ista)));
  });
}

size_t an_recon_frames(const an_recon* recon) { return recon ? recon->estimates.size() : 0; }

an_status an_recon_frame(const an_recon* recon, size_t index, double* out, size_t len) {
  return guarded([&] {
    require(recon, "recon");
    require(out, "out");
    if (index >= recon->estimates.size()) throw ArgumentError("frame index out of range");
    const auto& img = recon->estimates[index].image;
    require_len(len, img.area(), "an_recon_frame");
    std::memcpy(out, img.data(), len * sizeof(double));
  });
}

double an_recon_latency(const an_recon* recon, size_t index) {
  return recon && index < recon->estimates.size() ? recon->estimates[index].latency_s : 0.0;
}

size_t an_recon_iterations(const an_recon* recon, size_t index) {
  return recon && index < recon->estimates.size() ? static_cast<size_t>(recon->estimates[index].iters_used) : 0;
}

an_status an_recon_images(const an_recon* recon, an_sequence** out) {
  return guarded([&] {
    require(recon, "recon");
    std::vector<RealImage> frames;
    for (const auto& e : recon->estimates) frames.push_back(e.image);
    emit(out, std::move(frames));
  });
}

an_status an_recon_write_traces_csv(const an_recon* recon, const char* path) {
  return guarded([&] {
    require(recon, "recon");
    require(path, "path");
    write_objective_traces_csv(path, recon->estimates);
  });
}

void an_recon_free(an_recon* recon) { delete recon; }

// ---- metrics

an_status an_nmse(const double* est, const double* ref, uint32_t n, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = nmse(image_from(est, n), image_from(ref, n));
  });
}

an_status an_ssim(const double* est, const double* ref, uint32_t n, double dynamic_range, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ssim(image_from(est, n), image_from(ref, n), dynamic_range);
  });
}

namespace {

void fill_latency(const LatencyReport& r, an_latency* out) {
  *out = an_latency{r.mean_s, r.std_s, r.frames_per_second, r.per_frame_s.size()};
}

}  // namespace

an_status an_benchmark(an_frame_fn fn, void* user, uint32_t n, size_t frames, uint32_t warmup, uint32_t reps,
                       an_latency* out) {
  return guarded([&] {
    if (fn == nullptr) throw ArgumentError("fn must not be NULL");
    require(out, "out");
    const int s = side(n);
    auto recon = [&](std::size_t f) {
      RealImage img(s);
      if (fn(user, f, img.data(), img.area()) != 0)
        throw ArgumentError("benchmark callback failed on frame " + std::to_string(f));
      return img;
    };
    fill_latency(benchmark_latency(recon, frames, static_cast<int>(warmup), static_cast<int>(reps)), out);
  });
}

an_status an_benchmark_method(const an_kspace* kspace, const an_mask* mask, an_method method, const an_model* model,
                              const an_ista_config* ista, uint32_t warmup, uint32_t reps, an_latency* out) {
  return guarded([&] {
    require(kspace, "kspace");
    require(mask, "mask");
    require(out, "out");
    const auto& frames = kspace->frames;
    if (frames.empty()) throw ArgumentError("an_benchmark_method: no frames");
    const Method m = to_method(method);
    const SdaeModel* sdae = model_for(method, model);
    const IstaConfig cfg = to_ista(ista);
    const SamplingMask& sm = mask->mask;

    std::function<RealImage(std::size_t)> recon;
    std::vector<FrameEstimate> reference;
    switch (m) {
      case Method::ZeroFilled:
        recon = [&](std::size_t f) { return zero_filled(frames[f], sm); };
        break;
      case Method::Sdae:
        OnlineReconstructor(sm, m, sdae, cfg);  // validates model/frame compatibility
        recon = [&](std::size_t f) {
          RealImage aliased = zero_filled(frames[f], sm);
          for (auto& v : aliased.values()) v = std::clamp(v, 0.0, 1.0);
          return reconstruct(*sdae, aliased);
        };
        break;
      case Method::DiffCs:
        reference = online_reconstruct(std::span<const KSpaceFrame>(frames), sm, m, nullptr, cfg);
        recon = [&](std::size_t f) {
          if (f == 0) {
            RealImage aliased = zero_filled(frames[0], sm);
            for (auto& v : aliased.values()) v = std::clamp(v, 0.0, 1.0);
            return aliased;
          }
          return differential_cs(frames[f], reference[f - 1].image, sm, cfg).image;
        };
        break;
    }
    fill_latency(benchmark_latency(recon, frames.size(), static_cast<int>(warmup), static_cast<int>(reps)), out);
  });
}

// ---- metric tables

an_status an_metric_table_create(an_metric_table** out) {
  return guarded([&] { emit(out); });
}

an_status an_metric_table_add(an_metric_table* table, const char* dataset, const char* method, size_t frame,
                              double nmse_value, double ssim_value, double latency_s) {
  return guarded([&] {
    require(table, "table");
    require(dataset, "dataset");
    require(method, "method");
    table->rows.push_back(MetricRow{dataset, method, frame, nmse_value, ssim_value, latency_s});
  });
}

an_status an_metric_table_add_recon(an_metric_table* table, const char* dataset, const char* method,
                                    const an_recon* recon, const an_sequence* truth) {
  return guarded([&] {
    require(table, "table");
    require(dataset, "dataset");
    require(method, "method");
    require(recon, "recon");
    require(truth, "truth");
    if (recon->estimates.size() != truth->frames.size())
      throw DimensionError("an_metric_table_add_recon: " + std::to_string(recon->estimates.size()) +
                           " estimates for " + std::to_string(truth->frames.size()) + " reference frames");
    std::vector<MetricRow> rows;
    for (size_t t = 0; t < truth->frames.size(); ++t) {
      const auto q = score(recon->estimates[t].image, truth->frames[t]);
      rows.push_back(MetricRow{dataset, method, t, q.nmse, q.ssim, recon->estimates[t].latency_s});
    }
    table->rows.insert(table->rows.end(), rows.begin(), rows.end());
  });
}

size_t an_metric_table_rows(const an_metric_table* table) { return table ? table->rows.size() : 0; }

an_status an_metric_table_write_csv(const an_metric_table* table, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(path, "path");
    write_metrics_csv(path, table->rows);
  });
}

an_status an_metric_table_write_summary_csv(const an_metric_table* table, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(path, "path");
    write_summary_csv(path, summarize(table->rows));
  });
}

an_status an_metric_table_summary(const an_metric_table* table, const char* dataset, const char* method,
                                  double* nmse_mean, double* nmse_std, double* ssim_mean, double* ssim_std) {
  return guarded([&] {
    require(table, "table");
    require(dataset, "dataset");
    require(method, "method");
    for (const auto& s : summarize(table->rows)) {
      if (s.dataset != dataset || s.method != method) continue;
      if (nmse_mean) *nmse_mean = s.nmse_mean;
      if (nmse_std) *nmse_std = s.nmse_std;
      if (ssim_mean) *ssim_mean = s.ssim_mean;
      if (ssim_std) *ssim_std = s.ssim_std;
      return;
    }
    throw ArgumentError(std::string("no rows for dataset \"") + dataset + "\" and method \"" + method + "\"");
  });
}

void an_metric_table_free(an_metric_table* table) { delete table; }

size_t an_format_number(double value, char* buf, size_t capacity) {
  const std::string text = format_number(value);
  if (buf == nullptr || capacity == 0) return text.size();
  const size_t count = std::min(text.size(), capacity - 1);
  std::memcpy(buf, text.data(), count);
  buf[count] = '\0';
  return count;
}

}  // extern "C"
