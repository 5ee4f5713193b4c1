#include "aliasnet/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "aliasnet/kspace.hpp"
#include "aliasnet/sdae.hpp"

namespace aliasnet {

void IstaConfig::validate() const {
  if (!(lambda >= 0.0)) throw ArgumentError("ista: lambda must be >= 0");
  if (max_iters < 1) throw ArgumentError("ista: max_iters must be >= 1");
  if (!(tol >= 0.0)) throw ArgumentError("ista: tol must be >= 0");
  if (!(step > 0.0 && step <= 1.0)) throw ArgumentError("ista: step must be in (0, 1]");
}

namespace {

// y - A(x_prev + delta); the returned grid is also the data-term residual.
ComplexGrid residual(const KSpaceFrame& y, const RealImage& x_prev, const RealImage& delta, const SamplingMask& mask) {
  const int n = x_prev.size();
  ComplexGrid r(n);
  for (std::size_t i = 0; i < r.area(); ++i) r[i] = Complex(x_prev[i] + delta[i], 0.0);
  dft2_inplace(r);
  for (std::size_t i = 0; i < r.area(); ++i) r[i] = mask[i] ? y[i] - r[i] : y[i];
  return r;
}

double objective_from(const ComplexGrid& r, const RealImage& delta, double lambda) {
  double data = 0.0;
  for (const auto& z : r.values()) data += std::norm(z);
  double l1 = 0.0;
  for (double v : delta.values()) l1 += std::abs(v);
  return data + lambda * l1;
}

}  // namespace

double differential_objective(const KSpaceFrame& y, const RealImage& x_prev, const RealImage& delta,
                              const SamplingMask& mask, double lambda) {
  require_same_size(y.size(), mask.size(), "differential_objective");
  require_same_size(x_prev.size(), mask.size(), "differential_objective");
  require_same_size(delta.size(), mask.size(), "differential_objective");
  return objective_from(residual(y, x_prev, delta, mask), delta, lambda);
}

FrameEstimate differential_cs(const KSpaceFrame& y, const RealImage& x_prev, const SamplingMask& mask,
                              const IstaConfig& config) {
  config.validate();
  require_same_size(y.size(), mask.size(), "differential_cs");
  require_same_size(x_prev.size(), mask.size(), "differential_cs");
  for (double v : x_prev.values())
    if (!std::isfinite(v)) throw ArgumentError("differential_cs: previous frame is not finite");

  const int n = x_prev.size();
  const double threshold = config.step * config.lambda / 2.0;
  RealImage delta(n);
  ComplexGrid r = residual(y, x_prev, delta, mask);
  double f = objective_from(r, delta, config.lambda);
  if (!std::isfinite(f)) throw SolverError("differential_cs: initial objective is not finite");

  FrameEstimate est;
  est.objective_trace.push_back(f);
  ComplexGrid grad(n);
  while (est.iters_used < config.max_iters) {
    for (std::size_t i = 0; i < grad.area(); ++i) grad[i] = mask[i] ? r[i] : Complex(0.0, 0.0);
    idft2_inplace(grad);
    for (std::size_t i = 0; i < delta.area(); ++i)
      delta[i] = soft_threshold(delta[i] + config.step * grad[i].real(), threshold);

    r = residual(y, x_prev, delta, mask);
    const double next = objective_from(r, delta, config.lambda);
    if (!std::isfinite(next))
      throw SolverError("differential_cs: objective became non-finite at iteration " +
                        std::to_string(est.iters_used + 1));
    est.objective_trace.push_back(next);
    ++est.iters_used;
    const bool converged = next == 0.0 || std::abs(f - next) <= config.tol * f;
    f = next;
    if (converged) break;
  }

  est.image = RealImage(n);
  for (std::size_t i = 0; i < delta.area(); ++i) est.image[i] = std::clamp(x_prev[i] + delta[i], 0.0, 1.0);
  return est;
}

const char* method_name(Method method) {
  switch (method) {
    case Method::ZeroFilled: return "zero_filled";
    case Method::DiffCs: return "diff_cs";
    case Method::Sdae: return "sdae";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "zero_filled") return Method::ZeroFilled;
  if (name == "diff_cs") return Method::DiffCs;
  if (name == "sdae") return Method::Sdae;
  throw ArgumentError("unknown method \"" + std::string(name) + "\" (expected zero_filled, diff_cs or sdae)");
}

OnlineReconstructor::OnlineReconstructor(SamplingMask mask, Method method, const SdaeModel* model, IstaConfig ista)
    : mask_(std::move(mask)), method_(method), model_(model), ista_(ista) {
  if (method_ == Method::Sdae) {
    if (model_ == nullptr) throw ArgumentError("online reconstruction: method sdae needs a model");
    const auto pixels = static_cast<Eigen::Index>(mask_.area());
    if (model_->input_dim() != pixels)
      throw DimensionError("online reconstruction: model input dimension " + std::to_string(model_->input_dim()) +
                           " does not match " + std::to_string(mask_.size()) + "x" + std::to_string(mask_.size()) +
                           " frames");
  }
  if (method_ == Method::DiffCs) ista_.validate();
}

namespace {

RealImage clipped(RealImage image) {
  for (auto& v : image.values()) v = std::clamp(v, 0.0, 1.0);
  return image;
}

}  // namespace

FrameEstimate OnlineReconstructor::push(const KSpaceFrame& frame) {
  require_same_size(frame.size(), mask_.size(), "online reconstruction");
  const auto start = std::chrono::steady_clock::now();
  FrameEstimate est;
  switch (method_) {
    case Method::ZeroFilled:
      est.image = zero_filled(frame, mask_);
      break;
    case Method::Sdae:
      est.image = reconstruct(*model_, clipped(zero_filled(frame, mask_)));
      break;
    case Method::DiffCs:
      if (frames_seen_ == 0)
        est.image = clipped(zero_filled(frame, mask_));
      else
        est = differential_cs(frame, previous_, mask_, ista_);
      previous_ = est.image;
      break;
  }
  est.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ++frames_seen_;
  return est;
}

std::vector<FrameEstimate> online_reconstruct(std::size_t frame_count, const FrameSource& source,
                                              const SamplingMask& mask, Method method, const SdaeModel* model,
                                              const IstaConfig& ista) {
  if (frame_count == 0) throw ArgumentError("online_reconstruct: no frames");
  OnlineReconstructor recon(mask, method, model, ista);
  std::vector<FrameEstimate> out;
  out.reserve(frame_count);
  for (std::size_t t = 0; t < frame_count; ++t) {
    try {
      out.push_back(recon.push(source(t)));
    } catch (const Error& e) {
      throw Error(e.kind(), "frame " + std::to_string(t) + ": " + e.what());
    }
  }
  return out;
}

std::vector<FrameEstimate> online_reconstruct(std::span<const KSpaceFrame> frames, const SamplingMask& mask,
                                              Method method, const SdaeModel* model, const IstaConfig& ista) {
  return online_reconstruct(
      frames.size(), [&](std::size_t t) -> const KSpaceFrame& { return frames[t]; }, mask, method, model, ista);
}

}  // namespace aliasnet
