#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "aliasnet/grid.hpp"

namespace aliasnet {

class SdaeModel;

inline double soft_threshold(double v, double tau) {
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

struct IstaConfig {
  double lambda = 0.01;
  int max_iters = 50;
  double tol = 1e-6;  ///< stop when |f_k - f_{k+1}| <= tol * f_k
  double step = 1.0;

  void validate() const;
};

struct FrameEstimate {
  RealImage image;
  std::vector<double> objective_trace;  ///< objective at the start, then after each iteration
  int iters_used = 0;
  double latency_s = 0.0;
};

/// ||y - A(x_prev + delta)||^2 + lambda ||delta||_1 with A = mask .* dft2.
double differential_objective(const KSpaceFrame& y, const RealImage& x_prev, const RealImage& delta,
                              const SamplingMask& mask, double lambda);

/// Differential CS for one frame: ISTA on the sparse frame difference,
/// starting from delta = 0. Returns clip(x_prev + delta, 0, 1).
FrameEstimate differential_cs(const KSpaceFrame& y, const RealImage& x_prev, const SamplingMask& mask,
                              const IstaConfig& config);

enum class Method { ZeroFilled, DiffCs, Sdae };

const char* method_name(Method method);
Method parse_method(std::string_view name);

/// Causal per-frame reconstruction. Each call to `push` sees one new k-space
/// frame and may use only estimates already produced.
class OnlineReconstructor {
 public:
  /// `model` is required for Method::Sdae and must outlive the reconstructor.
  OnlineReconstructor(SamplingMask mask, Method method, const SdaeModel* model = nullptr,
                      IstaConfig ista = {});

  FrameEstimate push(const KSpaceFrame& frame);

  std::size_t frames_seen() const noexcept { return frames_seen_; }

 private:
  RealImage reconstruct_frame(const KSpaceFrame& frame);

  SamplingMask mask_;
  Method method_;
  const SdaeModel* model_;
  IstaConfig ista_;
  RealImage previous_;
  std::size_t frames_seen_ = 0;
};

/// Frame source for online_reconstruct; called with increasing indices.
using FrameSource = std::function<const KSpaceFrame&(std::size_t)>;

std::vector<FrameEstimate> online_reconstruct(std::size_t frame_count, const FrameSource& source,
                                              const SamplingMask& mask, Method method,
                                              const SdaeModel* model = nullptr, const IstaConfig& ista = {});

std::vector<FrameEstimate> online_reconstruct(std::span<const KSpaceFrame> frames, const SamplingMask& mask,
                                              Method method, const SdaeModel* model = nullptr,
                                              const IstaConfig& ista = {});

}  // namespace aliasnet
