#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "aliasnet/grid.hpp"

namespace aliasnet {

/// ||est - ref||_2 / ||ref||_2. Not symmetric in its arguments.
double nmse(const RealImage& est, const RealImage& ref);

/// Mean SSIM over an 11x11 Gaussian window (sigma 1.5) with C1 = (0.01 R)^2,
/// C2 = (0.03 R)^2 and symmetric (half-sample) boundary extension.
double ssim(const RealImage& est, const RealImage& ref, double dynamic_range = 1.0);

struct QualityScore {
  double nmse = 0.0;
  double ssim = 0.0;
};

QualityScore score(const RealImage& est, const RealImage& ref, double dynamic_range = 1.0);

struct LatencyReport {
  std::vector<double> per_frame_s;  ///< mean over reps, per frame
  double mean_s = 0.0;
  double std_s = 0.0;
  double frames_per_second = 0.0;
};

/// Times `recon(frame_index)` for every frame over `reps` passes after
/// `warmup` untimed passes, on the calling thread with a steady clock. Every
/// timed pass must reproduce the first pass bit-for-bit, otherwise
/// NondeterminismError.
LatencyReport benchmark_latency(const std::function<RealImage(std::size_t)>& recon, std::size_t frame_count,
                                int warmup, int reps);

}  // namespace aliasnet
