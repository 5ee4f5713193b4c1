#include "aliasnet/metrics.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <algorithm>
#include <numeric>
#include <string>

namespace aliasnet {

double nmse(const RealImage& est, const RealImage& ref) {
  require_same_size(est.size(), ref.size(), "nmse");
  double err = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < ref.area(); ++i) {
    const double diff = est[i] - ref[i];
    err += diff * diff;
    norm += ref[i] * ref[i];
  }
  if (!(norm > 0.0)) throw ArgumentError("nmse: reference image has zero norm");
  return std::sqrt(err / norm);
}

namespace {

constexpr int kRadius = 5;
constexpr int kWindow = 2 * kRadius + 1;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double total = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kRadius;
    taps[i] = std::exp(-x * x / (2.0 * 1.5 * 1.5));
    total += taps[i];
  }
  for (auto& t : taps) t /= total;
  return taps;
}

// Half-sample symmetric extension: -1 -> 0, -2 -> 1, n -> n-1.
int reflect(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return i;
}

std::vector<double> blur(const std::vector<double>& src, int n, const std::array<double, kWindow>& taps) {
  std::vector<double> tmp(src.size()), out(src.size());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * src[static_cast<std::size_t>(r) * n + reflect(c + k - kRadius, n)];
      tmp[static_cast<std::size_t>(r) * n + c] = acc;
    }
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * tmp[static_cast<std::size_t>(reflect(r + k - kRadius, n)) * n + c];
      out[static_cast<std::size_t>(r) * n + c] = acc;
    }
  return out;
}

}  // namespace

double ssim(const RealImage& est, const RealImage& ref, double dynamic_range) {
  require_same_size(est.size(), ref.size(), "ssim");
  if (!(dynamic_range > 0.0)) throw ArgumentError("ssim: dynamic_range must be > 0");
  const int n = est.size();
  if (n < kWindow)
    throw ArgumentError("ssim: image side " + std::to_string(n) + " is smaller than the " + std::to_string(kWindow) +
                        "-pixel window");
  const auto taps = gaussian_taps();
  const std::size_t area = est.area();
  std::vector<double> x(est.values().begin(), est.values().end());
  std::vector<double> y(ref.values().begin(), ref.values().end());
  std::vector<double> xx(area), yy(area), xy(area);
  for (std::size_t i = 0; i < area; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mu_x = blur(x, n, taps);
  const auto mu_y = blur(y, n, taps);
  const auto e_xx = blur(xx, n, taps);
  const auto e_yy = blur(yy, n, taps);
  const auto e_xy = blur(xy, n, taps);

  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
  double total = 0.0;
  for (std::size_t i = 0; i < area; ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(area);
}

QualityScore score(const RealImage& est, const RealImage& ref, double dynamic_range) {
  return {nmse(est, ref), ssim(est, ref, dynamic_range)};
}

LatencyReport benchmark_latency(const std::function<RealImage(std::size_t)>& recon, std::size_t frame_count,
                                int warmup, int reps) {
  if (reps < 1) throw ArgumentError("benchmark_latency: reps must be >= 1");
  if (warmup < 0) throw ArgumentError("benchmark_latency: warmup must be >= 0");
  if (frame_count == 0) throw ArgumentError("benchmark_latency: no frames");

  for (int w = 0; w < warmup; ++w)
    for (std::size_t f = 0; f < frame_count; ++f) (void)recon(f);

  using Clock = std::chrono::steady_clock;
  std::vector<RealImage> reference(frame_count);
  std::vector<double> total(frame_count, 0.0);
  for (int rep = 0; rep < reps; ++rep) {
    for (std::size_t f = 0; f < frame_count; ++f) {
      const auto start = Clock::now();
      RealImage out = recon(f);
      const auto stop = Clock::now();
      total[f] += std::chrono::duration<double>(stop - start).count();
      if (rep == 0)
        reference[f] = std::move(out);
      else if (!(out == reference[f]))
        throw NondeterminismError("benchmark_latency: frame " + std::to_string(f) + " differs between rep 0 and rep " +
                                  std::to_string(rep));
    }
  }

  LatencyReport report;
  report.per_frame_s.resize(frame_count);
  for (std::size_t f = 0; f < frame_count; ++f) {
    // Clock granularity can report zero for trivial closures.
    report.per_frame_s[f] = std::max(total[f] / reps, 1e-9);
  }
  const double sum = std::accumulate(report.per_frame_s.begin(), report.per_frame_s.end(), 0.0);
  report.mean_s = sum / static_cast<double>(frame_count);
  double var = 0.0;
  for (double s : report.per_frame_s) var += (s - report.mean_s) * (s - report.mean_s);
  report.std_s = std::sqrt(var / static_cast<double>(frame_count));
  report.frames_per_second = 1.0 / report.mean_s;
  return report;
}

}  // namespace aliasnet
