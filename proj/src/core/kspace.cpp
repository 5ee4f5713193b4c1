#include "aliasnet/kspace.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "aliasnet/rng.hpp"

namespace aliasnet {

SamplingMask::SamplingMask(int n, std::vector<std::uint8_t> keep) : n_(n), keep_(std::move(keep)) {
  detail::checked_area(n, keep_.size(), "SamplingMask");
  for (auto& b : keep_) b = b ? 1 : 0;
  count_ = static_cast<std::size_t>(std::count(keep_.begin(), keep_.end(), std::uint8_t{1}));
  if (count_ == 0) throw ArgumentError("SamplingMask: no sampled positions");
  if (!keep_[0]) throw ArgumentError("SamplingMask: DC position must be sampled");
  fraction_ = static_cast<double>(count_) / static_cast<double>(keep_.size());
}

namespace {

// FFTW's planner is not thread-safe; plans are created once under a lock and
// then executed concurrently through the new-array interface.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto& plan = plans_[{n, sign}];
    if (!plan) {
      std::vector<Complex> scratch(static_cast<std::size_t>(n) * n);
      auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
      plan = fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_)
      if (plan) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void transform_inplace(ComplexGrid& grid, int sign) {
  if (grid.empty()) throw DimensionError("dft2: empty grid");
  const int n = grid.size();
  auto* buf = reinterpret_cast<fftw_complex*>(grid.data());
  fftw_execute_dft(PlanCache::instance().get(n, sign), buf, buf);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& z : grid.values()) z *= scale;
}

}  // namespace

void dft2_inplace(ComplexGrid& grid) { transform_inplace(grid, FFTW_FORWARD); }
void idft2_inplace(ComplexGrid& grid) { transform_inplace(grid, FFTW_BACKWARD); }

ComplexGrid dft2(const ComplexGrid& image) {
  ComplexGrid out = image;
  dft2_inplace(out);
  return out;
}

ComplexGrid idft2(const ComplexGrid& kspace) {
  ComplexGrid out = kspace;
  idft2_inplace(out);
  return out;
}

ComplexGrid to_complex(const RealImage& image) {
  ComplexGrid out(image.size());
  for (std::size_t i = 0; i < image.area(); ++i) out[i] = Complex(image[i], 0.0);
  return out;
}

SamplingMask mask_full(int n) {
  return SamplingMask(n, std::vector<std::uint8_t>(detail::area_for(n, "mask_full"), 1));
}

SamplingMask mask_variable_density(int n, double target_fraction, double decay, std::uint64_t seed) {
  if (!(target_fraction > 0.0 && target_fraction <= 1.0))
    throw ArgumentError("mask_variable_density: target_fraction must be in (0, 1], got " +
                        std::to_string(target_fraction));
  if (!(decay >= 0.0)) throw ArgumentError("mask_variable_density: decay must be >= 0");
  const std::size_t area = detail::area_for(n, "mask_variable_density");
  if (target_fraction == 1.0) return mask_full(n);

  const double k_max = static_cast<double>(n) / std::numbers::sqrt2;
  std::vector<double> weight(area);
  double min_weight = 1.0;
  for (int r = 0; r < n; ++r) {
    const double kr = signed_frequency(r, n);
    for (int c = 0; c < n; ++c) {
      const double kc = signed_frequency(c, n);
      const double w = std::pow(1.0 + std::hypot(kr, kc) / k_max, -decay);
      weight[static_cast<std::size_t>(r) * n + c] = w;
      min_weight = std::min(min_weight, w);
    }
  }

  const double target = target_fraction * static_cast<double>(area);
  auto expected = [&](double scale) {
    double total = 0.0;
    for (double w : weight) total += std::min(1.0, scale * w);
    return total;
  };
  double lo = 0.0;
  double hi = 1.0 / min_weight;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (expected(mid) < target ? lo : hi) = mid;
  }
  const double scale = 0.5 * (lo + hi);

  Rng rng(seed);
  std::vector<std::uint8_t> keep(area);
  for (std::size_t i = 0; i < area; ++i) keep[i] = rng.uniform() < std::min(1.0, scale * weight[i]) ? 1 : 0;
  keep[0] = 1;
  return SamplingMask(n, std::move(keep));
}

SamplingMask mask_radial(int n, int num_lines, std::uint64_t seed, bool jitter) {
  if (num_lines < 1) throw ArgumentError("mask_radial: num_lines must be >= 1, got " + std::to_string(num_lines));
  const std::size_t area = detail::area_for(n, "mask_radial");
  const double spacing = std::numbers::pi / num_lines;
  double offset = 0.0;
  if (jitter) {
    Rng rng(seed);
    offset = rng.uniform(0.0, spacing);
  }

  // Centered frequency coordinates span [-n/2, ceil(n/2) - 1].
  const int lo = -(n / 2);
  const int hi = (n + 1) / 2 - 1;
  const double radius = static_cast<double>(n) / 2.0;
  const int steps = static_cast<int>(std::ceil(radius / 0.5));

  std::vector<std::uint8_t> keep(area, 0);
  for (int line = 0; line < num_lines; ++line) {
    const double angle = offset + line * std::numbers::pi / num_lines;
    const double ux = std::cos(angle);
    const double uy = std::sin(angle);
    for (int s = -steps; s <= steps; ++s) {
      const double t = 0.5 * s;
      const int kx = static_cast<int>(std::lround(t * ux));
      const int ky = static_cast<int>(std::lround(t * uy));
      if (kx < lo || kx > hi || ky < lo || ky > hi) continue;
      const int row = (ky + n) % n;
      const int col = (kx + n) % n;
      keep[static_cast<std::size_t>(row) * n + col] = 1;
    }
  }
  keep[0] = 1;
  return SamplingMask(n, std::move(keep));
}

SamplingMask mask_uniform(int n, int factor) {
  const std::size_t area = detail::area_for(n, "mask_uniform");
  if (factor < 1 || n % factor != 0)
    throw ArgumentError("mask_uniform: factor " + std::to_string(factor) + " must be >= 1 and divide n=" +
                        std::to_string(n));
  std::vector<std::uint8_t> keep(area, 0);
  for (int r = 0; r < n; r += factor)
    std::fill_n(keep.begin() + static_cast<std::ptrdiff_t>(r) * n, n, std::uint8_t{1});
  return SamplingMask(n, std::move(keep));
}

namespace {

template <class T>
T parse_field(std::string_view text, std::string_view spec) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ArgumentError("invalid mask spec \"" + std::string(spec) + "\": cannot parse \"" + std::string(text) + "\"");
  return value;
}

}  // namespace

SamplingMask mask_from_spec(std::string_view spec, int n, std::uint64_t seed) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const auto kind = parts.front();
  if (kind == "full" && parts.size() == 1) return mask_full(n);
  if (kind == "radial" && parts.size() == 2) return mask_radial(n, parse_field<int>(parts[1], spec), seed);
  if (kind == "uniform" && parts.size() == 2) return mask_uniform(n, parse_field<int>(parts[1], spec));
  if (kind == "vd" && parts.size() == 3)
    return mask_variable_density(n, parse_field<double>(parts[1], spec), parse_field<double>(parts[2], spec), seed);
  throw ArgumentError("invalid mask spec \"" + std::string(spec) +
                      "\" (expected full, radial:<lines>, uniform:<factor> or vd:<fraction>:<decay>)");
}

ComplexGrid forward_operator(const ComplexGrid& image, const SamplingMask& mask) {
  require_same_size(image.size(), mask.size(), "forward_operator");
  ComplexGrid k = dft2(image);
  for (std::size_t i = 0; i < k.area(); ++i)
    if (!mask[i]) k[i] = 0.0;
  return k;
}

ComplexGrid forward_operator(const RealImage& image, const SamplingMask& mask) {
  return forward_operator(to_complex(image), mask);
}

ComplexGrid adjoint_operator(const ComplexGrid& kspace, const SamplingMask& mask) {
  require_same_size(kspace.size(), mask.size(), "adjoint_operator");
  ComplexGrid masked = kspace;
  for (std::size_t i = 0; i < masked.area(); ++i)
    if (!mask[i]) masked[i] = 0.0;
  idft2_inplace(masked);
  return masked;
}

KSpaceFrame acquire(const RealImage& image, const SamplingMask& mask, double noise_sigma, std::uint64_t seed) {
  require_same_size(image.size(), mask.size(), "acquire");
  if (!(noise_sigma >= 0.0)) throw ArgumentError("acquire: noise_sigma must be >= 0");
  KSpaceFrame y = forward_operator(image, mask);
  if (noise_sigma > 0.0) {
    Rng rng(seed);
    for (std::size_t i = 0; i < y.area(); ++i) {
      if (!mask[i]) continue;
      const double re = rng.normal();
      const double im = rng.normal();
      y[i] += Complex(noise_sigma * re, noise_sigma * im);
    }
  }
  return y;
}

RealImage zero_filled(const KSpaceFrame& kspace, const SamplingMask& mask) {
  const ComplexGrid image = adjoint_operator(kspace, mask);
  RealImage out(image.size());
  for (std::size_t i = 0; i < image.area(); ++i) out[i] = std::abs(image[i]);
  return out;
}

}  // namespace aliasnet
