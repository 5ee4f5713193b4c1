#include "aliasnet/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "aliasnet/kspace.hpp"
#include "aliasnet/rng.hpp"
#include "aliasnet/tensor_io.hpp"

namespace aliasnet {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// center_x, center_y, semi_a, semi_b, angle, intensity
constexpr std::array<EllipseSpec, 10> kSheppLogan{{
    {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
    {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
    {0.22, 0.0, 0.11, 0.31, -18.0 * kDeg, -0.2},
    {-0.22, 0.0, 0.16, 0.41, 18.0 * kDeg, -0.2},
    {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
    {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
    {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
    {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
}};

}  // namespace

std::span<const EllipseSpec> shepp_logan_table() { return kSheppLogan; }

RealImage render_ellipses(int n, std::span<const EllipseSpec> ellipses) {
  RealImage image(n);
  for (const auto& e : ellipses) {
    if (!(e.semi_a > 0.0 && e.semi_b > 0.0)) throw ArgumentError("render_ellipses: semi-axes must be positive");
    const double cs = std::cos(e.angle);
    const double sn = std::sin(e.angle);
    for (int r = 0; r < n; ++r) {
      const double y = static_cast<double>(n - 1 - 2 * r) / n - e.center_y;
      for (int c = 0; c < n; ++c) {
        const double x = static_cast<double>(2 * c + 1 - n) / n - e.center_x;
        const double u = (x * cs + y * sn) / e.semi_a;
        const double v = (-x * sn + y * cs) / e.semi_b;
        if (u * u + v * v <= 1.0) image(r, c) += e.intensity;
      }
    }
  }
  for (auto& v : image.values()) v = std::clamp(v, 0.0, 1.0);
  return image;
}

RealImage shepp_logan(int n) {
  if (n < 16) throw ArgumentError("shepp_logan: n must be >= 16, got " + std::to_string(n));
  return render_ellipses(n, kSheppLogan);
}

DynamicSequence dynamic_phantom(int n, int frames, int period, double motion_amp, std::uint64_t seed) {
  if (n < 16) throw ArgumentError("dynamic_phantom: n must be >= 16, got " + std::to_string(n));
  if (frames < 1) throw ArgumentError("dynamic_phantom: frames must be >= 1");
  if (period < 1) throw ArgumentError("dynamic_phantom: period must be >= 1");
  if (!(motion_amp >= 0.0 && motion_amp <= 0.3))
    throw ArgumentError("dynamic_phantom: motion_amp must be in [0, 0.3], got " + std::to_string(motion_amp));

  Rng rng(seed);
  std::array<double, 4> phase{};
  for (auto& p : phase) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
  std::array<EllipseSpec, 10> base = kSheppLogan;
  for (std::size_t i = 4; i < base.size(); ++i) base[i].intensity += rng.uniform(-0.05, 0.05);

  DynamicSequence seq;
  seq.period = period;
  seq.seed = seed;
  seq.frames.reserve(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    // Phase from t mod period so frames one period apart are bit-identical.
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(t % period) / period;
    auto shape = base;
    const double breathe_l = 1.0 + motion_amp * std::sin(theta + phase[0]);
    const double breathe_r = 1.0 + motion_amp * std::sin(theta + phase[1]);
    shape[2].semi_a *= breathe_l;
    shape[2].semi_b *= breathe_l;
    shape[3].semi_a *= breathe_r;
    shape[3].semi_b *= breathe_r;
    shape[4].center_y += 0.5 * motion_amp * std::sin(theta + phase[2]);
    const double drift = 0.5 * motion_amp * std::sin(theta + phase[3]);
    shape[5].center_x += drift;
    shape[6].center_x -= drift;
    seq.frames.push_back(render_ellipses(n, shape));
  }
  return seq;
}

Eigen::VectorXd vectorize(const RealImage& image) {
  return Eigen::Map<const Eigen::VectorXd>(image.data(), static_cast<Eigen::Index>(image.area()));
}

RealImage unvectorize(const Eigen::Ref<const Eigen::VectorXd>& v, int n) {
  const auto area = detail::checked_area(n, static_cast<std::size_t>(v.size()), "unvectorize");
  std::vector<double> data(area);
  Eigen::Map<Eigen::VectorXd>(data.data(), v.size()) = v;
  return RealImage(n, std::move(data));
}

TrainingSet build_training_set(std::span<const DynamicSequence> sequences, const SamplingMask& mask,
                               double noise_sigma, std::uint64_t seed, std::string mask_id) {
  std::size_t total = 0;
  for (const auto& s : sequences) {
    for (const auto& f : s.frames) require_same_size(f.size(), mask.size(), "build_training_set");
    total += s.frames.size();
  }
  if (total == 0) throw ArgumentError("build_training_set: no frames");

  const auto d = static_cast<Eigen::Index>(mask.area());
  std::vector<Eigen::Index> order(total);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng shuffle_rng(derive_seed(seed, 0xC011ull << 32));
  shuffle_indices(order.data(), order.size(), shuffle_rng);

  TrainingSet set;
  set.inputs.resize(d, static_cast<Eigen::Index>(total));
  set.targets.resize(d, static_cast<Eigen::Index>(total));
  set.mask_id = std::move(mask_id);

  std::size_t k = 0;
  for (const auto& s : sequences) {
    for (const auto& frame : s.frames) {
      const RealImage aliased = zero_filled(acquire(frame, mask, noise_sigma, derive_seed(seed, k)), mask);
      const Eigen::Index col = order[k];
      set.inputs.col(col) = vectorize(aliased).cwiseMax(0.0).cwiseMin(1.0);
      set.targets.col(col) = vectorize(frame);
      ++k;
    }
  }
  return set;
}

TrainValSplit split_training_set(const TrainingSet& set, double val_fraction) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0))
    throw ArgumentError("split_training_set: val_fraction must be in [0, 1)");
  const Eigen::Index total = set.columns();
  Eigen::Index val = static_cast<Eigen::Index>(std::llround(val_fraction * static_cast<double>(total)));
  if (val_fraction > 0.0 && total >= 2) val = std::clamp<Eigen::Index>(val, 1, total - 1);
  const Eigen::Index train = total - val;
  return TrainValSplit{set.inputs.leftCols(train), set.targets.leftCols(train), set.inputs.rightCols(val),
                       set.targets.rightCols(val)};
}

void save_training_set(const std::string& path, const TrainingSet& set) {
  const auto d = set.dim();
  const auto cols = set.columns();
  Tensor t{{2u, static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(cols)}, {}};
  t.values.reserve(static_cast<std::size_t>(2 * d * cols));
  for (const auto* m : {&set.inputs, &set.targets})
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) t.values.push_back((*m)(i, j));
  write_tensor(path, t);
}

TrainingSet load_training_set(const std::string& path) {
  const Tensor t = read_tensor(path);
  if (t.dims.size() != 3 || t.dims[0] != 2)
    throw DimensionError("training set tensor must have dims [2, d, N], file " + path);
  const Eigen::Index d = t.dims[1];
  const Eigen::Index cols = t.dims[2];
  TrainingSet set;
  set.inputs.resize(d, cols);
  set.targets.resize(d, cols);
  std::size_t k = 0;
  for (auto* m : {&set.inputs, &set.targets})
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) (*m)(i, j) = t.values[k++];
  set.mask_id = path;
  return set;
}

}  // namespace aliasnet
