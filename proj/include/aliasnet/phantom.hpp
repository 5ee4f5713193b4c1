#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "aliasnet/grid.hpp"

namespace aliasnet {

/// Ellipse in normalized coordinates [-1, 1]^2 (x to the right, y up).
struct EllipseSpec {
  double center_x;
  double center_y;
  double semi_a;
  double semi_b;
  double angle;  ///< radians, counter-clockwise
  double intensity;
};

/// The 10-ellipse Shepp-Logan table with the higher-contrast intensities,
/// whose summed values already lie in [0, 1].
std::span<const EllipseSpec> shepp_logan_table();

/// Sums ellipse intensities at pixel centers and clamps to [0, 1].
RealImage render_ellipses(int n, std::span<const EllipseSpec> ellipses);

RealImage shepp_logan(int n);

struct DynamicSequence {
  std::vector<RealImage> frames;
  int period = 1;
  std::uint64_t seed = 0;

  int size() const { return frames.empty() ? 0 : frames.front().size(); }
};

/// Periodically deforming Shepp-Logan sequence. The two ventricle ellipses
/// breathe (dilate), the upper small ellipse oscillates vertically and the
/// central ellipse drifts horizontally, each with a seeded phase. The seed
/// also perturbs the small-feature intensities by up to 0.05 so different
/// seeds give different subjects.
DynamicSequence dynamic_phantom(int n, int frames, int period, double motion_amp, std::uint64_t seed);

/// Column-per-sample training pairs. Column j of `inputs` is a vectorized
/// aliased image, the same column of `targets` is its clean frame.
struct TrainingSet {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
  std::string mask_id;

  Eigen::Index dim() const { return inputs.rows(); }
  Eigen::Index columns() const { return inputs.cols(); }
};

TrainingSet build_training_set(std::span<const DynamicSequence> sequences, const SamplingMask& mask,
                               double noise_sigma, std::uint64_t seed, std::string mask_id = "mask");

struct TrainValSplit {
  Eigen::MatrixXd train_inputs;
  Eigen::MatrixXd train_targets;
  Eigen::MatrixXd val_inputs;
  Eigen::MatrixXd val_targets;
};

/// Takes the trailing `val_fraction` of the (already shuffled) columns as the
/// validation set. At least one column stays on each side when N >= 2.
TrainValSplit split_training_set(const TrainingSet& set, double val_fraction = 0.1);

Eigen::VectorXd vectorize(const RealImage& image);
RealImage unvectorize(const Eigen::Ref<const Eigen::VectorXd>& v, int n);

/// Training sets are stored as one MRT1 tensor of dims [2, d, N]
/// (inputs then targets).
void save_training_set(const std::string& path, const TrainingSet& set);
TrainingSet load_training_set(const std::string& path);

}  // namespace aliasnet
