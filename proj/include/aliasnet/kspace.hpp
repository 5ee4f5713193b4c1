#pragma once

#include <cstdint>
#include <string_view>

#include "aliasnet/grid.hpp"

namespace aliasnet {

/// Unitary 2D DFT (1/n scaling per dimension), so the transform preserves
/// the l2 norm and idft2 is its exact adjoint.
ComplexGrid dft2(const ComplexGrid& image);
ComplexGrid idft2(const ComplexGrid& kspace);

void dft2_inplace(ComplexGrid& grid);
void idft2_inplace(ComplexGrid& grid);

ComplexGrid to_complex(const RealImage& image);

/// Signed frequency of index `i` on an n-point axis: 0, 1, ..., -1.
inline int signed_frequency(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }

/// Variable-density random mask. Each position is kept independently with
/// probability c * (1 + |k| / k_max)^-decay, clipped to 1, where c is chosen
/// by bisection so the probabilities sum to target_fraction * n^2 and k_max is
/// the corner radius n / sqrt(2).
SamplingMask mask_variable_density(int n, double target_fraction, double decay, std::uint64_t seed);

/// Radial mask of `num_lines` lines through DC at angles i*pi/num_lines,
/// rasterized by rounding points taken every half pixel along each line.
/// With `jitter` the whole star is rotated by a seeded offset in [0, pi/num_lines).
SamplingMask mask_radial(int n, int num_lines, std::uint64_t seed, bool jitter = false);

/// Keeps every factor-th row of k-space (row 0 included).
SamplingMask mask_uniform(int n, int factor);

SamplingMask mask_full(int n);

/// Parses "full", "radial:<lines>", "vd:<fraction>:<decay>" or
/// "uniform:<factor>".
SamplingMask mask_from_spec(std::string_view spec, int n, std::uint64_t seed);

/// A(x) = mask .* dft2(x).
ComplexGrid forward_operator(const ComplexGrid& image, const SamplingMask& mask);
ComplexGrid forward_operator(const RealImage& image, const SamplingMask& mask);

/// A^H(y) = idft2(mask .* y).
ComplexGrid adjoint_operator(const ComplexGrid& kspace, const SamplingMask& mask);

/// y = mask .* dft2(x) + noise, noise circular complex Gaussian with standard
/// deviation `noise_sigma` per real component on sampled positions only.
KSpaceFrame acquire(const RealImage& image, const SamplingMask& mask, double noise_sigma, std::uint64_t seed);

/// Magnitude of the zero-filled adjoint reconstruction |idft2(mask .* y)|.
RealImage zero_filled(const KSpaceFrame& kspace, const SamplingMask& mask);

}  // namespace aliasnet
