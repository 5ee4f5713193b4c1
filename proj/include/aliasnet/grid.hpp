#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aliasnet/error.hpp"

namespace aliasnet {

using Complex = std::complex<double>;

namespace detail {

inline std::size_t area_for(int n, const char* what) {
  if (n < 2) throw DimensionError(std::string(what) + ": side length must be >= 2, got " + std::to_string(n));
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
}

inline std::size_t checked_area(int n, std::size_t len, const char* what) {
  const auto area = area_for(n, what);
  if (len != area)
    throw DimensionError(std::string(what) + ": expected " + std::to_string(area) + " values for n=" +
                         std::to_string(n) + ", got " + std::to_string(len));
  return area;
}

}  // namespace detail

/// Square n-by-n grid stored row-major.
template <class T>
class SquareGrid {
 public:
  using value_type = T;

  SquareGrid() = default;

  explicit SquareGrid(int n, T fill = T{})
      : n_(n), data_(detail::area_for(n, "grid"), fill) {}

  SquareGrid(int n, std::vector<T> data) : n_(n), data_(std::move(data)) {
    detail::checked_area(n, data_.size(), "grid");
  }

  int size() const noexcept { return n_; }
  std::size_t area() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int row, int col) { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const { return data_[index(row, col)]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  friend bool operator==(const SquareGrid&, const SquareGrid&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(col);
  }

  int n_ = 0;
  std::vector<T> data_;
};

/// Real image, vectorized row-major when fed to the network.
using RealImage = SquareGrid<double>;

/// Complex image or k-space frame. Unsampled k-space positions hold zero.
using ComplexGrid = SquareGrid<Complex>;
using KSpaceFrame = ComplexGrid;

/// Selection of acquired k-space positions. Index (0, 0) is the DC term;
/// frequencies wrap modulo n (unshifted FFT layout).
class SamplingMask {
 public:
  SamplingMask() = default;

  /// Throws ArgumentError when `keep` is empty of true entries or DC is not set.
  SamplingMask(int n, std::vector<std::uint8_t> keep);

  int size() const noexcept { return n_; }
  std::size_t area() const noexcept { return keep_.size(); }
  std::size_t count() const noexcept { return count_; }
  double fraction() const noexcept { return fraction_; }

  bool operator()(int row, int col) const {
    return keep_[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(col)] != 0;
  }
  bool operator[](std::size_t i) const { return keep_[i] != 0; }

  std::span<const std::uint8_t> bits() const noexcept { return keep_; }

  friend bool operator==(const SamplingMask& a, const SamplingMask& b) {
    return a.n_ == b.n_ && a.keep_ == b.keep_;
  }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> keep_;
  std::size_t count_ = 0;
  double fraction_ = 0.0;
};

inline void require_same_size(int a, int b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace aliasnet
