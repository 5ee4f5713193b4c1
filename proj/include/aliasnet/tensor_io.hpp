#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aliasnet/grid.hpp"

namespace aliasnet {

/// In-memory form of an MRT1 file: "MRT1", u32 rank, u32 dims[rank], then
/// float64 payload, all little-endian, row-major.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;

  std::size_t element_count() const;
};

std::vector<std::byte> encode_tensor(const Tensor& tensor);
Tensor decode_tensor(std::span<const std::byte> bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_tensor(const std::filesystem::path& path);

// Typed views. Complex grids carry a trailing dimension of 2 (real, imaginary);
// masks are stored as 0.0/1.0.
Tensor to_tensor(const RealImage& image);
Tensor to_tensor(const ComplexGrid& grid);
Tensor to_tensor(const SamplingMask& mask);
Tensor frames_to_tensor(std::span<const RealImage> frames);
Tensor frames_to_tensor(std::span<const ComplexGrid> frames);

RealImage image_from_tensor(const Tensor& tensor);
SamplingMask mask_from_tensor(const Tensor& tensor);
std::vector<RealImage> real_frames_from_tensor(const Tensor& tensor);
std::vector<ComplexGrid> complex_frames_from_tensor(const Tensor& tensor);

/// Sidecar metadata: one `key=value` per line, order preserved.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_metadata(const std::filesystem::path& path, const Metadata& entries);
Metadata read_metadata(const std::filesystem::path& path);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace aliasnet
