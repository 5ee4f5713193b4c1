#include "aliasnet/tensor_io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "binary.hpp"

namespace aliasnet {

std::size_t Tensor::element_count() const {
  std::size_t count = 1;
  for (auto d : dims) count *= d;
  return count;
}

std::vector<std::byte> encode_tensor(const Tensor& tensor) {
  if (tensor.values.size() != tensor.element_count())
    throw DimensionError("tensor: payload has " + std::to_string(tensor.values.size()) + " values, dims imply " +
                         std::to_string(tensor.element_count()));
  detail::ByteWriter out;
  out.magic("MRT1");
  out.u32(static_cast<std::uint32_t>(tensor.dims.size()));
  for (auto d : tensor.dims) out.u32(d);
  for (double v : tensor.values) out.f64(v);
  return out.take();
}

Tensor decode_tensor(std::span<const std::byte> bytes) {
  detail::ByteReader in(bytes, "MRT1 tensor");
  in.expect_magic("MRT1");
  const auto rank = in.u32("rank");
  if (rank == 0 || rank > 8) in.fail("unsupported rank " + std::to_string(rank));
  Tensor t;
  t.dims.reserve(rank);
  for (std::uint32_t i = 0; i < rank; ++i) t.dims.push_back(in.u32("dims"));
  const auto count = t.element_count();
  if (count > std::numeric_limits<std::size_t>::max() / 8) in.fail("element count overflows");
  in.need(count * 8, "payload");
  t.values.resize(count);
  for (auto& v : t.values) v = in.f64("payload");
  in.expect_end();
  return t;
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<char> raw((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("write failed for " + path.string());
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  write_file_bytes(path, encode_tensor(tensor));
}

Tensor read_tensor(const std::filesystem::path& path) { return decode_tensor(read_file_bytes(path)); }

Tensor to_tensor(const RealImage& image) {
  const auto n = static_cast<std::uint32_t>(image.size());
  return Tensor{{n, n}, {image.values().begin(), image.values().end()}};
}

Tensor to_tensor(const ComplexGrid& grid) {
  const auto n = static_cast<std::uint32_t>(grid.size());
  Tensor t{{n, n, 2}, {}};
  t.values.reserve(grid.area() * 2);
  for (const auto& z : grid.values()) {
    t.values.push_back(z.real());
    t.values.push_back(z.imag());
  }
  return t;
}

Tensor to_tensor(const SamplingMask& mask) {
  const auto n = static_cast<std::uint32_t>(mask.size());
  Tensor t{{n, n}, {}};
  t.values.reserve(mask.area());
  for (auto b : mask.bits()) t.values.push_back(b ? 1.0 : 0.0);
  return t;
}

Tensor frames_to_tensor(std::span<const RealImage> frames) {
  if (frames.empty()) throw ArgumentError("frames_to_tensor: no frames");
  const int n = frames.front().size();
  Tensor t{{static_cast<std::uint32_t>(frames.size()), static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n)},
           {}};
  t.values.reserve(frames.size() * frames.front().area());
  for (const auto& f : frames) {
    require_same_size(f.size(), n, "frames_to_tensor");
    t.values.insert(t.values.end(), f.values().begin(), f.values().end());
  }
  return t;
}

Tensor frames_to_tensor(std::span<const ComplexGrid> frames) {
  if (frames.empty()) throw ArgumentError("frames_to_tensor: no frames");
  const int n = frames.front().size();
  Tensor t{{static_cast<std::uint32_t>(frames.size()), static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n), 2},
           {}};
  t.values.reserve(frames.size() * frames.front().area() * 2);
  for (const auto& f : frames) {
    require_same_size(f.size(), n, "frames_to_tensor");
    for (const auto& z : f.values()) {
      t.values.push_back(z.real());
      t.values.push_back(z.imag());
    }
  }
  return t;
}

namespace {

int square_side(std::uint32_t rows, std::uint32_t cols, const char* what) {
  if (rows != cols)
    throw DimensionError(std::string(what) + ": expected square frames, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  return static_cast<int>(rows);
}

}  // namespace

RealImage image_from_tensor(const Tensor& t) {
  if (t.dims.size() != 2) throw DimensionError("image tensor must have rank 2");
  const int n = square_side(t.dims[0], t.dims[1], "image tensor");
  return RealImage(n, t.values);
}

SamplingMask mask_from_tensor(const Tensor& t) {
  if (t.dims.size() != 2) throw DimensionError("mask tensor must have rank 2");
  const int n = square_side(t.dims[0], t.dims[1], "mask tensor");
  std::vector<std::uint8_t> keep(t.values.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const double v = t.values[i];
    if (v != 0.0 && v != 1.0) throw ArgumentError("mask tensor: value " + std::to_string(v) + " is not 0 or 1");
    keep[i] = v == 1.0 ? 1 : 0;
  }
  return SamplingMask(n, std::move(keep));
}

std::vector<RealImage> real_frames_from_tensor(const Tensor& t) {
  if (t.dims.size() == 2) return {image_from_tensor(t)};
  if (t.dims.size() != 3) throw DimensionError("frame tensor must have rank 3 [frames, n, n]");
  const int n = square_side(t.dims[1], t.dims[2], "frame tensor");
  const std::size_t area = static_cast<std::size_t>(n) * n;
  std::vector<RealImage> frames;
  frames.reserve(t.dims[0]);
  for (std::size_t f = 0; f < t.dims[0]; ++f)
    frames.emplace_back(n, std::vector<double>(t.values.begin() + static_cast<std::ptrdiff_t>(f * area),
                                               t.values.begin() + static_cast<std::ptrdiff_t>((f + 1) * area)));
  return frames;
}

std::vector<ComplexGrid> complex_frames_from_tensor(const Tensor& t) {
  if (t.dims.size() != 4 || t.dims[3] != 2)
    throw DimensionError("complex frame tensor must have dims [frames, n, n, 2]");
  const int n = square_side(t.dims[1], t.dims[2], "complex frame tensor");
  const std::size_t area = static_cast<std::size_t>(n) * n;
  std::vector<ComplexGrid> frames;
  frames.reserve(t.dims[0]);
  std::size_t k = 0;
  for (std::size_t f = 0; f < t.dims[0]; ++f) {
    ComplexGrid g(n);
    for (std::size_t i = 0; i < area; ++i, k += 2) g[i] = Complex(t.values[k], t.values[k + 1]);
    frames.push_back(std::move(g));
  }
  return frames;
}

void write_metadata(const std::filesystem::path& path, const Metadata& entries) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& [key, value] : entries) file << key << '=' << value << '\n';
  if (!file) throw IoError("write failed for " + path.string());
}

Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open " + path.string() + " for reading");
  Metadata entries;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return entries;
}

}  // namespace aliasnet
