#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "aliasnet/error.hpp"

namespace aliasnet::detail {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T byteswap_if_big(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<std::byte, sizeof(T)> raw;
    std::memcpy(raw.data(), &value, sizeof(T));
    std::reverse(raw.begin(), raw.end());
    std::memcpy(&value, raw.data(), sizeof(T));
  }
  return value;
}

class ByteWriter {
 public:
  void magic(const char (&tag)[5]) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::byte>(tag[i]));
  }

  void u32(std::uint32_t v) { put(v); }
  void f64(double v) { put(v); }

  std::vector<std::byte> take() { return std::move(bytes_); }

 private:
  template <class T>
  void put(T v) {
    v = byteswap_if_big(v);
    const auto* p = reinterpret_cast<const std::byte*>(&v);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }

  std::vector<std::byte> bytes_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::byte> bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

  void expect_magic(const char (&tag)[5]) {
    need(4, "magic");
    if (std::memcmp(bytes_.data() + pos_, tag, 4) != 0)
      throw FormatError(what_ + ": bad magic, expected \"" + std::string(tag, 4) + "\"", pos_);
    pos_ += 4;
  }

  std::uint32_t u32(const char* field) { return get<std::uint32_t>(field); }
  double f64(const char* field) { return get<double>(field); }

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void need(std::size_t count, const char* field) const {
    if (remaining() < count)
      throw FormatError(what_ + ": truncated while reading " + field + " (need " + std::to_string(count) +
                            " bytes, have " + std::to_string(remaining()) + ")",
                        pos_);
  }

  void expect_end() const {
    if (remaining() != 0)
      throw FormatError(what_ + ": " + std::to_string(remaining()) + " trailing bytes", pos_);
  }

  [[noreturn]] void fail(const std::string& message) const { throw FormatError(what_ + ": " + message, pos_); }

 private:
  template <class T>
  T get(const char* field) {
    need(sizeof(T), field);
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return byteswap_if_big(v);
  }

  std::span<const std::byte> bytes_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace aliasnet::detail
