#pragma once

// IJG reference quantization tables and quality scaling.

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jpegqf {

inline constexpr int kMinQuality = 1;
inline constexpr int kMaxQuality = 100;
inline constexpr int kBlockSize = 8;
inline constexpr int kStepCount = kBlockSize * kBlockSize;
// Largest step an 8-bit (baseline) table can hold.
inline constexpr int kMaxBaselineStep = 255;

class QualityFactor {
public:
  explicit constexpr QualityFactor(int value) : value_(value) {
    if (value < kMinQuality || value > kMaxQuality)
      throw std::invalid_argument("quality factor must be in [1, 100], got " + std::to_string(value));
  }
  constexpr int value() const { return value_; }
  friend constexpr auto operator<=>(QualityFactor, QualityFactor) = default;

private:
  int value_;
};

enum class Channel { Luminance, Chrominance };

constexpr std::string_view channel_name(Channel c) {
  return c == Channel::Luminance ? "luminance" : "chrominance";
}

// 8x8 grid of quantization steps in natural (row-major) order. Entries are
// 16-bit so that extended-precision DQT tables fit the same type.
class QuantMatrix {
public:
  using Steps = std::array<std::uint16_t, kStepCount>;

  constexpr QuantMatrix() { steps_.fill(1); }
  explicit constexpr QuantMatrix(const Steps& steps) : steps_(steps) {}

  static constexpr QuantMatrix filled(std::uint16_t v) {
    Steps s{};
    s.fill(v);
    return QuantMatrix(s);
  }

  // Linear natural-order index, 0..63.
  constexpr std::uint16_t operator[](std::size_t k) const { return steps_[k]; }
  constexpr std::uint16_t& operator[](std::size_t k) { return steps_[k]; }

  // 1-based (row, column), matching the usual Q(i,j) notation.
  constexpr std::uint16_t at(int row, int col) const { return steps_[index(row, col)]; }
  constexpr std::uint16_t& at(int row, int col) { return steps_[index(row, col)]; }

  constexpr const Steps& steps() const { return steps_; }
  constexpr auto begin() const { return steps_.begin(); }
  constexpr auto end() const { return steps_.end(); }

  friend constexpr bool operator==(const QuantMatrix&, const QuantMatrix&) = default;

  static constexpr std::size_t index(int row, int col) {
    if (row < 1 || row > kBlockSize || col < 1 || col > kBlockSize)
      throw std::out_of_range("matrix position out of range");
    return static_cast<std::size_t>((row - 1) * kBlockSize + (col - 1));
  }

private:
  Steps steps_{};
};

struct BaseTables {
  QuantMatrix luminance;
  QuantMatrix chrominance;

  constexpr const QuantMatrix& operator[](Channel c) const {
    return c == Channel::Luminance ? luminance : chrominance;
  }
};

namespace detail {

inline constexpr QuantMatrix::Steps kLuminanceBase = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

inline constexpr QuantMatrix::Steps kChrominanceBase = {
    17, 18, 24, 47, 99, 99, 99, 99,  //
    18, 21, 26, 66, 99, 99, 99, 99,  //
    24, 26, 56, 99, 99, 99, 99, 99,  //
    47, 66, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,  //
    99, 99, 99, 99, 99, 99, 99, 99,
};

}  // namespace detail

inline constexpr BaseTables kBaseTables{QuantMatrix(detail::kLuminanceBase), QuantMatrix(detail::kChrominanceBase)};

constexpr const BaseTables& base_tables() { return kBaseTables; }

// Percent scale applied to the base tables: 200 - 2F above 50, 5000/F below.
constexpr int quality_scaling(QualityFactor f) {
  const int q = f.value();
  return q >= 50 ? 200 - 2 * q : 5000 / q;
}

// Scales one base entry. Integer division rounds the +50 biased product
// down, as libjpeg does; the result is clamped to the baseline step range.
constexpr int scale_step(int base, int scale) {
  return std::clamp((base * scale + 50) / 100, 1, kMaxBaselineStep);
}

constexpr QuantMatrix synthesize_matrix(QualityFactor f, Channel c) {
  const int scale = quality_scaling(f);
  const QuantMatrix& base = base_tables()[c];
  QuantMatrix out;
  for (std::size_t k = 0; k < kStepCount; ++k)
    out[k] = static_cast<std::uint16_t>(scale_step(base[k], scale));
  return out;
}

}  // namespace jpegqf
