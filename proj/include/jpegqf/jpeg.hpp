#pragma once

// Header-level JPEG parsing: marker segments up to the first scan, DQT
// payloads and zigzag reordering.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jpegqf/identify.hpp"
#include "jpegqf/ijg.hpp"

namespace jpegqf {

namespace marker {
inline constexpr std::uint8_t kPrefix = 0xFF;
inline constexpr std::uint8_t kTem = 0x01;
inline constexpr std::uint8_t kSof0 = 0xC0;
inline constexpr std::uint8_t kRst0 = 0xD0;
inline constexpr std::uint8_t kRst7 = 0xD7;
inline constexpr std::uint8_t kSoi = 0xD8;
inline constexpr std::uint8_t kEoi = 0xD9;
inline constexpr std::uint8_t kSos = 0xDA;
inline constexpr std::uint8_t kDqt = 0xDB;

constexpr bool is_standalone(std::uint8_t m) {
  return m == kTem || (m >= kRst0 && m <= kRst7) || m == kSoi || m == kEoi;
}
}  // namespace marker

class JpegError : public std::runtime_error {
public:
  enum class Kind { NotJpeg, Corrupt, MalformedDqt, NoTables };

  JpegError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

struct Segment {
  std::uint8_t marker;
  // Offset of the 0xFF that introduces the marker.
  std::size_t offset;
  // Segment body without the length field; absent for standalone markers.
  std::optional<std::vector<std::uint8_t>> payload;
};

// Natural-order index of each zigzag position.
inline constexpr std::array<std::uint8_t, kStepCount> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,   //
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,  //
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,  //
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

template <typename T>
std::array<T, kStepCount> dezigzag(std::span<const T> zigzag) {
  if (zigzag.size() != kStepCount)
    throw std::invalid_argument("dezigzag expects 64 values, got " + std::to_string(zigzag.size()));
  std::array<T, kStepCount> natural{};
  for (std::size_t k = 0; k < kStepCount; ++k) natural[kZigzagToNatural[k]] = zigzag[k];
  return natural;
}

template <typename T>
std::array<T, kStepCount> rezigzag(std::span<const T> natural) {
  if (natural.size() != kStepCount)
    throw std::invalid_argument("rezigzag expects 64 values, got " + std::to_string(natural.size()));
  std::array<T, kStepCount> zigzag{};
  for (std::size_t k = 0; k < kStepCount; ++k) zigzag[k] = natural[kZigzagToNatural[k]];
  return zigzag;
}

inline std::uint16_t read_be16(std::span<const std::uint8_t> data, std::size_t pos) {
  return static_cast<std::uint16_t>((data[pos] << 8) | data[pos + 1]);
}

// Segments from SOI up to and including the first SOS header. Fill bytes
// (repeated 0xFF) before a marker are skipped. Scanning also ends at EOI or
// at a clean end of data.
inline std::vector<Segment> scan_segments(std::span<const std::uint8_t> data) {
  if (data.size() < 2 || data[0] != marker::kPrefix || data[1] != marker::kSoi)
    throw JpegError(JpegError::Kind::NotJpeg, "missing SOI marker");

  std::vector<Segment> segments;
  std::size_t pos = 2;
  while (pos < data.size()) {
    if (data[pos] != marker::kPrefix)
      throw JpegError(JpegError::Kind::Corrupt, "expected marker at offset " + std::to_string(pos));
    const std::size_t offset = pos;
    while (pos < data.size() && data[pos] == marker::kPrefix) ++pos;
    if (pos == data.size()) throw JpegError(JpegError::Kind::Corrupt, "file ends inside marker fill");
    const std::uint8_t m = data[pos++];
    if (m == 0x00) throw JpegError(JpegError::Kind::Corrupt, "stuffed zero outside entropy data at offset " + std::to_string(offset));

    if (marker::is_standalone(m)) {
      segments.push_back({m, offset, std::nullopt});
      if (m == marker::kEoi) break;
      continue;
    }
    if (pos + 2 > data.size()) throw JpegError(JpegError::Kind::Corrupt, "truncated segment length at offset " + std::to_string(offset));
    const std::size_t length = read_be16(data, pos);
    if (length < 2) throw JpegError(JpegError::Kind::Corrupt, "segment length below 2 at offset " + std::to_string(offset));
    if (pos + length > data.size())
      throw JpegError(JpegError::Kind::Corrupt, "segment at offset " + std::to_string(offset) + " declares " +
                                                    std::to_string(length) + " bytes past end of file");
    const auto body = data.subspan(pos + 2, length - 2);
    segments.push_back({m, offset, std::vector<std::uint8_t>(body.begin(), body.end())});
    pos += length;
    if (m == marker::kSos) break;
  }
  return segments;
}

enum class Precision { EightBit, SixteenBit };

struct DqtTable {
  Precision precision;
  int table_id;
  QuantMatrix matrix;

  friend bool operator==(const DqtTable&, const DqtTable&) = default;
};

inline std::vector<DqtTable> parse_dqt(std::span<const std::uint8_t> payload) {
  if (payload.empty()) throw JpegError(JpegError::Kind::MalformedDqt, "empty DQT segment");
  std::vector<DqtTable> tables;
  std::size_t pos = 0;
  while (pos < payload.size()) {
    const int precision = payload[pos] >> 4;
    const int id = payload[pos] & 0x0F;
    if (precision > 1) throw JpegError(JpegError::Kind::MalformedDqt, "invalid DQT precision " + std::to_string(precision));
    if (id > 3) throw JpegError(JpegError::Kind::MalformedDqt, "invalid DQT table id " + std::to_string(id));
    const std::size_t width = precision == 0 ? 1 : 2;
    ++pos;
    if (payload.size() - pos < width * kStepCount)
      throw JpegError(JpegError::Kind::MalformedDqt, "DQT table " + std::to_string(id) + " truncated");

    std::array<std::uint16_t, kStepCount> zz{};
    for (std::size_t k = 0; k < kStepCount; ++k, pos += width) {
      zz[k] = width == 1 ? payload[pos] : read_be16(payload, pos);
      if (zz[k] == 0) throw JpegError(JpegError::Kind::MalformedDqt, "zero quantization step in table " + std::to_string(id));
    }
    tables.push_back({precision == 0 ? Precision::EightBit : Precision::SixteenBit, id,
                      QuantMatrix(dezigzag(std::span<const std::uint16_t>(zz)))});
  }
  return tables;
}

struct ExtractedTables {
  // Every table definition found, in file order.
  std::vector<DqtTable> definitions;
  // Id 0 as luminance and id 1 as chrominance, last definition winning.
  TablePair pair;
};

inline ExtractedTables read_quant_tables(std::span<const std::uint8_t> data) {
  ExtractedTables out;
  for (const Segment& seg : scan_segments(data)) {
    if (seg.marker != marker::kDqt) continue;
    for (DqtTable& t : parse_dqt(*seg.payload)) {
      if (t.table_id == 0) out.pair.luminance = t.matrix;
      if (t.table_id == 1) out.pair.chrominance = t.matrix;
      out.definitions.push_back(std::move(t));
    }
  }
  if (out.definitions.empty()) throw JpegError(JpegError::Kind::NoTables, "no DQT segment before start of scan");
  return out;
}

inline TablePair extract_tables(std::span<const std::uint8_t> data) { return read_quant_tables(data).pair; }

}  // namespace jpegqf
