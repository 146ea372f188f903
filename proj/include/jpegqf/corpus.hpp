#pragma once

// Minimal JPEG fixtures carrying chosen quantization tables, and single-step
// perturbations of them. Files hold SOI, DQT, a frame header, an SOS header
// and EOI; there is no entropy-coded data.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jpegqf/identify.hpp"
#include "jpegqf/ijg.hpp"
#include "jpegqf/jpeg.hpp"

namespace jpegqf {

struct Perturbation {
  Channel channel;
  int row;  // 1-based
  int col;  // 1-based
  int new_value;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct FixtureSpec {
  std::vector<DqtTable> tables;
  // Applied edits, recorded for naming; the tables already include them.
  std::vector<Perturbation> perturbations;
  // Quality the tables were synthesized from, if any.
  std::optional<int> quality;

  friend bool operator==(const FixtureSpec&, const FixtureSpec&) = default;
};

constexpr int table_id(Channel c) { return c == Channel::Luminance ? 0 : 1; }

inline FixtureSpec fixture_from_pair(const TablePair& pair) {
  FixtureSpec spec;
  for (Channel c : {Channel::Luminance, Channel::Chrominance})
    if (pair[c]) spec.tables.push_back({Precision::EightBit, table_id(c), *pair[c]});
  return spec;
}

inline FixtureSpec standard_fixture(QualityFactor f) {
  FixtureSpec spec = fixture_from_pair(standard_pair(f));
  spec.quality = f.value();
  return spec;
}

constexpr int max_step(Precision p) { return p == Precision::EightBit ? 255 : 65535; }

inline void validate(const FixtureSpec& spec) {
  if (spec.tables.empty()) throw std::invalid_argument("fixture needs at least one table");
  for (const DqtTable& t : spec.tables) {
    if (t.table_id < 0 || t.table_id > 3) throw std::invalid_argument("table id must be in [0, 3]");
    for (std::uint16_t v : t.matrix)
      if (v < 1 || v > max_step(t.precision))
        throw std::invalid_argument("step " + std::to_string(v) + " out of range for table " + std::to_string(t.table_id));
  }
  for (const Perturbation& p : spec.perturbations) {
    if (p.row < 1 || p.row > kBlockSize || p.col < 1 || p.col > kBlockSize)
      throw std::invalid_argument("perturbation position outside the 8x8 grid");
    if (p.new_value < 1 || p.new_value > 65535) throw std::invalid_argument("perturbation value out of range");
  }
}

namespace detail {

inline void put_be16(std::vector<std::uint8_t>& out, std::size_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

inline void put_marker(std::vector<std::uint8_t>& out, std::uint8_t m) {
  out.push_back(marker::kPrefix);
  out.push_back(m);
}

}  // namespace detail

inline std::vector<std::uint8_t> write_minimal_jpeg(const FixtureSpec& spec) {
  validate(spec);
  std::vector<std::uint8_t> out;
  detail::put_marker(out, marker::kSoi);

  bool extended = false;
  for (const DqtTable& t : spec.tables) {
    const bool wide = t.precision == Precision::SixteenBit;
    extended |= wide;
    detail::put_marker(out, marker::kDqt);
    detail::put_be16(out, 2 + 1 + kStepCount * (wide ? 2 : 1));
    out.push_back(static_cast<std::uint8_t>(((wide ? 1 : 0) << 4) | t.table_id));
    for (std::uint16_t v : rezigzag(std::span<const std::uint16_t>(t.matrix.steps()))) {
      if (wide) out.push_back(static_cast<std::uint8_t>(v >> 8));
      out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    }
  }

  // One 8x8 grey component, or YCbCr when both table 0 and table 1 exist.
  auto has_id = [&](int id) {
    return std::any_of(spec.tables.begin(), spec.tables.end(), [id](const DqtTable& t) { return t.table_id == id; });
  };
  const int luma_table = has_id(0) ? 0 : spec.tables.front().table_id;
  const int components = has_id(0) && has_id(1) ? 3 : 1;

  detail::put_marker(out, extended ? std::uint8_t{0xC1} : marker::kSof0);
  detail::put_be16(out, 8 + 3 * components);
  out.push_back(8);         // sample precision
  detail::put_be16(out, 8);  // height
  detail::put_be16(out, 8);  // width
  out.push_back(static_cast<std::uint8_t>(components));
  for (int c = 0; c < components; ++c) {
    out.push_back(static_cast<std::uint8_t>(c + 1));
    out.push_back(0x11);
    out.push_back(static_cast<std::uint8_t>(c == 0 ? luma_table : 1));
  }

  detail::put_marker(out, marker::kSos);
  detail::put_be16(out, 6 + 2 * components);
  out.push_back(static_cast<std::uint8_t>(components));
  for (int c = 0; c < components; ++c) {
    out.push_back(static_cast<std::uint8_t>(c + 1));
    out.push_back(static_cast<std::uint8_t>(c == 0 ? 0x00 : 0x11));
  }
  out.push_back(0);   // Ss
  out.push_back(63);  // Se
  out.push_back(0);   // Ah/Al

  detail::put_marker(out, marker::kEoi);
  return out;
}

// Returns a copy with one step of the channel's table moved by delta.
inline FixtureSpec perturb(const FixtureSpec& spec, Channel channel, int row, int col, int delta) {
  FixtureSpec out = spec;
  auto it = std::find_if(out.tables.begin(), out.tables.end(),
                         [&](const DqtTable& t) { return t.table_id == table_id(channel); });
  if (it == out.tables.end())
    throw std::invalid_argument(std::string("fixture has no ") + std::string(channel_name(channel)) + " table");
  if (row < 1 || row > kBlockSize || col < 1 || col > kBlockSize)
    throw std::invalid_argument("perturbation position outside the 8x8 grid");
  const int next = it->matrix.at(row, col) + delta;
  if (next < 1 || next > max_step(it->precision))
    throw std::invalid_argument("perturbed step " + std::to_string(next) + " out of range");
  it->matrix.at(row, col) = static_cast<std::uint16_t>(next);
  out.perturbations.push_back({channel, row, col, next});
  return out;
}

struct Fixture {
  QualityFactor quality;
  std::vector<std::uint8_t> bytes;
};

inline std::vector<Fixture> standard_corpus(const std::vector<int>& qualities) {
  std::vector<Fixture> out;
  out.reserve(qualities.size());
  for (int q : qualities) {
    const QualityFactor f(q);
    out.push_back({f, write_minimal_jpeg(standard_fixture(f))});
  }
  return out;
}

inline std::vector<int> quality_range(int first, int last) {
  std::vector<int> out;
  for (int q = first; q <= last; ++q) out.push_back(q);
  return out;
}

// e.g. "qf075.jpg", "qf075_lum-8-8-to49.jpg", "custom.jpg".
inline std::string fixture_name(const FixtureSpec& spec) {
  std::string name;
  if (spec.quality) {
    std::string digits = std::to_string(*spec.quality);
    name = "qf" + std::string(3 - std::min<std::size_t>(3, digits.size()), '0') + digits;
  } else {
    name = "custom";
  }
  for (const Perturbation& p : spec.perturbations)
    name += std::string("_") + (p.channel == Channel::Luminance ? "lum" : "chr") + "-" + std::to_string(p.row) + "-" +
            std::to_string(p.col) + "-to" + std::to_string(p.new_value);
  return name + ".jpg";
}

inline std::filesystem::path write_fixture_file(const std::filesystem::path& dir, const FixtureSpec& spec) {
  std::filesystem::create_directories(dir);
  const auto path = dir / fixture_name(spec);
  const auto bytes = write_minimal_jpeg(spec);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("cannot write fixture " + path.string());
  return path;
}

}  // namespace jpegqf
