#pragma once

// Quality factor identification: per-step bounds on the scale value are
// intersected over every selected step, the surviving quality factors are
// enumerated, then each candidate is verified step by step against the
// standard matrix it would have produced.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "jpegqf/ijg.hpp"
#include "jpegqf/rational.hpp"

namespace jpegqf {

// Half-open set [lo, hi) of scale values. A missing bound is unbounded.
struct ScaleInterval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;

  static ScaleInterval unbounded() { return {}; }

  bool empty() const { return lo && hi && *lo >= *hi; }

  bool contains(const Rational& s) const {
    return (!lo || *lo <= s) && (!hi || s < *hi);
  }

  ScaleInterval intersect(const ScaleInterval& other) const {
    ScaleInterval r = *this;
    if (other.lo && (!r.lo || *other.lo > *r.lo)) r.lo = other.lo;
    if (other.hi && (!r.hi || *other.hi < *r.hi)) r.hi = other.hi;
    return r;
  }

  // Subset test on the represented sets; every empty interval is a subset.
  bool subset_of(const ScaleInterval& other) const {
    if (empty()) return true;
    const bool lo_ok = !other.lo || (lo && *lo >= *other.lo);
    const bool hi_ok = !other.hi || (hi && *hi <= *other.hi);
    return lo_ok && hi_ok;
  }

  friend bool operator==(const ScaleInterval&, const ScaleInterval&) = default;
};

// Admissible scale values for one observed step q given its base entry d:
//   (100q - 150) / d <= S < (100q + 50) / d
// which tolerates any rounding rule within one unit of the exact product.
// A step at the baseline ceiling may be the clamped image of an arbitrarily
// large product, so its upper bound is dropped.
inline ScaleInterval step_interval(int q, int d) {
  if (d <= 0 || d > 255) throw std::invalid_argument("base entry must be in [1, 255], got " + std::to_string(d));
  if (q < 1 || q > 65535) throw std::invalid_argument("step must be in [1, 65535], got " + std::to_string(q));
  ScaleInterval r;
  r.lo = Rational(100 * static_cast<std::int64_t>(q) - 150, d);
  if (q != kMaxBaselineStep) r.hi = Rational(100 * static_cast<std::int64_t>(q) + 50, d);
  return r;
}

// Bits: 1 = luminance, 2 = chrominance, 3 = both.
class ChannelMask {
public:
  static constexpr ChannelMask luminance_only() { return ChannelMask(true, false); }
  static constexpr ChannelMask chrominance_only() { return ChannelMask(false, true); }
  static constexpr ChannelMask both() { return ChannelMask(true, true); }

  static ChannelMask from_bits(int bits) {
    if (bits < 1 || bits > 3) throw std::invalid_argument("channel mask must be 1, 2 or 3, got " + std::to_string(bits));
    return ChannelMask((bits & 1) != 0, (bits & 2) != 0);
  }

  constexpr bool luminance() const { return luminance_; }
  constexpr bool chrominance() const { return chrominance_; }
  constexpr bool uses(Channel c) const { return c == Channel::Luminance ? luminance_ : chrominance_; }
  constexpr int bits() const { return (luminance_ ? 1 : 0) | (chrominance_ ? 2 : 0); }

  // Selected channels in fixed order, luminance first.
  std::vector<Channel> channels() const {
    std::vector<Channel> out;
    if (luminance_) out.push_back(Channel::Luminance);
    if (chrominance_) out.push_back(Channel::Chrominance);
    return out;
  }

  friend constexpr bool operator==(ChannelMask, ChannelMask) = default;

private:
  constexpr ChannelMask(bool l, bool c) : luminance_(l), chrominance_(c) {}
  bool luminance_;
  bool chrominance_;
};

struct TablePair {
  std::optional<QuantMatrix> luminance;
  std::optional<QuantMatrix> chrominance;

  const std::optional<QuantMatrix>& operator[](Channel c) const {
    return c == Channel::Luminance ? luminance : chrominance;
  }
  std::optional<QuantMatrix>& operator[](Channel c) {
    return c == Channel::Luminance ? luminance : chrominance;
  }

  friend bool operator==(const TablePair&, const TablePair&) = default;
};

inline TablePair standard_pair(QualityFactor f) {
  return TablePair{synthesize_matrix(f, Channel::Luminance), synthesize_matrix(f, Channel::Chrominance)};
}

// One mismatching step; row and col are 1-based.
struct StepDiff {
  Channel channel;
  int row;
  int col;
  int observed;
  int expected;

  friend bool operator==(const StepDiff&, const StepDiff&) = default;
};

namespace detail {

inline const QuantMatrix& require_table(const TablePair& tables, Channel c) {
  const auto& t = tables[c];
  if (!t) throw std::invalid_argument(std::string("no ") + std::string(channel_name(c)) + " table present");
  return *t;
}

}  // namespace detail

inline ScaleInterval narrow(const TablePair& tables, ChannelMask mask) {
  const BaseTables& base = base_tables();
  ScaleInterval acc = ScaleInterval::unbounded();
  for (Channel c : mask.channels()) {
    const QuantMatrix& t = detail::require_table(tables, c);
    for (std::size_t k = 0; k < kStepCount; ++k)
      acc = acc.intersect(step_interval(t[k], base[c][k]));
  }
  return acc;
}

// Every quality factor whose scale value lies in the interval, highest first.
inline std::vector<QualityFactor> candidates(const ScaleInterval& interval) {
  std::vector<QualityFactor> out;
  for (int q = kMaxQuality; q >= kMinQuality; --q) {
    const QualityFactor f(q);
    if (interval.contains(Rational(quality_scaling(f)))) out.push_back(f);
  }
  return out;
}

inline std::vector<StepDiff> verify(QualityFactor f, const TablePair& tables, ChannelMask mask) {
  std::vector<StepDiff> diffs;
  for (Channel c : mask.channels()) {
    const QuantMatrix& observed = detail::require_table(tables, c);
    const QuantMatrix expected = synthesize_matrix(f, c);
    for (int row = 1; row <= kBlockSize; ++row)
      for (int col = 1; col <= kBlockSize; ++col)
        if (observed.at(row, col) != expected.at(row, col))
          diffs.push_back({c, row, col, observed.at(row, col), expected.at(row, col)});
  }
  return diffs;
}

struct Exact {
  QualityFactor quality;
  friend bool operator==(const Exact&, const Exact&) = default;
};

struct CandidateMismatch {
  QualityFactor quality;
  std::vector<StepDiff> diffs;
  friend bool operator==(const CandidateMismatch&, const CandidateMismatch&) = default;
};

struct NoCandidate {
  ScaleInterval interval;
  friend bool operator==(const NoCandidate&, const NoCandidate&) = default;
};

using IdentificationOutcome = std::variant<Exact, CandidateMismatch, NoCandidate>;

inline constexpr int kExitNoCandidate = 101;
inline constexpr int kExitMismatch = 102;
inline constexpr int kExitIoError = 200;

inline int exit_code(const IdentificationOutcome& outcome) {
  if (const auto* e = std::get_if<Exact>(&outcome)) return e->quality.value();
  if (std::holds_alternative<CandidateMismatch>(outcome)) return kExitMismatch;
  return kExitNoCandidate;
}

struct CandidateCheck {
  QualityFactor quality;
  std::size_t mismatches;
};

// Full trace of one identification, for diagnostics.
struct Identification {
  ScaleInterval interval;
  std::vector<QualityFactor> candidates;
  std::vector<CandidateCheck> checks;
  IdentificationOutcome outcome;
};

inline Identification identify_detailed(const TablePair& tables, ChannelMask mask) {
  ScaleInterval interval = narrow(tables, mask);
  std::vector<QualityFactor> cands = candidates(interval);
  if (cands.empty()) return {interval, {}, {}, NoCandidate{interval}};

  std::vector<CandidateCheck> checks;
  std::optional<CandidateMismatch> best;
  for (QualityFactor f : cands) {
    std::vector<StepDiff> diffs = verify(f, tables, mask);
    checks.push_back({f, diffs.size()});
    if (diffs.empty()) return {interval, std::move(cands), std::move(checks), Exact{f}};
    // Candidates arrive highest first, so strict less-than keeps ties on the larger F.
    if (!best || diffs.size() < best->diffs.size()) best = CandidateMismatch{f, std::move(diffs)};
  }
  return {interval, std::move(cands), std::move(checks), std::move(*best)};
}

inline IdentificationOutcome identify(const TablePair& tables, ChannelMask mask) {
  return identify_detailed(tables, mask).outcome;
}

}  // namespace jpegqf
