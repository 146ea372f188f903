#pragma once

// Test-only reference computations built on boost::rational, independent of
// the library's integer and Rational code paths.

#include <array>
#include <set>
#include <vector>

#include <boost/rational.hpp>

namespace oracle {

using Fraction = boost::rational<long long>;

inline long long floor_of(const Fraction& x) {
  long long q = x.numerator() / x.denominator();
  if (x.numerator() % x.denominator() != 0 && x.numerator() < 0) --q;
  return q;
}

inline long long scale_for(int quality) {
  if (quality >= 50) return 200 - 2 * quality;
  return floor_of(Fraction(5000, quality));
}

// Q = floor((50 + S*D) / 100), clamped to [1, 255].
inline int ijg_step(int base, int quality) {
  const long long v = floor_of(Fraction(50 + scale_for(quality) * base, 100));
  return static_cast<int>(v < 1 ? 1 : (v > 255 ? 255 : v));
}

// Literal round-half-up of the same expression, floor(x + 1/2), unclamped.
inline long long round_half_up_step(int base, int quality) {
  return floor_of(Fraction(50 + scale_for(quality) * base, 100) + Fraction(1, 2));
}

inline std::array<int, 64> ijg_matrix(const std::array<int, 64>& base, int quality) {
  std::array<int, 64> out{};
  for (int k = 0; k < 64; ++k) out[k] = ijg_step(base[k], quality);
  return out;
}

// Widened band: Q - 1 <= (50 + S*D)/100 < Q + 1, with no upper limit for a
// step saturated at 255.
inline bool within_band(int step, int base, long long scale) {
  const Fraction x(50 + scale * base, 100);
  if (x < Fraction(step - 1)) return false;
  return step == 255 || x < Fraction(step + 1);
}

// Every quality whose scale keeps all given (step, base) pairs in band.
inline std::set<int> brute_force_candidates(const std::vector<std::pair<int, int>>& steps_and_bases) {
  std::set<int> out;
  for (int f = 1; f <= 100; ++f) {
    bool ok = true;
    for (const auto& [q, d] : steps_and_bases) {
      if (!within_band(q, d, scale_for(f))) {
        ok = false;
        break;
      }
    }
    if (ok) out.insert(f);
  }
  return out;
}

}  // namespace oracle
