#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

namespace pieces {

// Exact non-negative rational. Scores are kept as rationals end to end so
// that reports and acceptance checks never depend on float rounding.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;  // > 0, gcd(num, den) == 1

  constexpr Rational() = default;

  static Rational ratio(int64_t n, int64_t d) {
    Rational r;
    r.num = n;
    r.den = d;
    r.reduce();
    return r;
  }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string fraction_str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Fixed-point decimal rendering, round half up. Integer arithmetic only.
  std::string decimal_str(int places = 6) const {
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    __int128 scaled = static_cast<__int128>(num) * scale;
    __int128 q = scaled / den;
    __int128 rem = scaled % den;
    if (2 * rem >= den) ++q;
    std::string digits;
    if (q == 0) {
      digits = "0";
    } else {
      while (q > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(q % 10)));
        q /= 10;
      }
      std::reverse(digits.begin(), digits.end());
    }
    if (places == 0) return digits;
    if (static_cast<int>(digits.size()) <= places)
      digits.insert(0, places + 1 - digits.size(), '0');
    digits.insert(digits.size() - places, ".");
    return digits;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }

  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
};

}  // namespace pieces
