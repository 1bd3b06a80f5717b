#pragma once

/**
 * @file laurent.hpp
 * @brief Exact Laurent polynomials in a formal square root of t.
 *
 * A HalfLaurent is a finite sum of monomials a_i t^{i/2} with arbitrary
 * precision integer coefficients. The index i is the *half-exponent*: t has
 * index 2, t^{1/2} has index 1, t^{-1} has index -2. Zero coefficients are
 * never stored, so equality of values is equality of coefficient maps.
 *
 * The truncation operator keeps the monomials whose half-exponent is at most
 * a bound d. The bound is always on the half grading: truncate(p, 2) keeps
 * t^0 and t^1 but drops t^2.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hkl/errors.hpp"

namespace hkl {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class HalfLaurent {
 public:
  using Coeff = BigInt;
  using Terms = std::map<int, Coeff>;

  HalfLaurent() = default;

  // Constant polynomial. Implicit so that integer literals mix with values.
  HalfLaurent(long long c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(0, Coeff(c));
  }

  static HalfLaurent monomial(int half_index, Coeff c = 1) {
    HalfLaurent p;
    if (c != 0) p.terms_.emplace(half_index, std::move(c));
    return p;
  }

  /// t^k for an integer k.
  static HalfLaurent t_power(int k) { return monomial(2 * k); }
  static HalfLaurent t() { return monomial(2); }
  static HalfLaurent sqrt_t() { return monomial(1); }

  /// Build from (half_exponent, coefficient) pairs; repeated indices add up.
  static HalfLaurent from_pairs(const std::vector<std::pair<int, Coeff>>& pairs) {
    HalfLaurent p;
    for (const auto& [i, c] : pairs) p.add_term(i, c);
    return p;
  }

  /// Integer polynomial from ascending integer-degree coefficients.
  static HalfLaurent from_degrees(std::initializer_list<long long> ascending) {
    HalfLaurent p;
    int k = 0;
    for (long long c : ascending) p.add_term(2 * k++, Coeff(c));
    return p;
  }

  const Terms& terms() const noexcept { return terms_; }

  Coeff coefficient(int half_index) const {
    auto it = terms_.find(half_index);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_integral() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& kv) { return kv.first % 2 == 0; });
  }

  // Integral with no negative powers of t.
  bool is_polynomial() const noexcept {
    return is_integral() && (terms_.empty() || terms_.begin()->first >= 0);
  }

  /// Smallest and largest half-exponent. Undefined on zero.
  int min_index() const { return terms_.begin()->first; }
  int max_index() const { return terms_.rbegin()->first; }

  std::vector<std::pair<int, Coeff>> to_pairs() const {
    return {terms_.begin(), terms_.end()};
  }

  void add_term(int half_index, const Coeff& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(half_index, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Multiply by t^{half_shift/2}.
  HalfLaurent shifted(int half_shift) const {
    HalfLaurent p;
    for (const auto& [i, c] : terms_) p.terms_.emplace_hint(p.terms_.end(), i + half_shift, c);
    return p;
  }

  HalfLaurent& operator+=(const HalfLaurent& o) {
    for (const auto& [i, c] : o.terms_) add_term(i, c);
    return *this;
  }
  HalfLaurent& operator-=(const HalfLaurent& o) {
    for (const auto& [i, c] : o.terms_) add_term(i, -c);
    return *this;
  }
  HalfLaurent& operator*=(const HalfLaurent& o) { return *this = *this * o; }

  friend HalfLaurent operator+(HalfLaurent a, const HalfLaurent& b) { return a += b; }
  friend HalfLaurent operator-(HalfLaurent a, const HalfLaurent& b) { return a -= b; }
  friend HalfLaurent operator-(HalfLaurent a) {
    for (auto& kv : a.terms_) kv.second = -kv.second;
    return a;
  }

  friend HalfLaurent operator*(const HalfLaurent& a, const HalfLaurent& b) {
    HalfLaurent p;
    if (a.is_zero() || b.is_zero()) return p;
    for (const auto& [i, x] : a.terms_)
      for (const auto& [j, y] : b.terms_) p.add_term(i + j, x * y);
    return p;
  }

  friend bool operator==(const HalfLaurent&, const HalfLaurent&) = default;

  /// Human-readable form, highest power first: "t^3-2t^2+2t-1", "t^(1/2)".
  std::string to_string() const;

  /// Inverse of to_string. Throws ParseError.
  static HalfLaurent parse(std::string_view text);

 private:
  Terms terms_;
};

inline HalfLaurent pow(HalfLaurent base, unsigned exponent) {
  HalfLaurent result = 1;
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent != 0) base *= base;
  }
  return result;
}

/// τ_{≤d}: keep exactly the monomials t^{i/2} with i ≤ d.
inline HalfLaurent truncate(const HalfLaurent& p, int d) {
  std::vector<std::pair<int, HalfLaurent::Coeff>> kept;
  for (const auto& [i, c] : p.terms()) {
    if (i > d) break;
    kept.emplace_back(i, c);
  }
  return HalfLaurent::from_pairs(kept);
}

/// Exact value at t = q. Requires an integral value (even indices only).
inline Rational evaluate(const HalfLaurent& p, long long q) {
  if (q < 2) throw Error("evaluate: q must be at least 2");
  if (!p.is_integral())
    throw NonIntegralExponent("evaluate: half-integral power of t in " + p.to_string());
  Rational sum = 0;
  for (const auto& [i, c] : p.terms()) {
    const int k = i / 2;
    BigInt power = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(k < 0 ? -k : k));
    sum += k >= 0 ? Rational(c * power) : Rational(c, power);
  }
  return sum;
}

inline std::string HalfLaurent::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const int i = it->first;
    Coeff c = it->second;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (negative)
      out << '-';
    else if (!first)
      out << '+';
    first = false;
    if (i == 0) {
      out << c;
      continue;
    }
    if (c != 1) out << c;
    out << 't';
    if (i % 2 != 0)
      out << "^(" << i << "/2)";
    else if (i != 2)
      out << '^' << i / 2;
  }
  return out.str();
}

inline HalfLaurent HalfLaurent::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  auto fail = [&]() -> HalfLaurent { throw ParseError("cannot parse polynomial '" + std::string(text) + "'"); };
  if (s.empty()) fail();
  if (s == "0") return {};

  HalfLaurent result;
  std::size_t pos = 0;
  auto read_int = [&](bool allow_sign) {
    std::size_t start = pos;
    if (allow_sign && pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) fail();
    return std::string(s, start, pos - start);
  };

  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
    } else if (pos != 0) {
      fail();
    }
    Coeff c = 1;
    bool has_coeff = false;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      c = Coeff(read_int(false));
      has_coeff = true;
    }
    int index = 0;
    if (pos < s.size() && s[pos] == 't') {
      ++pos;
      index = 2;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        if (pos < s.size() && s[pos] == '(') {
          ++pos;
          index = std::stoi(read_int(true));
          if (s.compare(pos, 3, "/2)") != 0) fail();
          pos += 3;
        } else {
          index = 2 * std::stoi(read_int(true));
        }
      }
    } else if (!has_coeff) {
      fail();
    }
    result.add_term(index, negative ? Coeff(-c) : c);
  }
  return result;
}

}  // namespace hkl
