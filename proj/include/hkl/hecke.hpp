#pragma once

/**
 * @file hecke.hpp
 * @brief The Hecke algebra of a Weyl group in the standard basis {T_w}.
 *
 * Scalars are HalfLaurent values. Products are folded one generator at a
 * time using
 *   T_w T_s = T_{ws}                      if l(ws) > l(w)
 *   T_w T_s = (t - 1) T_w + t T_{ws}      otherwise,
 * the second line being the quadratic relation (T_s + 1)(T_s - t) = 0.
 */

#include <map>
#include <string>
#include <utility>

#include "hkl/coxeter.hpp"
#include "hkl/laurent.hpp"
#include "hkl/memo.hpp"

namespace hkl {

class HeckeElt {
 public:
  using Terms = std::map<ElemId, HalfLaurent>;

  HeckeElt() = default;

  static HeckeElt basis(ElemId w, HalfLaurent c = 1) {
    HeckeElt x;
    x.add(w, c);
    return x;
  }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  HalfLaurent coefficient(ElemId w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? HalfLaurent{} : it->second;
  }

  void add(ElemId w, const HalfLaurent& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  HeckeElt& operator+=(const HeckeElt& o) {
    for (const auto& [w, c] : o.terms_) add(w, c);
    return *this;
  }

  friend HeckeElt operator+(HeckeElt a, const HeckeElt& b) { return a += b; }

  friend HeckeElt operator*(const HalfLaurent& c, const HeckeElt& x) {
    HeckeElt out;
    if (c.is_zero()) return out;
    for (const auto& [w, a] : x.terms_) out.add(w, c * a);
    return out;
  }

  friend bool operator==(const HeckeElt&, const HeckeElt&) = default;

 private:
  Terms terms_;
};

class HeckeAlgebra {
 public:
  explicit HeckeAlgebra(const WeylGroup& group) : group_(group) {}

  const WeylGroup& group() const noexcept { return group_; }

  /// x * T_s.
  HeckeElt mul_by_generator(const HeckeElt& x, int s) const {
    static const HalfLaurent t = HalfLaurent::t();
    static const HalfLaurent t_minus_one = t - 1;
    HeckeElt out;
    for (const auto& [w, c] : x.terms()) {
      const ElemId ws = group_.right_mul(w, s);
      if (group_.length(ws) > group_.length(w)) {
        out.add(ws, c);
      } else {
        out.add(w, t_minus_one * c);
        out.add(ws, t * c);
      }
    }
    return out;
  }

  /// x * T_w, folding along the ShortLex word of w.
  HeckeElt mul_by_basis(HeckeElt x, ElemId w) const {
    for (int s : group_.reduced_word(w)) x = mul_by_generator(x, s);
    return x;
  }

  HeckeElt multiply(const HeckeElt& a, const HeckeElt& b) const {
    HeckeElt out;
    for (const auto& [w, c] : b.terms()) out += c * mul_by_basis(a, w);
    return out;
  }

  /// T_s^{-1} = t^{-1} T_s + (t^{-1} - 1) T_e.
  HeckeElt invert_generator(int s) const {
    const HalfLaurent t_inv = HalfLaurent::t_power(-1);
    HeckeElt out = HeckeElt::basis(group_.right_mul(group_.identity(), s), t_inv);
    out.add(group_.identity(), t_inv - 1);
    return out;
  }

  /// x * T_s^{-1} = t^{-1}(x T_s) + (t^{-1} - 1) x.
  HeckeElt mul_by_inverse_generator(const HeckeElt& x, int s) const {
    const HalfLaurent t_inv = HalfLaurent::t_power(-1);
    return t_inv * mul_by_generator(x, s) + (t_inv - 1) * x;
  }

  /// T_w^{-1} for w = s_1...s_r, computed as T_{s_r}^{-1}...T_{s_1}^{-1}
  /// along the given word. The word must be reduced for the result to be
  /// T_w^{-1}; no memoization.
  HeckeElt invert_word(const Word& word) const {
    HeckeElt x = HeckeElt::basis(group_.identity());
    for (auto it = word.rbegin(); it != word.rend(); ++it) x = mul_by_inverse_generator(x, *it);
    return x;
  }

  /// T_w^{-1}, memoized: T_w^{-1} = T_{sw}^{-1} T_s^{-1} for the first
  /// letter s of the ShortLex word.
  HeckeElt invert_basis(ElemId w) const {
    if (w == group_.identity()) return HeckeElt::basis(w);
    if (auto hit = inverse_memo_.find(w)) return std::move(*hit);
    const int s = group_.reduced_word(w).front();
    return inverse_memo_.insert(w, mul_by_inverse_generator(invert_basis(group_.left_mul(s, w)), s));
  }

  /// R_{v,w} = (-1)^{l(w)-l(v)} t^{l(w)} [T_v] (T_{w^{-1}})^{-1} for every v
  /// in the support, which is exactly [e, w]. The inverse of T_w itself is
  /// supported on [e, w^{-1}]; reading it at T_{v^{-1}} gives the same value.
  /// Throws NonPolynomialR unless each value is an integer polynomial of
  /// degree exactly l(w) - l(v).
  std::map<ElemId, HalfLaurent> extract_R(ElemId w) const {
    std::map<ElemId, HalfLaurent> out;
    const int lw = group_.length(w);
    const HeckeElt inverse = invert_basis(group_.inverse(w));
    for (const auto& [v, c] : inverse.terms()) {
      const int gap = lw - group_.length(v);
      HalfLaurent r = c.shifted(2 * lw);
      if (gap % 2 != 0) r = -r;
      if (!r.is_polynomial() || r.max_index() != 2 * gap)
        throw NonPolynomialR("R(" + group_.word_string(v) + ", " + group_.word_string(w) + ") = " + r.to_string() +
                             " is not a polynomial of degree " + std::to_string(gap));
      out.emplace(v, std::move(r));
    }
    return out;
  }

  CacheStats inverse_stats() const { return inverse_memo_.stats(); }

 private:
  const WeylGroup& group_;
  mutable MemoCache<ElemId, HeckeElt> inverse_memo_;
};

}  // namespace hkl
