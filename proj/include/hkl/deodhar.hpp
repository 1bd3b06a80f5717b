#pragma once

/**
 * @file deodhar.hpp
 * @brief Deodhar's decomposition of a Bruhat cell into pieces A^a x G_m^b.
 *
 * Fix a reduced word w = s_1...s_r. A subexpression is a mask choosing
 * gamma_i in {1, s_i} at each position. With prefix products
 * p_i = gamma_1...gamma_i (gamma_i included),
 *   I = { i : gamma_i = s_i },
 *   J = { i : p_i(-alpha_i) is a positive root }.
 * The piece indexed by the mask is empty when J is not contained in I, and
 * otherwise is A^{|I - J|} x G_m^{r - |I|}. Pieces with endpoint p_r = v pave
 * the intersection of the cell of w with the opposite cell of v, so counting
 * points gives R_{v,w}(q) = sum over those pieces of q^a (q - 1)^b.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hkl/coxeter.hpp"
#include "hkl/laurent.hpp"

namespace hkl {

struct Subexpression {
  Word word;
  std::vector<bool> mask;  // true at i: gamma_i = s_i
};

struct CellShape {
  int affine_dim = 0;
  int torus_dim = 0;
  friend bool operator==(const CellShape&, const CellShape&) = default;
};

struct CellDescriptor {
  Subexpression gamma;
  ElemId endpoint{};
  std::vector<int> I;  // zero-based positions
  std::vector<int> J;
  std::optional<CellShape> shape;  // nullopt: empty piece

  bool empty() const { return !shape.has_value(); }
};

namespace detail {

inline bool j_test(const WeylGroup& group, ElemId prefix, int s) {
  return group.apply(prefix, -simple_root(group.rank(), s)).is_positive();
}

inline std::optional<CellShape> shape_of(const std::vector<int>& I, const std::vector<int>& J, int r) {
  for (int j : J)
    if (std::find(I.begin(), I.end(), j) == I.end()) return std::nullopt;
  return CellShape{static_cast<int>(I.size() - J.size()), r - static_cast<int>(I.size())};
}

}  // namespace detail

/// Computes prefix products, I, J, endpoint and shape of one mask.
inline CellDescriptor classify(const WeylGroup& group, const Subexpression& gamma) {
  CellDescriptor cell;
  cell.gamma = gamma;
  ElemId prefix = group.identity();
  const int r = static_cast<int>(gamma.word.size());
  for (int i = 0; i < r; ++i) {
    const int s = gamma.word[static_cast<std::size_t>(i)];
    if (gamma.mask[static_cast<std::size_t>(i)]) {
      prefix = group.right_mul(prefix, s);
      cell.I.push_back(i);
    }
    if (detail::j_test(group, prefix, s)) cell.J.push_back(i);
  }
  cell.endpoint = prefix;
  cell.shape = detail::shape_of(cell.I, cell.J, r);
  return cell;
}

/// Classifies all 2^r masks over a reduced word of w. Masks are produced in
/// lexicographic order (false < true, leftmost position first), which is
/// binary-counter order with the leftmost bit most significant. Prefix
/// products are shared along the enumeration tree. Throws NotReduced.
inline std::vector<CellDescriptor> cell_catalog(const WeylGroup& group, ElemId w, const Word& word) {
  if (static_cast<int>(word.size()) != group.length(w) || group.from_word(word) != w)
    throw NotReduced("word " + WeylGroup::format_word(word) + " is not a reduced word of " + group.word_string(w));
  const int r = static_cast<int>(word.size());
  std::vector<CellDescriptor> out;
  out.reserve(std::size_t{1} << static_cast<unsigned>(r));
  std::vector<bool> mask(static_cast<std::size_t>(r));
  std::vector<int> I, J;

  auto walk = [&](auto&& self, int i, ElemId prefix) -> void {
    if (i == r) {
      CellDescriptor cell{Subexpression{word, mask}, prefix, I, J, detail::shape_of(I, J, r)};
      out.push_back(std::move(cell));
      return;
    }
    const int s = word[static_cast<std::size_t>(i)];
    for (bool take : {false, true}) {
      const ElemId p = take ? group.right_mul(prefix, s) : prefix;
      mask[static_cast<std::size_t>(i)] = take;
      if (take) I.push_back(i);
      const bool in_j = detail::j_test(group, p, s);
      if (in_j) J.push_back(i);
      self(self, i + 1, p);
      if (in_j) J.pop_back();
      if (take) I.pop_back();
    }
  };
  walk(walk, 0, group.identity());
  return out;
}

/// t^a (t - 1)^b.
inline HalfLaurent cell_polynomial(const CellShape& shape) {
  return pow(HalfLaurent::t() - 1, static_cast<unsigned>(shape.torus_dim)).shifted(2 * shape.affine_dim);
}

/// Sum of cell polynomials grouped by endpoint.
inline std::map<ElemId, HalfLaurent> r_polys_from_catalog(const std::vector<CellDescriptor>& catalog) {
  std::map<ElemId, HalfLaurent> out;
  for (const auto& cell : catalog)
    if (cell.shape) out[cell.endpoint] += cell_polynomial(*cell.shape);
  return out;
}

/// R_{v,w} by counting points of the pieces with endpoint v; zero when no
/// piece ends at v.
inline HalfLaurent r_poly_from_cells(const WeylGroup& group, ElemId v, ElemId w, const Word& word) {
  HalfLaurent sum;
  for (const auto& cell : cell_catalog(group, w, word))
    if (cell.shape && cell.endpoint == v) sum += cell_polynomial(*cell.shape);
  return sum;
}

struct PointCount {
  BigInt total;
  BigInt expected;
};

/// Points of all nonempty pieces over F_q against q^{l(w)}.
inline PointCount point_count_identity(const WeylGroup& group, ElemId w, const Word& word, long long q) {
  if (q < 2) throw Error("point_count_identity: q must be at least 2");
  PointCount out{0, boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(group.length(w)))};
  for (const auto& cell : cell_catalog(group, w, word))
    if (cell.shape)
      out.total += boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(cell.shape->affine_dim)) *
                   boost::multiprecision::pow(BigInt(q - 1), static_cast<unsigned>(cell.shape->torus_dim));
  return out;
}

}  // namespace hkl
