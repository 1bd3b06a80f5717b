// Brute-force oracle for R-polynomials in type A. Over F_p, R_{v,w}(p) is
// the number of flags F with F in B w B / B and F in B^- v B / B. The test
// walks every invertible matrix g, reads off the Bruhat cells of g and w0 g
// by rank computations, and divides the counts by |B|.

#include <gtest/gtest.h>

#include <map>

#include "hkl/klcore.hpp"

using namespace hkl;

namespace {

using Vec = std::vector<int>;

int rank_mod_p(std::vector<Vec> rows, int p) {
  int rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = static_cast<std::size_t>(rank);
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[static_cast<std::size_t>(rank)]);
    Vec& top = rows[static_cast<std::size_t>(rank)];
    int inv = 1;
    while (top[c] * inv % p != 1) ++inv;
    for (int& x : top) x = x * inv % p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank) || rows[r][c] == 0) continue;
      const int f = rows[r][c];
      for (std::size_t k = 0; k < cols; ++k) rows[r][k] = ((rows[r][k] - f * top[k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// sigma with g in B sigma B, where column j of g spans the flag step j and
// dim(E_i cap F_j) = #{k <= j : sigma(k) <= i}. One-based values.
std::vector<int> bruhat_cell(const std::vector<Vec>& columns, int p) {
  const int n = static_cast<int>(columns.size());
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(n + 1), 0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      std::vector<Vec> span;
      for (int k = 0; k < i; ++k) {
        Vec e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(k)] = 1;
        span.push_back(e);
      }
      for (int k = 0; k < j; ++k) span.push_back(columns[static_cast<std::size_t>(k)]);
      d[i][j] = i + j - rank_mod_p(span, p);
    }
  std::vector<int> sigma(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i)
      if (d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1) sigma[static_cast<std::size_t>(j - 1)] = i;
  return sigma;
}

// Generator s_i acts as the transposition (i, i+1).
ElemId to_element(const WeylGroup& g, std::vector<int> sigma) {
  Word reversed;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < sigma.size(); ++i)
      if (sigma[i] > sigma[i + 1]) {
        std::swap(sigma[i], sigma[i + 1]);
        reversed.push_back(static_cast<int>(i));
        changed = true;
        break;
      }
  }
  return g.from_word(Word(reversed.rbegin(), reversed.rend()));
}

void check_against_flags(const char* label, int p) {
  WeylGroup g(CartanDatum::from_label(label));
  KLEngine engine(g);
  const int n = g.rank() + 1;
  const std::size_t entries = static_cast<std::size_t>(n * n);
  std::map<std::pair<ElemId, ElemId>, long long> counts;  // (v, w)

  std::vector<int> digits(entries, 0);
  std::size_t total_matrices = 1;
  for (std::size_t k = 0; k < entries; ++k) total_matrices *= static_cast<std::size_t>(p);
  long long invertible = 0;
  for (std::size_t code = 0; code < total_matrices; ++code) {
    std::size_t rest = code;
    for (std::size_t k = 0; k < entries; ++k) {
      digits[k] = static_cast<int>(rest % static_cast<std::size_t>(p));
      rest /= static_cast<std::size_t>(p);
    }
    std::vector<Vec> columns(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n)));
    std::vector<Vec> flipped = columns;  // w0 g: rows reversed
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const int x = digits[static_cast<std::size_t>(r * n + c)];
        columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = x;
        flipped[static_cast<std::size_t>(c)][static_cast<std::size_t>(n - 1 - r)] = x;
      }
    if (rank_mod_p(columns, p) != n) continue;
    ++invertible;
    const ElemId w = to_element(g, bruhat_cell(columns, p));
    const ElemId tau = to_element(g, bruhat_cell(flipped, p));
    const ElemId v = g.multiply(g.longest(), tau);
    ++counts[{v, w}];
  }

  long long borel = 1;
  for (int k = 0; k < n; ++k) borel *= p - 1;
  for (int k = 0; k < n * (n - 1) / 2; ++k) borel *= p;
  ASSERT_EQ(invertible % borel, 0);

  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const ElemId v = elem_id(i), w = elem_id(j);
      auto it = counts.find({v, w});
      const long long raw = it == counts.end() ? 0 : it->second;
      ASSERT_EQ(raw % borel, 0);
      const Rational flags(raw / borel);
      const std::string where = std::string(label) + " p=" + std::to_string(p) + " (" + g.word_string(v) + ", " + g.word_string(w) + ")";
      EXPECT_EQ(evaluate(engine.r_recursive(v, w), p), flags) << where;
      if (g.bruhat_leq(v, w)) {
        EXPECT_EQ(evaluate(engine.r_hecke(v, w), p), flags) << where;
        EXPECT_EQ(evaluate(engine.r_cells(v, w), p), flags) << where;
      } else {
        EXPECT_EQ(flags, 0) << where;
      }
    }
}

}  // namespace

TEST(PointCountOracle, A2OverF2) { check_against_flags("A2", 2); }
TEST(PointCountOracle, A2OverF3) { check_against_flags("A2", 3); }
TEST(PointCountOracle, A3OverF2) { check_against_flags("A3", 2); }
