#include <gtest/gtest.h>

#include <deque>
#include <set>

#include "hkl/coxeter.hpp"

using namespace hkl;

namespace {

// Length as distance from e in the Cayley graph, by plain BFS over matrices.
std::vector<int> cayley_distances(const WeylGroup& g) {
  std::vector<int> dist(g.size(), -1);
  std::deque<ElemId> queue{g.identity()};
  dist[0] = 0;
  while (!queue.empty()) {
    const ElemId u = queue.front();
    queue.pop_front();
    for (int s = 0; s < g.rank(); ++s) {
      const Matrix m = matmul(g.element(u).matrix, generator_matrix(g.datum(), s), g.rank());
      const ElemId next = *g.find(m);
      if (dist[index_of(next)] < 0) {
        dist[index_of(next)] = dist[index_of(u)] + 1;
        queue.push_back(next);
      }
    }
  }
  return dist;
}

// Subword property: v <= w iff some subword of a reduced word of w is a
// reduced word of v. Subwords of one reduced word suffice.
std::set<ElemId> subword_products(const WeylGroup& g, ElemId w) {
  std::set<ElemId> out;
  const Word& word = g.reduced_word(w);
  const std::size_t r = word.size();
  for (std::uint32_t mask = 0; mask < (1U << r); ++mask) {
    Word sub;
    for (std::size_t i = 0; i < r; ++i)
      if (mask & (1U << i)) sub.push_back(word[i]);
    out.insert(g.from_word(sub));
  }
  return out;
}

}  // namespace

TEST(Coxeter, GroupOrders) {
  const std::pair<const char*, std::size_t> cases[] = {{"A1", 2},  {"A2", 6},  {"A3", 24}, {"B2", 8},   {"G2", 12},
                                                       {"B3", 48}, {"C3", 48}, {"A4", 120}, {"D4", 192}, {"F4", 1152}};
  for (const auto& [label, order] : cases) EXPECT_EQ(WeylGroup(CartanDatum::from_label(label)).size(), order) << label;
}

TEST(Coxeter, PositiveRootCounts) {
  EXPECT_EQ(positive_roots(CartanDatum::from_label("A3")).size(), 6U);
  EXPECT_EQ(positive_roots(CartanDatum::from_label("G2")).size(), 6U);
  EXPECT_EQ(positive_roots(CartanDatum::from_label("E8")).size(), 120U);
}

TEST(Coxeter, LengthMatchesCayleyDistance) {
  for (const char* label : {"A3", "B3", "G2"}) {
    WeylGroup g(CartanDatum::from_label(label));
    const auto dist = cayley_distances(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_EQ(g.length(elem_id(i)), dist[i]) << label;
      EXPECT_EQ(length(g, g.element(elem_id(i))), dist[i]);
      EXPECT_EQ(static_cast<int>(g.reduced_word(elem_id(i)).size()), dist[i]);
      EXPECT_EQ(g.from_word(g.reduced_word(elem_id(i))), elem_id(i));
    }
    EXPECT_EQ(g.length(g.longest()), static_cast<int>(g.positive_roots().size()));
  }
}

TEST(Coxeter, ElementsAreIndexedByLengthThenShortLex) {
  WeylGroup g(CartanDatum::from_label("B3"));
  for (std::size_t i = 1; i < g.size(); ++i) {
    const auto& a = g.element(elem_id(i - 1));
    const auto& b = g.element(elem_id(i));
    EXPECT_TRUE(a.length < b.length || (a.length == b.length && a.word < b.word));
  }
  // ShortLex minimality: no reduced word is lexicographically smaller.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto words = g.all_reduced_words(elem_id(i));
    EXPECT_EQ(words.front(), g.reduced_word(elem_id(i)));
  }
}

TEST(Coxeter, MultiplicationTablesAndInverse) {
  WeylGroup g(CartanDatum::from_label("A3"));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const ElemId w = elem_id(i);
    EXPECT_EQ(g.multiply(w, g.inverse(w)), g.identity());
    EXPECT_EQ(g.length(g.inverse(w)), g.length(w));
    for (int s = 0; s < g.rank(); ++s) {
      EXPECT_EQ(g.element(g.left_mul(s, w)).matrix, matmul(generator_matrix(g.datum(), s), g.element(w).matrix, g.rank()));
      EXPECT_EQ(g.left_mul(s, g.left_mul(s, w)), w);
      EXPECT_EQ(std::abs(g.length(g.right_mul(w, s)) - g.length(w)), 1);
    }
  }
}

TEST(Coxeter, BraidRelations) {
  for (const char* label : {"A3", "B3", "G2", "F4"}) {
    WeylGroup g(CartanDatum::from_label(label));
    for (int i = 0; i < g.rank(); ++i)
      for (int j = 0; j < g.rank(); ++j) {
        Word word;
        for (int k = 0; k < g.datum().coxeter_exponent(i, j); ++k) {
          word.push_back(i);
          word.push_back(j);
        }
        EXPECT_EQ(g.from_word(word), g.identity()) << label << ' ' << i << ' ' << j;
      }
  }
}

TEST(Coxeter, BruhatMatchesSubwordProperty) {
  for (const char* label : {"A3", "B2", "G2"}) {
    WeylGroup g(CartanDatum::from_label(label));
    for (std::size_t j = 0; j < g.size(); ++j) {
      const ElemId w = elem_id(j);
      const auto below = subword_products(g, w);
      for (std::size_t i = 0; i < g.size(); ++i)
        EXPECT_EQ(g.bruhat_leq(elem_id(i), w), below.contains(elem_id(i))) << label;
      EXPECT_EQ(g.lower_interval(w).size(), below.size());
    }
  }
}

TEST(Coxeter, ReducedWordsOfLongestInA2) {
  WeylGroup g(CartanDatum::from_label("A2"));
  // Brute force over all words of length 3 in two letters.
  std::vector<Word> brute;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        if (g.from_word({a, b, c}) == g.longest() && g.is_reduced({a, b, c})) brute.push_back({a, b, c});
  EXPECT_EQ(g.all_reduced_words(g.longest()), brute);
  EXPECT_EQ(g.count_reduced_words(g.longest()), 2U);
  EXPECT_EQ(WeylGroup(CartanDatum::from_label("A3")).count_reduced_words(elem_id(23)), 16U);
}

TEST(Coxeter, WordParsing) {
  WeylGroup g(CartanDatum::from_label("A2"));
  EXPECT_EQ(g.word_string(g.identity()), "e");
  EXPECT_EQ(g.word_string(g.longest()), "1.2.1");
  EXPECT_EQ(g.parse_reduced("2.1.2"), g.longest());
  EXPECT_EQ(g.parse_reduced("e"), g.identity());
  EXPECT_THROW(g.parse_reduced("1.1"), NotReduced);
  EXPECT_THROW(g.parse_word("1..2"), ParseError);
  EXPECT_THROW(g.parse_word("3"), ParseError);
  EXPECT_THROW(g.parse_word("x"), ParseError);
}

TEST(Coxeter, CartanValidation) {
  EXPECT_THROW(CartanDatum::from_matrix({{2, 1}, {1, 2}}), InvalidCartan);
  EXPECT_THROW(CartanDatum::from_matrix({{2, -1}, {0, 2}}), InvalidCartan);
  EXPECT_THROW(CartanDatum::from_matrix({{2, -2}, {-2, 2}}), InvalidCartan);
  EXPECT_THROW(CartanDatum::from_matrix({{3, -1}, {-1, 2}}), InvalidCartan);
  EXPECT_THROW(CartanDatum::from_matrix({{2, -1, 0}, {-1, 2}}), InvalidCartan);
  EXPECT_THROW(CartanDatum::from_label("Q3"), InvalidCartan);
  EXPECT_THROW(CartanDatum::from_label("D3"), InvalidCartan);
  // Affine A2: valid entries, infinite group.
  const auto affine = CartanDatum::from_matrix({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
  EXPECT_THROW(WeylGroup{affine}, NonFiniteType);
}

TEST(Coxeter, TransposedCartanGivesIsomorphicGroup) {
  const auto b3 = CartanDatum::from_label("B3");
  std::vector<std::vector<int>> rows(3, std::vector<int>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rows[i][j] = b3.entry(j, i);
  WeylGroup g(b3), h(CartanDatum::from_matrix(rows));
  ASSERT_EQ(g.size(), h.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.reduced_word(elem_id(i)), h.reduced_word(elem_id(i)));
}

TEST(Coxeter, OrderCap) {
  EXPECT_THROW(WeylGroup(CartanDatum::from_label("A9")), GroupTooLarge);
  EXPECT_THROW(WeylGroup(CartanDatum::from_label("A3"), 23), GroupTooLarge);
  EXPECT_NO_THROW(WeylGroup(CartanDatum::from_label("A3"), 24));
}
