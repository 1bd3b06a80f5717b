#pragma once

/**
 * @file coxeter.hpp
 * @brief Finite Weyl groups from crystallographic Cartan data.
 *
 * Conventions used throughout:
 *   - generators are zero-based in code; words are rendered one-based and
 *     dot-separated ("1.2.1"), with "e" for the identity;
 *   - a simple reflection acts on the simple-root basis by
 *       s_i(alpha_j) = alpha_j - a_ij * alpha_i
 *     (row i of the Cartan matrix). The transposed convention gives an
 *     isomorphic group; nothing downstream depends on the choice;
 *   - an element is identified by its integer matrix on the simple-root
 *     basis. Group elements are numbered by (length, ShortLex word), so
 *     index order is the order used for intervals and tables.
 */

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hkl/errors.hpp"
#include "hkl/memo.hpp"

namespace hkl {

inline constexpr std::size_t kDefaultMaxOrder = 51840;  // |W(E6)|
inline constexpr std::size_t kMaxPositiveRoots = 4096;

using Word = std::vector<int>;

// ---------------------------------------------------------------------------
// Cartan data

struct CartanDatum {
  int rank = 0;
  std::vector<int> cartan;  // row-major rank x rank
  std::string label;

  int entry(int i, int j) const { return cartan[static_cast<std::size_t>(i * rank + j)]; }

  /// Validates the crystallographic conditions. Throws InvalidCartan.
  static CartanDatum from_matrix(const std::vector<std::vector<int>>& rows, std::string label = {}) {
    CartanDatum d;
    d.rank = static_cast<int>(rows.size());
    d.label = std::move(label);
    if (d.rank == 0) throw InvalidCartan("Cartan matrix is empty");
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != d.rank) throw InvalidCartan("Cartan matrix is not square");
      d.cartan.insert(d.cartan.end(), row.begin(), row.end());
    }
    for (int i = 0; i < d.rank; ++i) {
      if (d.entry(i, i) != 2) throw InvalidCartan("diagonal Cartan entries must be 2");
      for (int j = 0; j < d.rank; ++j) {
        if (i == j) continue;
        const int a = d.entry(i, j), b = d.entry(j, i);
        if (a > 0) throw InvalidCartan("off-diagonal Cartan entries must be <= 0");
        if ((a == 0) != (b == 0)) throw InvalidCartan("a_ij = 0 must imply a_ji = 0");
        if (a * b > 3) throw InvalidCartan("a_ij * a_ji must lie in {0,1,2,3}");
      }
    }
    return d;
  }

  /// Finite-type label such as "A3", "B2", "D4", "E6", "F4", "G2".
  static CartanDatum from_label(std::string_view label);

  /// Order of s_i s_j.
  int coxeter_exponent(int i, int j) const {
    if (i == j) return 1;
    switch (entry(i, j) * entry(j, i)) {
      case 0: return 2;
      case 1: return 3;
      case 2: return 4;
      default: return 6;
    }
  }

  std::string display_name() const { return label.empty() ? "custom" : label; }
};

inline CartanDatum CartanDatum::from_label(std::string_view label) {
  if (label.size() < 2) throw InvalidCartan("unknown Cartan type '" + std::string(label) + "'");
  const char family = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
  int n = 0;
  for (char ch : label.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(ch)) || n > 1000)
      throw InvalidCartan("unknown Cartan type '" + std::string(label) + "'");
    n = n * 10 + (ch - '0');
  }
  auto bad = [&] { return InvalidCartan("unsupported Cartan type '" + std::string(label) + "'"); };
  std::vector<std::vector<int>> a(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  auto link = [&](int i, int j, int aij = -1, int aji = -1) {
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = aij;
    a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = aji;
  };
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 2;
  switch (family) {
    case 'A':
      if (n < 1) throw bad();
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'B':
    case 'C':
      if (n < 2) throw bad();
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      if (family == 'B')
        link(n - 2, n - 1, -1, -2);
      else
        link(n - 2, n - 1, -2, -1);
      break;
    case 'D':
      if (n < 4) throw bad();
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case 'E':
      if (n < 6 || n > 8) throw bad();
      link(0, 2);
      link(1, 3);
      for (int i = 2; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'F':
      if (n != 4) throw bad();
      link(0, 1);
      link(1, 2, -1, -2);
      link(2, 3);
      break;
    case 'G':
      if (n != 2) throw bad();
      link(0, 1, -1, -3);
      break;
    default:
      throw bad();
  }
  std::string canonical(1, family);
  canonical += std::to_string(n);
  return from_matrix(a, canonical);
}

// ---------------------------------------------------------------------------
// Roots

struct Root {
  std::vector<int> coords;  // simple-root basis

  bool is_positive() const {
    for (int c : coords)
      if (c != 0) return c > 0;
    return false;
  }
  bool is_negative() const {
    for (int c : coords)
      if (c != 0) return c < 0;
    return false;
  }
  // All coordinates share one sign. Any root produced by a finite system is.
  bool is_sign_coherent() const {
    const bool pos = std::any_of(coords.begin(), coords.end(), [](int c) { return c > 0; });
    const bool neg = std::any_of(coords.begin(), coords.end(), [](int c) { return c < 0; });
    return !(pos && neg);
  }
  int height() const { return std::accumulate(coords.begin(), coords.end(), 0); }

  Root operator-() const {
    Root r = *this;
    for (int& c : r.coords) c = -c;
    return r;
  }
  friend bool operator==(const Root&, const Root&) = default;
  friend auto operator<=>(const Root&, const Root&) = default;
};

inline Root simple_root(int rank, int i) {
  Root r{std::vector<int>(static_cast<std::size_t>(rank), 0)};
  r.coords[static_cast<std::size_t>(i)] = 1;
  return r;
}

/// s_i(r) = r - (sum_j a_ij r_j) alpha_i.
inline Root act_on_root(const CartanDatum& datum, int i, Root r) {
  int pairing = 0;
  for (int j = 0; j < datum.rank; ++j) pairing += datum.entry(i, j) * r.coords[static_cast<std::size_t>(j)];
  r.coords[static_cast<std::size_t>(i)] -= pairing;
  return r;
}

/// Closure of the simple roots under simple reflections, positive part only.
/// Sorted by (height, coordinates). Throws NonFiniteType.
inline std::vector<Root> positive_roots(const CartanDatum& datum, std::size_t max_roots = kMaxPositiveRoots) {
  std::vector<Root> found;
  std::deque<Root> queue;
  auto seen = [&](const Root& r) { return std::find(found.begin(), found.end(), r) != found.end(); };
  for (int i = 0; i < datum.rank; ++i) {
    found.push_back(simple_root(datum.rank, i));
    queue.push_back(found.back());
  }
  while (!queue.empty()) {
    Root r = std::move(queue.front());
    queue.pop_front();
    for (int i = 0; i < datum.rank; ++i) {
      Root image = act_on_root(datum, i, r);
      if (!image.is_sign_coherent()) throw NonFiniteType("reflection produced a mixed-sign vector");
      if (!image.is_positive() || seen(image)) continue;
      if (found.size() >= max_roots) throw NonFiniteType("root system closure exceeds " + std::to_string(max_roots) + " positive roots");
      found.push_back(image);
      queue.push_back(std::move(image));
    }
  }
  std::sort(found.begin(), found.end(), [](const Root& a, const Root& b) {
    const int ha = a.height(), hb = b.height();
    return ha != hb ? ha < hb : a < b;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Elements

using Matrix = std::vector<int>;  // row-major, acts on column coordinate vectors

inline Matrix identity_matrix(int rank) {
  Matrix m(static_cast<std::size_t>(rank * rank), 0);
  for (int i = 0; i < rank; ++i) m[static_cast<std::size_t>(i * rank + i)] = 1;
  return m;
}

inline Matrix generator_matrix(const CartanDatum& datum, int i) {
  // Column j is s_i(alpha_j).
  Matrix m = identity_matrix(datum.rank);
  for (int j = 0; j < datum.rank; ++j) m[static_cast<std::size_t>(i * datum.rank + j)] -= datum.entry(i, j);
  return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b, int rank) {
  Matrix c(static_cast<std::size_t>(rank * rank), 0);
  for (int i = 0; i < rank; ++i)
    for (int k = 0; k < rank; ++k) {
      const int aik = a[static_cast<std::size_t>(i * rank + k)];
      if (aik == 0) continue;
      for (int j = 0; j < rank; ++j) c[static_cast<std::size_t>(i * rank + j)] += aik * b[static_cast<std::size_t>(k * rank + j)];
    }
  return c;
}

inline Root apply(const Matrix& m, const Root& r) {
  const int rank = static_cast<int>(r.coords.size());
  Root out{std::vector<int>(r.coords.size(), 0)};
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      out.coords[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i * rank + j)] * r.coords[static_cast<std::size_t>(j)];
  return out;
}

struct Element {
  int rank = 0;
  Matrix matrix;
  int length = 0;
  Word word;  // ShortLex-minimal reduced word, zero-based generators

  friend bool operator==(const Element& a, const Element& b) { return a.matrix == b.matrix; }
};

/// Number of positive roots sent to negative roots.
inline int inversion_count(const Matrix& m, const std::vector<Root>& positive) {
  return static_cast<int>(std::count_if(positive.begin(), positive.end(),
                                        [&](const Root& r) { return apply(m, r).is_negative(); }));
}

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int x : m) h = (h ^ static_cast<std::size_t>(static_cast<unsigned>(x))) * 1099511628211ULL;
    return h;
  }
};

enum class ElemId : std::uint32_t {};

constexpr std::size_t index_of(ElemId id) noexcept { return static_cast<std::size_t>(id); }
constexpr ElemId elem_id(std::size_t i) noexcept { return static_cast<ElemId>(i); }
constexpr std::uint64_t pair_key(ElemId v, ElemId w) noexcept {
  return (static_cast<std::uint64_t>(v) << 32U) | static_cast<std::uint64_t>(w);
}

// ---------------------------------------------------------------------------
// The group

class WeylGroup {
 public:
  explicit WeylGroup(CartanDatum datum, std::size_t max_order = kDefaultMaxOrder)
      : datum_(std::move(datum)), positive_(hkl::positive_roots(datum_)) {
    enumerate(max_order);
  }

  WeylGroup(const WeylGroup&) = delete;
  WeylGroup& operator=(const WeylGroup&) = delete;

  const CartanDatum& datum() const noexcept { return datum_; }
  int rank() const noexcept { return datum_.rank; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<Root>& positive_roots() const noexcept { return positive_; }

  const Element& element(ElemId w) const { return elements_[index_of(w)]; }
  const std::vector<Element>& elements() const noexcept { return elements_; }
  ElemId identity() const noexcept { return elem_id(0); }
  ElemId longest() const noexcept { return elem_id(elements_.size() - 1); }

  int length(ElemId w) const { return elements_[index_of(w)].length; }
  const Word& reduced_word(ElemId w) const { return elements_[index_of(w)].word; }

  ElemId left_mul(int s, ElemId w) const { return left_[static_cast<std::size_t>(s)][index_of(w)]; }
  ElemId right_mul(ElemId w, int s) const { return right_[static_cast<std::size_t>(s)][index_of(w)]; }
  ElemId inverse(ElemId w) const { return inverse_[index_of(w)]; }

  bool is_left_descent(int s, ElemId w) const { return length(left_mul(s, w)) < length(w); }
  bool is_right_descent(ElemId w, int s) const { return length(right_mul(w, s)) < length(w); }

  ElemId multiply(ElemId u, ElemId v) const {
    for (int s : reduced_word(v)) u = right_mul(u, s);
    return u;
  }

  std::optional<ElemId> find(const Matrix& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Product of an arbitrary (not necessarily reduced) word.
  ElemId from_word(const Word& word) const {
    ElemId w = identity();
    for (int s : word) {
      check_generator(s);
      w = right_mul(w, s);
    }
    return w;
  }

  bool is_reduced(const Word& word) const { return length(from_word(word)) == static_cast<int>(word.size()); }

  Root apply(ElemId w, const Root& r) const { return hkl::apply(element(w).matrix, r); }

  /// Bruhat order by the descent recursion: take a left descent s of w; if s
  /// is also a left descent of v then v <= w iff sv <= sw, else iff v <= sw.
  bool bruhat_leq(ElemId v, ElemId w) const {
    if (v == w) return true;
    const int lv = length(v), lw = length(w);
    if (lv >= lw) return false;
    if (lv == 0) return true;
    const auto key = pair_key(v, w);
    if (auto hit = bruhat_memo_.find(key)) return *hit;
    const int s = reduced_word(w).front();
    const ElemId sw = left_mul(s, w);
    const ElemId sv = left_mul(s, v);
    const bool result = length(sv) < lv ? bruhat_leq(sv, sw) : bruhat_leq(v, sw);
    return bruhat_memo_.insert(key, result);
  }

  /// {y : v <= y <= w} in index order; empty when v is not below w.
  std::vector<ElemId> interval(ElemId v, ElemId w) const {
    std::vector<ElemId> out;
    if (!bruhat_leq(v, w)) return out;
    for (std::size_t i = index_of(v); i <= index_of(w); ++i) {
      const ElemId y = elem_id(i);
      if (bruhat_leq(v, y) && bruhat_leq(y, w)) out.push_back(y);
    }
    return out;
  }

  std::vector<ElemId> lower_interval(ElemId w) const { return interval(identity(), w); }

  std::uint64_t count_reduced_words(ElemId w) const {
    if (length(w) == 0) return 1;
    if (auto hit = word_count_memo_.find(index_of(w))) return *hit;
    std::uint64_t total = 0;
    for (int s = 0; s < rank(); ++s)
      if (is_left_descent(s, w)) total += count_reduced_words(left_mul(s, w));
    return word_count_memo_.insert(index_of(w), total);
  }

  /// Every reduced word of w, lexicographically ordered, by the descent tree.
  std::vector<Word> all_reduced_words(ElemId w) const {
    std::vector<Word> out;
    Word prefix;
    std::function<void(ElemId)> walk = [&](ElemId u) {
      if (length(u) == 0) {
        out.push_back(prefix);
        return;
      }
      for (int s = 0; s < rank(); ++s) {
        if (!is_left_descent(s, u)) continue;
        prefix.push_back(s);
        walk(left_mul(s, u));
        prefix.pop_back();
      }
    };
    walk(w);
    return out;
  }

  std::string word_string(ElemId w) const { return format_word(reduced_word(w)); }

  static std::string format_word(const Word& word) {
    if (word.empty()) return "e";
    std::string out;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (k != 0) out += '.';
      out += std::to_string(word[k] + 1);
    }
    return out;
  }

  /// Parses "1.2.1" (one-based), "e" or "" into zero-based generators.
  Word parse_word(std::string_view text) const {
    Word word;
    if (text.empty() || text == "e") return word;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t dot = std::min(text.find('.', pos), text.size());
      const std::string_view token = text.substr(pos, dot - pos);
      if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("malformed word '" + std::string(text) + "'");
      const int g = std::stoi(std::string(token)) - 1;
      check_generator(g);
      word.push_back(g);
      pos = dot + 1;
    }
    return word;
  }

  /// Parses a word string and requires it to be reduced. Throws NotReduced.
  ElemId parse_reduced(std::string_view text) const {
    const Word word = parse_word(text);
    const ElemId w = from_word(word);
    if (length(w) != static_cast<int>(word.size()))
      throw NotReduced("word " + std::string(text) + " is not reduced (length " + std::to_string(length(w)) + ")");
    return w;
  }

  CacheStats bruhat_stats() const { return bruhat_memo_.stats(); }

 private:
  void check_generator(int s) const {
    if (s < 0 || s >= rank()) throw ParseError("generator index " + std::to_string(s + 1) + " out of range");
  }

  void enumerate(std::size_t max_order) {
    const int n = rank();
    std::vector<Matrix> gens;
    for (int s = 0; s < n; ++s) gens.push_back(generator_matrix(datum_, s));

    // Breadth-first search by right multiplication.
    std::vector<Matrix> found{identity_matrix(n)};
    std::unordered_map<Matrix, std::size_t, MatrixHash> seen{{found[0], 0}};
    for (std::size_t head = 0; head < found.size(); ++head) {
      for (int s = 0; s < n; ++s) {
        Matrix m = matmul(found[head], gens[static_cast<std::size_t>(s)], n);
        if (seen.contains(m)) continue;
        if (found.size() >= max_order)
          throw GroupTooLarge("group " + datum_.display_name() + " has more than " + std::to_string(max_order) + " elements");
        seen.emplace(m, found.size());
        found.push_back(std::move(m));
      }
    }

    const std::size_t order = found.size();
    std::vector<int> len(order);
    for (std::size_t i = 0; i < order; ++i) len[i] = inversion_count(found[i], positive_);

    // Left multiplication table in discovery numbering, then ShortLex words
    // by stripping the smallest left descent, shortest elements first.
    std::vector<std::vector<std::size_t>> left(static_cast<std::size_t>(n), std::vector<std::size_t>(order));
    for (int s = 0; s < n; ++s)
      for (std::size_t i = 0; i < order; ++i)
        left[static_cast<std::size_t>(s)][i] = seen.at(matmul(gens[static_cast<std::size_t>(s)], found[i], n));
    std::vector<std::size_t> by_length(order);
    std::iota(by_length.begin(), by_length.end(), 0);
    std::stable_sort(by_length.begin(), by_length.end(), [&](std::size_t a, std::size_t b) { return len[a] < len[b]; });
    std::vector<Word> words(order);
    for (std::size_t i : by_length) {
      if (len[i] == 0) continue;
      for (int s = 0; s < n; ++s) {
        const std::size_t si = left[static_cast<std::size_t>(s)][i];
        if (len[si] < len[i]) {
          words[i].push_back(s);
          words[i].insert(words[i].end(), words[si].begin(), words[si].end());
          break;
        }
      }
    }

    std::vector<std::size_t> order_by(order);
    std::iota(order_by.begin(), order_by.end(), 0);
    std::sort(order_by.begin(), order_by.end(), [&](std::size_t a, std::size_t b) {
      return len[a] != len[b] ? len[a] < len[b] : words[a] < words[b];
    });
    std::vector<std::size_t> renumber(order);
    for (std::size_t k = 0; k < order; ++k) renumber[order_by[k]] = k;

    elements_.resize(order);
    for (std::size_t k = 0; k < order; ++k) {
      const std::size_t old = order_by[k];
      elements_[k] = Element{n, std::move(found[old]), len[old], std::move(words[old])};
      index_.emplace(elements_[k].matrix, elem_id(k));
    }
    left_.assign(static_cast<std::size_t>(n), std::vector<ElemId>(order));
    right_.assign(static_cast<std::size_t>(n), std::vector<ElemId>(order));
    for (int s = 0; s < n; ++s)
      for (std::size_t k = 0; k < order; ++k) {
        left_[static_cast<std::size_t>(s)][k] = elem_id(renumber[left[static_cast<std::size_t>(s)][order_by[k]]]);
        right_[static_cast<std::size_t>(s)][k] = index_.at(matmul(elements_[k].matrix, gens[static_cast<std::size_t>(s)], n));
      }
    inverse_.resize(order);
    for (std::size_t k = 0; k < order; ++k) {
      ElemId u = identity();
      const Word& w = elements_[k].word;
      for (auto it = w.rbegin(); it != w.rend(); ++it) u = right_mul(u, *it);
      inverse_[k] = u;
    }
  }

  CartanDatum datum_;
  std::vector<Root> positive_;
  std::vector<Element> elements_;
  std::unordered_map<Matrix, ElemId, MatrixHash> index_;
  std::vector<std::vector<ElemId>> left_;
  std::vector<std::vector<ElemId>> right_;
  std::vector<ElemId> inverse_;
  mutable MemoCache<std::uint64_t, bool> bruhat_memo_;
  mutable MemoCache<std::size_t, std::uint64_t> word_count_memo_;
};

/// All elements of the group with cached lengths and words. Throws
/// GroupTooLarge above max_order.
inline std::vector<Element> enumerate_group(const CartanDatum& datum, std::size_t max_order = kDefaultMaxOrder) {
  return WeylGroup(datum, max_order).elements();
}

/// Number of positive roots inverted by the element; equals its length.
inline int length(const WeylGroup& group, const Element& w) { return inversion_count(w.matrix, group.positive_roots()); }

}  // namespace hkl
