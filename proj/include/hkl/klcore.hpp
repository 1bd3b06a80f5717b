#pragma once

/**
 * @file klcore.hpp
 * @brief R- and P-polynomial engines and their cross-validation.
 *
 * R routes:
 *   - hecke:     coefficients of T_w^{-1};
 *   - recursion: R_{v,w} = R_{sv,sw} if sv < v, else (t-1) R_{v,sw} + t R_{sv,sw};
 *   - cells:     point counts of Deodhar pieces.
 *
 * P routes:
 *   - recursion:    P_{v,w} = -tau_{<= L-1}( sum_{v<y<=w} R_{v,y} P_{y,w} ),
 *                   L = l(w) - l(v), read off the defining relation
 *                   t^L P_{v,w}(1/t) = sum_{v<=y<=w} R_{v,y} P_{y,w};
 *   - chain_direct: the nested-truncation sum over Bruhat chains
 *                   v = v_1 < ... < v_r < w of
 *                     (-1)^r R_{v_1,v_2} tau_{<= l(w)-l(v_2)}( R_{v_2,v_3} ...
 *                       tau_{<= l(w)-l(v_r)}( R_{v_r,w} ) ... ),
 *                   wrapped in tau_{<= L-1}. The r = 1 term has no inner
 *                   truncation; one at l(w)-l(v) would be absorbed by the
 *                   outer, finer bound anyway;
 *   - chain_dp:     the same sum regrouped by its second element,
 *                     M(y) = tau_{<= l(w)-l(y)}( R_{y,w} - sum_{y<z<w} R_{y,z} M(z) ),
 *                     P_{v,w} = -tau_{<= L-1}( R_{v,w} - sum_{v<z<w} R_{v,z} M(z) ).
 *
 * Every tau bound above is a half-exponent index (see hkl::truncate).
 */

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hkl/coxeter.hpp"
#include "hkl/deodhar.hpp"
#include "hkl/hecke.hpp"
#include "hkl/laurent.hpp"
#include "hkl/memo.hpp"
#include "hkl/parallel.hpp"

namespace hkl {

inline constexpr std::size_t kDefaultDirectCap = 14;
inline constexpr std::uint64_t kDefaultReducedWordCap = 64;

/// How a length gap in the chain formula turns into a truncation bound.
/// half_exponent is the correct reading. integer_degree (keep t^j with
/// j <= gap) is kept only as a negative control; it breaks agreement with
/// the recursion already in A2.
enum class TruncationGrading { half_exponent, integer_degree };

/// The one place where a length gap becomes a bound for hkl::truncate.
constexpr int tau_bound(int length_gap, TruncationGrading grading = TruncationGrading::half_exponent) {
  return grading == TruncationGrading::half_exponent ? length_gap : 2 * length_gap;
}

enum class Route { hecke, recursion, cells, chain_direct, chain_dp };

constexpr std::string_view route_name(Route r) {
  switch (r) {
    case Route::hecke: return "hecke";
    case Route::recursion: return "recursion";
    case Route::cells: return "cells";
    case Route::chain_direct: return "chain_direct";
    case Route::chain_dp: return "chain_dp";
  }
  return "?";
}

inline std::optional<Route> parse_route(std::string_view name) {
  for (Route r : {Route::hecke, Route::recursion, Route::cells, Route::chain_direct, Route::chain_dp})
    if (route_name(r) == name) return r;
  return std::nullopt;
}

struct EngineOptions {
  std::size_t direct_cap = kDefaultDirectCap;  // max interval size for chain_direct
  TruncationGrading grading = TruncationGrading::half_exponent;
};

class KLEngine {
 public:
  using PolyMap = std::map<ElemId, HalfLaurent>;

  explicit KLEngine(const WeylGroup& group, EngineOptions options = {})
      : group_(group), hecke_(group), options_(options) {}

  KLEngine(const KLEngine&) = delete;
  KLEngine& operator=(const KLEngine&) = delete;

  const WeylGroup& group() const noexcept { return group_; }
  const HeckeAlgebra& hecke() const noexcept { return hecke_; }
  const EngineOptions& options() const noexcept { return options_; }

  /// Lower Bruhat interval [e, w] in index order, computed once per group.
  const std::vector<ElemId>& lower(ElemId w) const {
    std::call_once(lower_once_, [this] {
      lower_.resize(group_.size());
      for (std::size_t i = 0; i < group_.size(); ++i) lower_[i] = group_.lower_interval(elem_id(i));
    });
    return lower_[index_of(w)];
  }

  std::size_t comparable_pair_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < group_.size(); ++i) n += lower(elem_id(i)).size();
    return n;
  }

  // ---- R routes ----------------------------------------------------------

  HalfLaurent r_recursive(ElemId v, ElemId w) const {
    if (v == w) return 1;
    if (!group_.bruhat_leq(v, w)) return {};
    const auto key = pair_key(v, w);
    if (auto hit = r_memo_.find(key)) return std::move(*hit);
    const int s = group_.reduced_word(w).front();
    const ElemId sw = group_.left_mul(s, w);
    const ElemId sv = group_.left_mul(s, v);
    HalfLaurent r;
    if (group_.length(sv) < group_.length(v))
      r = r_recursive(sv, sw);
    else
      r = (HalfLaurent::t() - 1) * r_recursive(v, sw) + HalfLaurent::t() * r_recursive(sv, sw);
    return r_memo_.insert(key, std::move(r));
  }

  /// All R_{v,w}, v <= w, from the inverse of T_w.
  std::shared_ptr<const PolyMap> r_hecke_column(ElemId w) const {
    return hecke_memo_.get_or_compute(w, [&] { return std::make_shared<const PolyMap>(hecke_.extract_R(w)); });
  }

  /// All R_{v,w} from the Deodhar catalog over the ShortLex word of w.
  std::shared_ptr<const PolyMap> r_cells_column(ElemId w) const {
    return cells_memo_.get_or_compute(w, [&] {
      return std::make_shared<const PolyMap>(r_polys_from_catalog(cell_catalog(group_, w, group_.reduced_word(w))));
    });
  }

  HalfLaurent r_hecke(ElemId v, ElemId w) const { return lookup(*r_hecke_column(w), v); }
  HalfLaurent r_cells(ElemId v, ElemId w) const { return lookup(*r_cells_column(w), v); }

  HalfLaurent r_poly(Route route, ElemId v, ElemId w) const {
    switch (route) {
      case Route::hecke: return r_hecke(v, w);
      case Route::cells: return r_cells(v, w);
      default: return r_recursive(v, w);
    }
  }

  // ---- P routes ----------------------------------------------------------

  /// Throws NotComparable unless v <= w.
  HalfLaurent p_recursive(ElemId v, ElemId w) const {
    require_leq(v, w);
    if (v == w) return 1;
    const auto key = pair_key(v, w);
    if (auto hit = p_memo_.find(key)) return std::move(*hit);
    HalfLaurent sum;
    for (ElemId y : group_.interval(v, w))
      if (y != v) sum += r_recursive(v, y) * p_recursive(y, w);
    const int gap = group_.length(w) - group_.length(v);
    return p_memo_.insert(key, -truncate(sum, gap - 1));
  }

  /// Chain formula, dynamic-programming form. The diagonal returns
  /// P_{w,w} = 1. Throws NotComparable.
  HalfLaurent p_chain_dp(ElemId v, ElemId w) const {
    require_leq(v, w);
    if (v == w) return 1;
    const int gap = group_.length(w) - group_.length(v);
    return -truncate(chain_inner(v, w), tau_bound(gap - 1, options_.grading));
  }

  /// Chain formula by explicit enumeration of chains. Throws
  /// IntervalTooLarge when [v, w] exceeds the direct cap.
  HalfLaurent p_chain_direct(ElemId v, ElemId w) const {
    require_leq(v, w);
    if (v == w) return 1;
    const std::vector<ElemId> closed = group_.interval(v, w);
    if (closed.size() > options_.direct_cap)
      throw IntervalTooLarge("interval [" + group_.word_string(v) + ", " + group_.word_string(w) + "] has " +
                             std::to_string(closed.size()) + " elements, cap is " + std::to_string(options_.direct_cap));
    const std::vector<ElemId> open(closed.begin() + 1, closed.end() - 1);
    const int lw = group_.length(w);
    auto bound = [&](ElemId y) { return tau_bound(lw - group_.length(y), options_.grading); };

    HalfLaurent total;
    std::vector<ElemId> chain{v};
    auto close_chain = [&] {
      HalfLaurent inner = r_recursive(chain.back(), w);
      for (std::size_t k = chain.size() - 1; k-- > 0;)
        inner = r_recursive(chain[k], chain[k + 1]) * truncate(inner, bound(chain[k + 1]));
      total += chain.size() % 2 == 0 ? inner : -inner;
    };
    auto extend = [&](auto&& self, std::size_t from) -> void {
      close_chain();
      for (std::size_t i = from; i < open.size(); ++i) {
        const ElemId z = open[i];
        if (group_.length(z) <= group_.length(chain.back()) || !group_.bruhat_leq(chain.back(), z)) continue;
        chain.push_back(z);
        self(self, i + 1);
        chain.pop_back();
      }
    };
    extend(extend, 0);
    return truncate(total, tau_bound(lw - group_.length(v) - 1, options_.grading));
  }

  HalfLaurent p_poly(Route route, ElemId v, ElemId w) const {
    switch (route) {
      case Route::chain_dp: return p_chain_dp(v, w);
      case Route::chain_direct: return p_chain_direct(v, w);
      default: return p_recursive(v, w);
    }
  }

  /// Stalk dimensions of the intersection complex: degree 2i gets the
  /// coefficient of t^i in P_{v,w}. Throws NegativeCoefficient.
  std::map<int, BigInt> ic_stalk_dims(ElemId v, ElemId w) const {
    const HalfLaurent p = p_recursive(v, w);
    std::map<int, BigInt> dims;
    for (const auto& [i, c] : p.terms()) {
      if (i % 2 != 0 || i < 0)
        throw NonIntegralExponent("P(" + group_.word_string(v) + ", " + group_.word_string(w) + ") = " + p.to_string());
      if (c < 0)
        throw NegativeCoefficient("P(" + group_.word_string(v) + ", " + group_.word_string(w) + ") = " + p.to_string() +
                                  " has a negative coefficient");
      dims.emplace(i, c);  // half-exponent i of t^{i/2} is cohomological degree i
    }
    return dims;
  }

  struct Stats {
    CacheStats bruhat, r_recursion, p_recursion, chain_dp, hecke_inverse;
  };

  Stats stats() const {
    return {group_.bruhat_stats(), r_memo_.stats(), p_memo_.stats(), m_memo_.stats(), hecke_.inverse_stats()};
  }

 private:
  static HalfLaurent lookup(const PolyMap& m, ElemId v) {
    auto it = m.find(v);
    return it == m.end() ? HalfLaurent{} : it->second;
  }

  void require_leq(ElemId v, ElemId w) const {
    if (!group_.bruhat_leq(v, w))
      throw NotComparable(group_.word_string(v) + " is not below " + group_.word_string(w) + " in Bruhat order");
  }

  // R_{y,w} - sum_{y<z<w} R_{y,z} M(z).
  HalfLaurent chain_inner(ElemId y, ElemId w) const {
    HalfLaurent inner = r_recursive(y, w);
    for (ElemId z : group_.interval(y, w))
      if (z != y && z != w) inner -= r_recursive(y, z) * chain_m(z, w);
    return inner;
  }

  HalfLaurent chain_m(ElemId y, ElemId w) const {
    const auto key = pair_key(y, w);
    if (auto hit = m_memo_.find(key)) return std::move(*hit);
    const int gap = group_.length(w) - group_.length(y);
    return m_memo_.insert(key, truncate(chain_inner(y, w), tau_bound(gap, options_.grading)));
  }

  const WeylGroup& group_;
  HeckeAlgebra hecke_;
  EngineOptions options_;

  mutable std::once_flag lower_once_;
  mutable std::vector<std::vector<ElemId>> lower_;
  mutable MemoCache<std::uint64_t, HalfLaurent> r_memo_;
  mutable MemoCache<std::uint64_t, HalfLaurent> p_memo_;
  mutable MemoCache<std::uint64_t, HalfLaurent> m_memo_;
  mutable MemoCache<ElemId, std::shared_ptr<const PolyMap>> hecke_memo_;
  mutable MemoCache<ElemId, std::shared_ptr<const PolyMap>> cells_memo_;
};

// ---------------------------------------------------------------------------
// Cross-validation

namespace suite {
inline constexpr std::string_view r_agreement = "r-agreement";
inline constexpr std::string_view p_agreement = "p-agreement";
inline constexpr std::string_view chain_direct = "chain-direct";
inline constexpr std::string_view point_count = "point-count";
inline constexpr std::string_view invariants = "invariants";
inline constexpr std::string_view hecke_inverse = "hecke-inverse";

inline const std::vector<std::string_view>& all() {
  static const std::vector<std::string_view> names{r_agreement, p_agreement, chain_direct,
                                                   point_count, invariants, hecke_inverse};
  return names;
}
}  // namespace suite

struct ValidationOptions {
  std::vector<long long> q_values{2, 3, 5, 7};
  std::size_t direct_cap = kDefaultDirectCap;
  std::uint64_t reduced_word_cap = kDefaultReducedWordCap;
  std::set<std::string, std::less<>> suites;  // empty: run all
  unsigned workers = 1;

  bool wants(std::string_view name) const { return suites.empty() || suites.contains(name); }
};

struct ValidationFailureInfo {
  std::string v;
  std::string w;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::optional<ValidationFailureInfo> failure;
  double seconds = 0;

  bool passed() const { return !failure.has_value(); }
};

struct ValidationReport {
  std::string type;
  std::size_t group_order = 0;
  std::size_t comparable_pairs = 0;
  std::size_t nontrivial_p = 0;  // pairs with P != 1 (only when p-agreement ran)
  std::vector<SuiteResult> suites;

  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
  }
  const SuiteResult* first_failure() const {
    for (const auto& s : suites)
      if (!s.passed()) return &s;
    return nullptr;
  }
};

namespace detail {

// Per-w accumulator; merged in w order so reports do not depend on workers.
struct ColumnOutcome {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t nontrivial = 0;
  std::optional<ValidationFailureInfo> failure;
};

template <class Check>
SuiteResult run_suite(std::string_view name, const KLEngine& engine, unsigned workers, std::size_t* nontrivial,
                      Check&& check) {
  const WeylGroup& g = engine.group();
  const auto start = std::chrono::steady_clock::now();
  std::vector<ColumnOutcome> columns(g.size());
  parallel_for(g.size(), workers, [&](std::size_t i) {
    ColumnOutcome& out = columns[i];
    try {
      check(elem_id(i), out);
    } catch (const Error& e) {
      if (!out.failure) out.failure = ValidationFailureInfo{"", g.word_string(elem_id(i)), e.what()};
    }
  });
  SuiteResult result;
  result.name = std::string(name);
  for (const auto& c : columns) {
    result.checked += c.checked;
    result.skipped += c.skipped;
    if (nontrivial) *nontrivial += c.nontrivial;
    if (c.failure && !result.failure) result.failure = c.failure;
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

inline void fail(ColumnOutcome& out, const WeylGroup& g, ElemId v, ElemId w, std::string detail) {
  if (!out.failure) out.failure = ValidationFailureInfo{g.word_string(v), g.word_string(w), std::move(detail)};
}

}  // namespace detail

/// Runs the selected suites over every comparable pair of the engine's
/// group. Never throws on a mathematical mismatch; see require_valid.
inline ValidationReport cross_validate(const KLEngine& engine, const ValidationOptions& opts = {}) {
  const WeylGroup& g = engine.group();
  ValidationReport report;
  report.type = g.datum().display_name();
  report.group_order = g.size();
  report.comparable_pairs = engine.comparable_pair_count();
  const HalfLaurent one = 1;
  using detail::ColumnOutcome;
  using detail::fail;

  if (opts.wants(suite::r_agreement)) {
    report.suites.push_back(detail::run_suite(suite::r_agreement, engine, opts.workers, nullptr, [&](ElemId w, ColumnOutcome& out) {
      const auto& below = engine.lower(w);
      const auto hecke = engine.r_hecke_column(w);
      if (hecke->size() != below.size()) fail(out, g, w, w, "support of T_w^{-1} differs from [e, w]");
      std::vector<Word> words;
      if (g.count_reduced_words(w) <= opts.reduced_word_cap)
        words = g.all_reduced_words(w);
      else
        words.push_back(g.reduced_word(w));
      std::vector<KLEngine::PolyMap> from_cells;
      for (const Word& word : words) from_cells.push_back(r_polys_from_catalog(cell_catalog(g, w, word)));
      for (ElemId v : below) {
        const HalfLaurent rec = engine.r_recursive(v, w);
        const HalfLaurent hk = engine.r_hecke(v, w);
        if (rec != hk) fail(out, g, v, w, "hecke " + hk.to_string() + " != recursion " + rec.to_string());
        for (std::size_t k = 0; k < words.size(); ++k) {
          auto it = from_cells[k].find(v);
          const HalfLaurent cells = it == from_cells[k].end() ? HalfLaurent{} : it->second;
          if (cells != rec)
            fail(out, g, v, w, "cells over " + WeylGroup::format_word(words[k]) + " " + cells.to_string() +
                                   " != recursion " + rec.to_string());
        }
        ++out.checked;
      }
      for (const auto& cells : from_cells)
        if (cells.size() != below.size()) fail(out, g, w, w, "cell endpoints differ from [e, w]");
    }));
  }

  if (opts.wants(suite::p_agreement)) {
    report.suites.push_back(detail::run_suite(suite::p_agreement, engine, opts.workers, &report.nontrivial_p, [&](ElemId w, ColumnOutcome& out) {
      for (ElemId v : engine.lower(w)) {
        const HalfLaurent rec = engine.p_recursive(v, w);
        const HalfLaurent dp = engine.p_chain_dp(v, w);
        if (rec != dp) fail(out, g, v, w, "chain_dp " + dp.to_string() + " != recursion " + rec.to_string());
        if (rec != one) ++out.nontrivial;
        ++out.checked;
      }
    }));
  }

  if (opts.wants(suite::chain_direct)) {
    KLEngine capped(g, EngineOptions{opts.direct_cap, engine.options().grading});
    report.suites.push_back(detail::run_suite(suite::chain_direct, engine, opts.workers, nullptr, [&](ElemId w, ColumnOutcome& out) {
      for (ElemId v : engine.lower(w)) {
        if (v == w) continue;
        if (g.interval(v, w).size() > opts.direct_cap) {
          ++out.skipped;
          continue;
        }
        const HalfLaurent direct = capped.p_chain_direct(v, w);
        const HalfLaurent dp = engine.p_chain_dp(v, w);
        if (direct != dp) fail(out, g, v, w, "chain_direct " + direct.to_string() + " != chain_dp " + dp.to_string());
        ++out.checked;
      }
    }));
  }

  if (opts.wants(suite::point_count)) {
    report.suites.push_back(detail::run_suite(suite::point_count, engine, opts.workers, nullptr, [&](ElemId w, ColumnOutcome& out) {
      HalfLaurent paving;
      for (ElemId v : engine.lower(w)) paving += engine.r_recursive(v, w);
      for (long long q : opts.q_values) {
        const PointCount pc = point_count_identity(g, w, g.reduced_word(w), q);
        if (pc.total != pc.expected)
          fail(out, g, g.identity(), w, "cells give " + pc.total.str() + " points over F_" + std::to_string(q) +
                                            ", expected " + pc.expected.str());
        const Rational value = evaluate(paving, q);
        if (value != Rational(pc.expected))
          fail(out, g, g.identity(), w, "sum of R at q=" + std::to_string(q) + " is " + value.str());
        ++out.checked;
      }
    }));
  }

  if (opts.wants(suite::invariants)) {
    report.suites.push_back(detail::run_suite(suite::invariants, engine, opts.workers, nullptr, [&](ElemId w, ColumnOutcome& out) {
      const int lw = g.length(w);
      HalfLaurent paving;
      for (ElemId v : engine.lower(w)) {
        const int gap = lw - g.length(v);
        const HalfLaurent r = engine.r_recursive(v, w);
        paving += r;
        if (!r.is_polynomial() || r.max_index() != 2 * gap || r.coefficient(2 * gap) != 1 ||
            r.coefficient(0) != (gap % 2 == 0 ? 1 : -1))
          fail(out, g, v, w, "R = " + r.to_string() + " violates degree/leading/constant shape");
        const HalfLaurent p = engine.p_recursive(v, w);
        if (p.is_zero() || !p.is_polynomial()) {
          fail(out, g, v, w, "P = " + p.to_string() + " is not a nonzero polynomial");
          continue;
        }
        if (v != w && p.max_index() > gap - 1) fail(out, g, v, w, "P = " + p.to_string() + " violates the degree bound");
        if (p.coefficient(0) != 1) fail(out, g, v, w, "P(0) != 1 for P = " + p.to_string());
        if (gap <= 2 && p != one) fail(out, g, v, w, "short interval with P = " + p.to_string());
        engine.ic_stalk_dims(v, w);  // throws on negative or odd-degree entries
        ++out.checked;
      }
      if (paving != HalfLaurent::t_power(lw)) fail(out, g, g.identity(), w, "sum of R is " + paving.to_string());
      for (const auto& cell : cell_catalog(g, w, g.reduced_word(w))) {
        const bool contained = std::includes(cell.I.begin(), cell.I.end(), cell.J.begin(), cell.J.end());
        if (cell.empty() == contained) fail(out, g, cell.endpoint, w, "cell emptiness disagrees with J in I");
        if (cell.shape && (2 * cell.shape->affine_dim + cell.shape->torus_dim > 2 * lw || !g.bruhat_leq(cell.endpoint, w)))
          fail(out, g, cell.endpoint, w, "cell shape or endpoint out of range");
        const bool full = std::all_of(cell.gamma.mask.begin(), cell.gamma.mask.end(), [](bool b) { return b; });
        if (full && (cell.endpoint != w || !cell.shape || *cell.shape != CellShape{0, 0}))
          fail(out, g, cell.endpoint, w, "full mask is not the point cell");
      }
    }));
  }

  if (opts.wants(suite::hecke_inverse)) {
    const HeckeAlgebra& h = engine.hecke();
    report.suites.push_back(detail::run_suite(suite::hecke_inverse, engine, opts.workers, nullptr, [&](ElemId w, ColumnOutcome& out) {
      const HeckeElt product = h.mul_by_basis(h.invert_basis(w), w);
      if (product != HeckeElt::basis(g.identity())) fail(out, g, w, w, "T_w^{-1} T_w != T_e");
      const HeckeElt other = h.multiply(HeckeElt::basis(w), h.invert_basis(w));
      if (other != HeckeElt::basis(g.identity())) fail(out, g, w, w, "T_w T_w^{-1} != T_e");
      ++out.checked;
    }));
  }
  return report;
}

/// Throws ValidationFailure naming the first offending pair.
inline void require_valid(const ValidationReport& report) {
  if (const SuiteResult* bad = report.first_failure())
    throw ValidationFailure(report.type + " " + bad->name + ": pair (" + bad->failure->v + ", " + bad->failure->w +
                            "): " + bad->failure->detail);
}

}  // namespace hkl
