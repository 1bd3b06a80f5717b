#pragma once

/**
 * @file cli.hpp
 * @brief Command implementations behind the `hkl` executable.
 *
 * Every command takes a RunConfig plus output/diagnostic streams and returns
 * an exit code: 0 success, 1 mathematical validation failure, 2 usage or
 * configuration error. Primary output goes to RunConfig::out when set,
 * otherwise to the output stream; timings and notes go to the diagnostic
 * stream so that primary output is deterministic.
 */

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hkl/cache.hpp"
#include "hkl/coxeter.hpp"
#include "hkl/deodhar.hpp"
#include "hkl/klcore.hpp"
#include "hkl/parallel.hpp"
#include "hkl/table_io.hpp"

namespace hkl::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsageError = 2 };

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string type_label;   // --type
  std::string cartan_file;  // --cartan-file
  std::string command;      // table | verify | cells | bench
  std::string kind = "P";   // table: R | P
  std::string format = "csv";
  std::string out;
  std::string cache_dir;
  std::size_t max_order = kDefaultMaxOrder;
  std::size_t direct_cap = kDefaultDirectCap;
  std::vector<long long> q_values{2, 3, 5, 7};
  std::string route;  // empty: command default
  unsigned workers = 1;
  int repeat = 1;
  std::string dot;   // cells: Hasse diagram output path
  std::string word;  // cells: reduced word of w
  std::vector<std::string> suites;  // verify: empty runs all
};

inline void check_config(const RunConfig& cfg) {
  if (cfg.type_label.empty() == cfg.cartan_file.empty()) throw ConfigError("give exactly one of --type or --cartan-file");
  if (cfg.max_order == 0 || cfg.direct_cap == 0 || cfg.workers == 0 || cfg.repeat <= 0)
    throw ConfigError("caps, worker count and repeat count must be positive");
  for (long long q : cfg.q_values)
    if (q < 2) throw ConfigError("--q values must be at least 2");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format must be csv or json");
}

/// Cartan file: {"label": "B2" (optional), "cartan": [[2,-1],[-2,2]]}.
inline CartanDatum load_datum(const RunConfig& cfg) {
  if (!cfg.type_label.empty()) return CartanDatum::from_label(cfg.type_label);
  std::ifstream in(cfg.cartan_file);
  if (!in) throw ConfigError("cannot open Cartan file " + cfg.cartan_file);
  try {
    const json doc = json::parse(in);
    return CartanDatum::from_matrix(doc.at("cartan").get<std::vector<std::vector<int>>>(), doc.value("label", std::string{}));
  } catch (const json::exception& e) {
    throw ConfigError("malformed Cartan file " + cfg.cartan_file + ": " + e.what());
  }
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file) throw ConfigError("cannot write " + cfg.out);
}

inline std::string render_table(const PolyTable& table, std::string_view format) {
  return format == "json" ? to_json_text(table_to_json(table)) : to_csv(table);
}

// ---------------------------------------------------------------------------
// table

inline Route default_route(std::string_view kind) { return kind == "R" ? Route::hecke : Route::chain_dp; }

inline Route resolve_route(const RunConfig& cfg) {
  if (cfg.kind != "R" && cfg.kind != "P") throw ConfigError("table kind must be R or P");
  if (cfg.route.empty()) return default_route(cfg.kind);
  const auto r = parse_route(cfg.route);
  const bool ok = r && (cfg.kind == "R" ? (*r == Route::hecke || *r == Route::recursion || *r == Route::cells)
                                        : (*r == Route::recursion || *r == Route::chain_dp || *r == Route::chain_direct));
  if (!ok) throw ConfigError("route '" + cfg.route + "' is not available for " + cfg.kind + " tables");
  return *r;
}

/// One row per comparable pair, ordered by w then v. With cross_check the
/// default routes are compared against the recursion pair by pair.
inline PolyTable build_table(const KLEngine& engine, std::string_view kind, Route route, unsigned workers,
                             bool cross_check) {
  const WeylGroup& g = engine.group();
  engine.lower(g.identity());
  std::vector<std::vector<TableRow>> columns(g.size());
  parallel_for(g.size(), workers, [&](std::size_t i) {
    const ElemId w = elem_id(i);
    for (ElemId v : engine.lower(w)) {
      HalfLaurent poly = kind == "R" ? engine.r_poly(route, v, w) : engine.p_poly(route, v, w);
      if (cross_check) {
        const HalfLaurent ref = kind == "R" ? engine.r_recursive(v, w) : engine.p_recursive(v, w);
        if (poly != ref)
          throw ValidationFailure(std::string(kind) + "(" + g.word_string(v) + ", " + g.word_string(w) + "): " +
                                  std::string(route_name(route)) + " gives " + poly.to_string() + ", recursion gives " +
                                  ref.to_string());
      }
      columns[i].push_back(TableRow{g.word_string(w), g.word_string(v), g.length(w), g.length(v), std::move(poly)});
    }
  });
  PolyTable table{g.datum().display_name(), std::string(kind), std::string(route_name(route)), {}};
  for (auto& c : columns)
    for (auto& r : c) table.rows.push_back(std::move(r));
  return table;
}

/// A cached table is only used if its row keys are exactly the comparable
/// pairs of the group and every value is an integer polynomial.
inline bool table_matches_group(const KLEngine& engine, const PolyTable& table) {
  const WeylGroup& g = engine.group();
  if (table.type != g.datum().display_name()) return false;
  std::size_t k = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const ElemId w = elem_id(i);
    for (ElemId v : engine.lower(w)) {
      if (k >= table.rows.size()) return false;
      const TableRow& r = table.rows[k++];
      if (r.w != g.word_string(w) || r.v != g.word_string(v) || r.len_w != g.length(w) || r.len_v != g.length(v) ||
          !r.poly.is_polynomial() || (v == w && r.poly != HalfLaurent(1)))
        return false;
    }
  }
  return k == table.rows.size();
}

inline int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Route route = resolve_route(cfg);
  const WeylGroup group(load_datum(cfg), cfg.max_order);
  const KLEngine engine(group, EngineOptions{cfg.direct_cap});

  std::optional<PolyTable> table;
  std::optional<TableCache> cache;
  if (!cfg.cache_dir.empty()) {
    cache.emplace(cfg.cache_dir);
    table = cache->load(group.datum(), cfg.kind, route_name(route));
    if (table && !table_matches_group(engine, *table)) {
      err << "cache: discarding inconsistent entry " << cache->path_for(group.datum(), cfg.kind, route_name(route)) << '\n';
      table.reset();
    }
    err << "cache: " << (table ? "hit" : "miss") << '\n';
  }
  if (!table) {
    const bool cross_check = cfg.route.empty();
    table = build_table(engine, cfg.kind, route, cfg.workers, cross_check);
    if (cache) cache->store(group.datum(), *table);
  }
  emit(cfg, render_table(*table, cfg.format), out);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

inline json report_to_json(const ValidationReport& report, const ValidationOptions& opts) {
  json suites = json::array();
  for (const auto& s : report.suites)
    suites.push_back({{"name", s.name}, {"checked", s.checked}, {"skipped", s.skipped}, {"passed", s.passed()}});
  json failure = nullptr;
  if (const SuiteResult* bad = report.first_failure())
    failure = {{"suite", bad->name}, {"v", bad->failure->v}, {"w", bad->failure->w}, {"detail", bad->failure->detail}};
  return {{"type", report.type},
          {"group_order", report.group_order},
          {"comparable_pairs", report.comparable_pairs},
          {"nontrivial_p", report.nontrivial_p},
          {"q_values", opts.q_values},
          {"direct_cap", opts.direct_cap},
          {"passed", report.passed()},
          {"suites", std::move(suites)},
          {"first_failure", std::move(failure)}};
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ValidationOptions opts;
  opts.q_values = cfg.q_values;
  opts.direct_cap = cfg.direct_cap;
  opts.workers = cfg.workers;
  for (const auto& name : cfg.suites) {
    if (std::find(suite::all().begin(), suite::all().end(), name) == suite::all().end())
      throw ConfigError("unknown suite '" + name + "'");
    opts.suites.insert(name);
  }
  const WeylGroup group(load_datum(cfg), cfg.max_order);
  const KLEngine engine(group, EngineOptions{cfg.direct_cap});
  const ValidationReport report = cross_validate(engine, opts);
  for (const auto& s : report.suites)
    err << "verify: " << s.name << " " << (s.passed() ? "pass" : "FAIL") << " checked=" << s.checked
        << " skipped=" << s.skipped << " time=" << s.seconds << "s\n";
  emit(cfg, to_json_text(report_to_json(report, opts)), out);
  return report.passed() ? kOk : kValidationFailed;
}

// ---------------------------------------------------------------------------
// cells

inline std::vector<int> one_based(const std::vector<int>& positions) {
  std::vector<int> out;
  for (int p : positions) out.push_back(p + 1);
  return out;
}

inline std::string hasse_dot(const WeylGroup& g, ElemId w) {
  const auto nodes = g.lower_interval(w);
  std::ostringstream dot;
  dot << "digraph bruhat {\n  rankdir=BT;\n";
  for (ElemId y : nodes) dot << "  \"" << g.word_string(y) << "\";\n";
  for (ElemId y : nodes)
    for (ElemId z : nodes)
      if (g.length(z) == g.length(y) + 1 && g.bruhat_leq(y, z))
        dot << "  \"" << g.word_string(y) << "\" -> \"" << g.word_string(z) << "\";\n";
  dot << "}\n";
  return dot.str();
}

inline int cmd_cells(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  const WeylGroup group(load_datum(cfg), cfg.max_order);
  const KLEngine engine(group);
  const ElemId w = group.parse_reduced(cfg.word);
  const Word word = group.parse_word(cfg.word);
  const auto catalog = cell_catalog(group, w, word);
  const std::string word_text = WeylGroup::format_word(word);

  json masks = json::array();
  std::size_t empty = 0;
  for (const auto& cell : catalog) {
    std::string bits;
    for (bool b : cell.gamma.mask) bits += b ? '1' : '0';
    json shape = nullptr;
    if (cell.shape)
      shape = {{"affine_dim", cell.shape->affine_dim}, {"torus_dim", cell.shape->torus_dim}};
    else
      ++empty;
    masks.push_back({{"word", word_text},
                     {"mask", bits},
                     {"endpoint", group.word_string(cell.endpoint)},
                     {"I", one_based(cell.I)},
                     {"J", one_based(cell.J)},
                     {"shape", shape}});
  }

  const auto from_cells = r_polys_from_catalog(catalog);
  json summary = json::array();
  bool all_match = true;
  for (ElemId v : engine.lower(w)) {
    auto it = from_cells.find(v);
    const HalfLaurent cells = it == from_cells.end() ? HalfLaurent{} : it->second;
    const HalfLaurent table = engine.r_hecke(v, w);
    const bool match = cells == table;
    all_match = all_match && match;
    summary.push_back({{"v", group.word_string(v)},
                       {"cells", std::count_if(catalog.begin(), catalog.end(), [&](const CellDescriptor& c) { return c.shape && c.endpoint == v; })},
                       {"poly", poly_to_json(cells)},
                       {"poly_text", cells.to_string()},
                       {"r_table", poly_to_json(table)},
                       {"matches", match}});
  }

  const json doc = {{"type", group.datum().display_name()},
                    {"w", group.word_string(w)},
                    {"word", word_text},
                    {"mask_count", catalog.size()},
                    {"empty_count", empty},
                    {"masks", std::move(masks)},
                    {"summary", std::move(summary)},
                    {"all_match", all_match}};
  emit(cfg, to_json_text(doc), out);
  if (!cfg.dot.empty()) {
    std::ofstream dot(cfg.dot, std::ios::binary | std::ios::trunc);
    dot << hasse_dot(group, w);
    if (!dot) throw ConfigError("cannot write " + cfg.dot);
  }
  return all_match ? kOk : kValidationFailed;
}

// ---------------------------------------------------------------------------
// bench

inline json stats_json(const CacheStats& s) {
  return {{"hits", s.hits}, {"misses", s.misses}, {"hit_rate", s.hit_rate()}};
}

inline int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  const CartanDatum datum = load_datum(cfg);
  struct Plan {
    std::string kind;
    Route route;
  };
  const std::vector<Plan> plans{{"R", Route::hecke},     {"R", Route::recursion}, {"R", Route::cells},
                                {"P", Route::recursion}, {"P", Route::chain_dp},  {"P", Route::chain_direct}};
  json rows = json::array();
  for (const auto& plan : plans) {
    json samples = json::array();
    std::size_t pairs = 0, skipped = 0;
    json caches;
    for (int k = 0; k < cfg.repeat; ++k) {
      const WeylGroup group(datum, cfg.max_order);
      const KLEngine engine(group, EngineOptions{cfg.direct_cap});
      pairs = skipped = 0;
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t i = 0; i < group.size(); ++i) {
        const ElemId w = elem_id(i);
        for (ElemId v : engine.lower(w)) {
          if (plan.route == Route::chain_direct && v != w && group.interval(v, w).size() > cfg.direct_cap) {
            ++skipped;
            continue;
          }
          if (plan.kind == "R")
            (void)engine.r_poly(plan.route, v, w);
          else
            (void)engine.p_poly(plan.route, v, w);
          ++pairs;
        }
      }
      samples.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
      const auto st = engine.stats();
      caches = {{"bruhat", stats_json(st.bruhat)},
                {"r_recursion", stats_json(st.r_recursion)},
                {"p_recursion", stats_json(st.p_recursion)},
                {"chain_dp", stats_json(st.chain_dp)},
                {"hecke_inverse", stats_json(st.hecke_inverse)}};
    }
    rows.push_back({{"kind", plan.kind},
                    {"route", route_name(plan.route)},
                    {"pairs", pairs},
                    {"skipped", skipped},
                    {"samples_ms", std::move(samples)},
                    {"caches", std::move(caches)}});
  }
  const json doc = {{"type", datum.display_name()}, {"repeat", cfg.repeat}, {"direct_cap", cfg.direct_cap}, {"routes", std::move(rows)}};
  emit(cfg, to_json_text(doc), out);
  return kOk;
}

// ---------------------------------------------------------------------------

/// Dispatches on cfg.command and maps exceptions to exit codes.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    check_config(cfg);
    if (cfg.command == "table") return cmd_table(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "cells") return cmd_cells(cfg, out, err);
    if (cfg.command == "bench") return cmd_bench(cfg, out, err);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ValidationFailure& e) {
    err << "validation failure: " << e.what() << '\n';
    return kValidationFailed;
  } catch (const NonPolynomialR& e) {
    err << "validation failure: " << e.what() << '\n';
    return kValidationFailed;
  } catch (const NegativeCoefficient& e) {
    err << "validation failure: " << e.what() << '\n';
    return kValidationFailed;
  } catch (const GroupTooLarge& e) {
    err << "GroupTooLarge: " << e.what() << '\n';
    return kUsageError;
  } catch (const NotReduced& e) {
    err << "NotReduced: " << e.what() << '\n';
    return kUsageError;
  } catch (const IntervalTooLarge& e) {
    err << "IntervalTooLarge: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace hkl::cli
