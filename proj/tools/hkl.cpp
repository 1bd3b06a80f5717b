// hkl: Kazhdan-Lusztig R- and P-polynomial tables, verification, Deodhar
// cell catalogs and benchmarks for finite Weyl groups.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "hkl/cli.hpp"

namespace {

std::vector<long long> parse_q_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    const long long q = std::stoll(item, &used);
    if (used != item.size()) throw CLI::ValidationError("--q", "not an integer: " + item);
    out.push_back(q);
  }
  return out;
}

void add_common(CLI::App* cmd, hkl::cli::RunConfig& cfg, std::string& q_text) {
  cmd->add_option("--type", cfg.type_label, "Cartan type label, e.g. A3, B2, G2");
  cmd->add_option("--cartan-file", cfg.cartan_file, "JSON file with {\"cartan\": [[...]], \"label\": ...}");
  cmd->add_option("--format", cfg.format, "Output format: csv or json")->capture_default_str();
  cmd->add_option("--out", cfg.out, "Output file (default: stdout)");
  cmd->add_option("--cache-dir", cfg.cache_dir, "Directory for the table cache");
  cmd->add_option("--max-order", cfg.max_order, "Group enumeration cap")->capture_default_str();
  cmd->add_option("--direct-cap", cfg.direct_cap, "Largest interval for direct chain enumeration")->capture_default_str();
  cmd->add_option("--q", q_text, "Comma-separated field sizes for point counts")->capture_default_str();
  cmd->add_option("--route", cfg.route, "hecke|recursion|cells (R), recursion|chain_dp|chain_direct (P)");
  cmd->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  cmd->add_option("--repeat", cfg.repeat, "Benchmark repetitions")->capture_default_str();
  cmd->add_option("--dot", cfg.dot, "Write the Bruhat interval Hasse diagram as DOT");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kazhdan-Lusztig polynomials for finite Weyl groups"};
  app.require_subcommand(1);
  hkl::cli::RunConfig cfg;
  std::string q_text = "2,3,5,7";

  auto* table = app.add_subcommand("table", "Write the R or P table of a group");
  table->add_option("kind", cfg.kind, "R or P")->required()->check(CLI::IsMember({"R", "P"}));
  add_common(table, cfg, q_text);

  auto* verify = app.add_subcommand("verify", "Cross-validate every route and invariant");
  verify->add_option("--suite", cfg.suites, "Suites to run (repeatable); default all")->delimiter(',');
  add_common(verify, cfg, q_text);

  auto* cells = app.add_subcommand("cells", "Deodhar cell catalog over a reduced word");
  cells->add_option("--word", cfg.word, "Reduced word, one-based and dot-separated, e.g. 1.2.1")->required();
  add_common(cells, cfg, q_text);

  auto* bench = app.add_subcommand("bench", "Time table construction per route");
  add_common(bench, cfg, q_text);

  try {
    app.parse(argc, argv);
    cfg.q_values = parse_q_list(q_text);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hkl::cli::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hkl::cli::kUsageError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return hkl::cli::run(cfg);
}
