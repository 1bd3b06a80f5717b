#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "hkl/cli.hpp"

using namespace hkl;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hkl_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PolyTable a3_table(std::string_view kind, Route route) {
  static const WeylGroup g(CartanDatum::from_label("A3"));
  const KLEngine e(g);
  return cli::build_table(e, kind, route, 1, true);
}

}  // namespace

TEST(TableIO, PolynomialJson) {
  const HalfLaurent p = HalfLaurent::parse("t^3-2t^2+2t-1");
  EXPECT_EQ(poly_to_json(p).dump(), "[[0,-1],[2,2],[4,-2],[6,1]]");
  EXPECT_EQ(poly_from_json(poly_to_json(p)), p);
  const HalfLaurent big = pow(HalfLaurent::t() + 1, 90);
  const json j = poly_to_json(big);
  EXPECT_TRUE(j[45][1].is_string());  // C(90, 45) needs 87 bits
  EXPECT_TRUE(j[90][1].is_number_integer());
  EXPECT_EQ(poly_from_json(j), big);
  EXPECT_THROW(poly_from_json(json::parse("[[2,1],[0,1]]")), ParseError);
  EXPECT_THROW(poly_from_json(json::parse("[[0,0]]")), ParseError);
  EXPECT_THROW(poly_from_json(json::parse("[[0]]")), ParseError);
  EXPECT_THROW(poly_from_json(json::parse("{}")), ParseError);
  EXPECT_THROW(poly_from_json(json::parse("[[0,1.5]]")), ParseError);
}

TEST(TableIO, CsvRoundTrip) {
  for (const auto& [kind, route] : {std::pair{"R", Route::hecke}, std::pair{"P", Route::chain_dp}}) {
    const PolyTable t = a3_table(kind, route);
    EXPECT_EQ(t.rows.size(), 213U);
    const std::string csv = to_csv(t);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
    EXPECT_EQ(table_from_csv(csv), t);
  }
}

TEST(TableIO, JsonRoundTrip) {
  const PolyTable t = a3_table("P", Route::chain_dp);
  EXPECT_EQ(table_from_json(json::parse(to_json_text(table_to_json(t)))), t);
  EXPECT_THROW(table_from_json(json::parse(R"({"type":"A1"})")), ParseError);
}

TEST(TableIO, CsvRejectsMalformedInput) {
  EXPECT_THROW(table_from_csv("nope\n"), ParseError);
  const std::string header = std::string(kCsvHeader) + "\n";
  EXPECT_THROW(table_from_csv(header + "A1,1,e,1,0,R,hecke\n"), ParseError);
  EXPECT_THROW(table_from_csv(header + "A1,1,e,x,0,R,hecke,t-1\n"), ParseError);
  EXPECT_THROW(table_from_csv(header + "A1,1,e,1,0,R,hecke,t-1\nA2,1,e,1,0,R,hecke,t-1\n"), ParseError);
  EXPECT_THROW(table_from_csv(header + "A1,1,e,1,0,R,hecke,t-\n"), ParseError);
}

TEST(TableCache, StoreAndLoad) {
  const fs::path dir = fresh_dir("cache_store");
  const TableCache cache(dir);
  const auto datum = CartanDatum::from_label("A3");
  const PolyTable t = a3_table("R", Route::hecke);
  EXPECT_FALSE(cache.load(datum, "R", "hecke").has_value());
  cache.store(datum, t);
  EXPECT_EQ(cache.load(datum, "R", "hecke"), t);
  EXPECT_FALSE(cache.load(datum, "R", "cells").has_value());
  EXPECT_FALSE(cache.load(CartanDatum::from_label("B3"), "R", "hecke").has_value());
  EXPECT_NE(fingerprint(datum), fingerprint(CartanDatum::from_label("A2")));
  fs::remove_all(dir);
}

TEST(TableCache, CorruptFilesAreMisses) {
  const fs::path dir = fresh_dir("cache_corrupt");
  const TableCache cache(dir);
  const auto datum = CartanDatum::from_label("A3");
  const PolyTable t = a3_table("P", Route::chain_dp);
  cache.store(datum, t);
  const fs::path path = cache.path_for(datum, "P", "chain_dp");

  std::string text;
  {
    std::ifstream in(path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  // Flip one coefficient without updating the digest.
  std::string tampered = text;
  const auto pos = tampered.find("[0,1]]");
  ASSERT_NE(pos, std::string::npos);
  tampered.replace(pos, 6, "[0,2]]");
  std::ofstream(path, std::ios::trunc) << tampered;
  EXPECT_FALSE(cache.load(datum, "P", "chain_dp").has_value());

  std::ofstream(path, std::ios::trunc) << text.substr(0, text.size() / 2);
  EXPECT_FALSE(cache.load(datum, "P", "chain_dp").has_value());

  std::ofstream(path, std::ios::trunc) << "";
  EXPECT_FALSE(cache.load(datum, "P", "chain_dp").has_value());
  fs::remove_all(dir);
}

TEST(TableCache, CommandRecomputesInconsistentEntries) {
  const fs::path dir = fresh_dir("cache_cmd");
  cli::RunConfig cfg;
  cfg.command = "table";
  cfg.type_label = "A3";
  cfg.kind = "P";
  cfg.cache_dir = dir.string();

  std::ostringstream first, first_err;
  ASSERT_EQ(cli::run(cfg, first, first_err), cli::kOk);
  EXPECT_NE(first_err.str().find("cache: miss"), std::string::npos);

  std::ostringstream second, second_err;
  ASSERT_EQ(cli::run(cfg, second, second_err), cli::kOk);
  EXPECT_NE(second_err.str().find("cache: hit"), std::string::npos);
  EXPECT_EQ(first.str(), second.str());

  // A well-formed entry whose rows do not fit the group is discarded.
  PolyTable wrong = a3_table("P", Route::chain_dp);
  wrong.rows.pop_back();
  TableCache(dir).store(CartanDatum::from_label("A3"), wrong);
  std::ostringstream third, third_err;
  ASSERT_EQ(cli::run(cfg, third, third_err), cli::kOk);
  EXPECT_NE(third_err.str().find("discarding"), std::string::npos);
  EXPECT_EQ(third.str(), first.str());
  fs::remove_all(dir);
}
