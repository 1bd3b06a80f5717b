#pragma once

// CSV and JSON forms of polynomial tables. The JSON form is authoritative:
// polynomials are [half_exponent, coefficient] pairs in ascending exponent
// order, and coefficients beyond 64 bits are written as decimal strings.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hkl/errors.hpp"
#include "hkl/laurent.hpp"

namespace hkl {

using json = nlohmann::json;

inline json poly_to_json(const HalfLaurent& p) {
  json pairs = json::array();
  for (const auto& [i, c] : p.terms()) {
    if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max())
      pairs.push_back({i, static_cast<std::int64_t>(c)});
    else
      pairs.push_back({i, c.str()});
  }
  return pairs;
}

inline HalfLaurent poly_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("polynomial must be an array of pairs");
  std::vector<std::pair<int, BigInt>> pairs;
  int previous = std::numeric_limits<int>::min();
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer())
      throw ParseError("polynomial term must be [half_exponent, coefficient]");
    const int i = pair[0].get<int>();
    if (i <= previous) throw ParseError("polynomial exponents must be strictly ascending");
    previous = i;
    BigInt c;
    if (pair[1].is_number_integer())
      c = pair[1].get<std::int64_t>();
    else if (pair[1].is_string())
      c = BigInt(pair[1].get<std::string>());
    else
      throw ParseError("polynomial coefficient must be an integer");
    if (c == 0) throw ParseError("zero coefficient in polynomial");
    pairs.emplace_back(i, c);
  }
  return HalfLaurent::from_pairs(pairs);
}

struct TableRow {
  std::string w;
  std::string v;
  int len_w = 0;
  int len_v = 0;
  HalfLaurent poly;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct PolyTable {
  std::string type;
  std::string kind;   // "R" or "P"
  std::string route;  // hecke | recursion | cells | chain_direct | chain_dp
  std::vector<TableRow> rows;

  friend bool operator==(const PolyTable&, const PolyTable&) = default;
};

inline constexpr std::string_view kCsvHeader = "type,w,v,len_w,len_v,kind,route,poly";

inline std::string to_csv(const PolyTable& table) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : table.rows)
    out << table.type << ',' << r.w << ',' << r.v << ',' << r.len_w << ',' << r.len_v << ',' << table.kind << ','
        << table.route << ',' << r.poly.to_string() << '\n';
  return out.str();
}

inline PolyTable table_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("CSV header must be '" + std::string(kCsvHeader) + "'");
  PolyTable table;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (std::size_t comma; (comma = line.find(',', pos)) != std::string::npos; pos = comma + 1) f.push_back(line.substr(pos, comma - pos));
    f.push_back(line.substr(pos));
    if (f.size() != 8) throw ParseError("CSV row must have 8 fields: " + line);
    if (first) {
      table.type = f[0];
      table.kind = f[5];
      table.route = f[6];
      first = false;
    } else if (f[0] != table.type || f[5] != table.kind || f[6] != table.route) {
      throw ParseError("CSV rows disagree on type, kind or route");
    }
    try {
      table.rows.push_back(TableRow{f[1], f[2], std::stoi(f[3]), std::stoi(f[4]), HalfLaurent::parse(f[7])});
    } catch (const std::logic_error&) {
      throw ParseError("bad length field in CSV row: " + line);
    }
  }
  return table;
}

inline json table_to_json(const PolyTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"w", r.w}, {"v", r.v}, {"len_w", r.len_w}, {"len_v", r.len_v}, {"poly", poly_to_json(r.poly)}});
  return {{"type", table.type}, {"kind", table.kind}, {"route", table.route}, {"rows", std::move(rows)}};
}

inline PolyTable table_from_json(const json& j) {
  try {
    PolyTable table{j.at("type").get<std::string>(), j.at("kind").get<std::string>(), j.at("route").get<std::string>(), {}};
    for (const auto& r : j.at("rows"))
      table.rows.push_back(TableRow{r.at("w").get<std::string>(), r.at("v").get<std::string>(), r.at("len_w").get<int>(),
                                    r.at("len_v").get<int>(), poly_from_json(r.at("poly"))});
    return table;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed table JSON: ") + e.what());
  }
}

inline std::string to_json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace hkl
