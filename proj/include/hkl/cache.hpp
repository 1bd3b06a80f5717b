#pragma once

// On-disk table cache. One JSON file per (Cartan matrix, kind, route):
//
//   { "format": "hkl-table-cache", "version": 1,
//     "fingerprint": "<16 hex digits>", "digest": "<16 hex digits>",
//     "table": <table JSON> }
//
// The fingerprint hashes the Cartan matrix together with kCacheVersion; the
// digest hashes the serialized table. Anything unreadable or inconsistent is
// treated as a miss, and callers re-check rows against the group before use.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "hkl/coxeter.hpp"
#include "hkl/table_io.hpp"

namespace hkl {

inline constexpr int kCacheVersion = 1;

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ULL;
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << x;
  return out.str();
}

inline std::string fingerprint(const CartanDatum& datum) {
  std::string key = "hkl-cache-v" + std::to_string(kCacheVersion) + "|" + std::to_string(datum.rank);
  for (int a : datum.cartan) key += "," + std::to_string(a);
  return hex64(fnv1a(key));
}

class TableCache {
 public:
  explicit TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path path_for(const CartanDatum& datum, std::string_view kind, std::string_view route) const {
    return dir_ / (fingerprint(datum) + "-" + std::string(kind) + "-" + std::string(route) + ".json");
  }

  std::optional<PolyTable> load(const CartanDatum& datum, std::string_view kind, std::string_view route) const {
    const auto path = path_for(datum, kind, route);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
      const json doc = json::parse(in);
      if (doc.at("format") != "hkl-table-cache" || doc.at("version") != kCacheVersion ||
          doc.at("fingerprint") != fingerprint(datum))
        return std::nullopt;
      const json& table = doc.at("table");
      if (doc.at("digest") != hex64(fnv1a(table.dump()))) return std::nullopt;
      PolyTable t = table_from_json(table);
      if (t.kind != kind || t.route != route) return std::nullopt;
      return t;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  /// Writes through a temporary file and renames it into place.
  void store(const CartanDatum& datum, const PolyTable& table) const {
    std::filesystem::create_directories(dir_);
    const json body = table_to_json(table);
    const json doc = {{"format", "hkl-table-cache"},
                      {"version", kCacheVersion},
                      {"fingerprint", fingerprint(datum)},
                      {"digest", hex64(fnv1a(body.dump()))},
                      {"table", body}};
    const auto path = path_for(datum, table.kind, table.route);
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << doc.dump() << '\n';
      if (!out) throw Error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace hkl
