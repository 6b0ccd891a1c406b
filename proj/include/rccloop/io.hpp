#pragma once

#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rccloop/constructions.hpp"
#include "rccloop/counting.hpp"
#include "rccloop/errors.hpp"
#include "rccloop/field.hpp"
#include "rccloop/folder.hpp"
#include "rccloop/loop.hpp"

namespace rccloop {

using Json = nlohmann::ordered_json;

inline Json big_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<long long>::min() &&
      v <= std::numeric_limits<long long>::max())
    return Json(v.convert_to<long long>());
  return Json(v.str());
}

inline Json perm_to_json(const Permutation& p) { return Json(p.images()); }

inline Json table_to_json(const LoopTable& t) {
  Json rows = Json::array();
  for (int i = 0; i < t.order(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < t.order(); ++j) row.push_back(t.at(i, j));
    rows.push_back(std::move(row));
  }
  return Json{{"order", t.order()}, {"table", std::move(rows)}};
}

inline LoopTable table_from_json(const Json& j) {
  if (!j.contains("order") || !j.contains("table"))
    throw InvalidTable("json table needs \"order\" and \"table\"");
  int n = j["order"].get<int>();
  std::vector<std::vector<int>> rows;
  for (const auto& row : j["table"])
    rows.push_back(row.get<std::vector<int>>());
  if (static_cast<int>(rows.size()) != n)
    throw InvalidTable("json table row count differs from order");
  return LoopTable::from_rows(rows);
}

/// Text format: first line n, then n lines of n space-separated 0-based
/// entries.
inline std::string table_to_text(const LoopTable& t) {
  std::ostringstream out;
  out << t.order() << '\n';
  for (int i = 0; i < t.order(); ++i) {
    for (int j = 0; j < t.order(); ++j) {
      if (j) out << ' ';
      out << t.at(i, j);
    }
    out << '\n';
  }
  return out.str();
}

inline LoopTable table_from_text(std::istream& in) {
  int n = 0;
  if (!(in >> n) || n <= 0) throw InvalidTable("missing or bad order line");
  std::vector<std::vector<int>> rows(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> rows[i][j])) {
        std::ostringstream msg;
        msg << "row " << i << " is truncated";
        throw InvalidTable(msg.str());
      }
  return LoopTable::from_rows(rows);
}

inline LoopTable read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    Json j;
    in >> j;
    return table_from_json(j);
  }
  return table_from_text(in);
}

inline Json folder_to_json(const LoopFolder& f) {
  Json gens = Json::array();
  for (const auto& g : f.group->generators) gens.push_back(perm_to_json(g));
  return Json{{"group", Json{{"degree", f.group->degree},
                             {"generators", std::move(gens)}}},
              {"H", f.subgroup},
              {"T", f.transversal}};
}

inline Json field_to_json(const FieldContext& f) {
  // Modulus serialized high degree first, constant term last.
  std::vector<int> high_first(f.modulus().rbegin(), f.modulus().rend());
  return Json{{"p0", f.characteristic()},
              {"k", f.extension_degree()},
              {"modulus", high_first}};
}

inline Json fingerprint_to_json(const Fingerprint& fp) {
  return Json{{"order", fp.order},
              {"translation_orders", fp.translation_orders},
              {"mult_group_order", fp.mult_group_order},
              {"envelope_class_sizes", fp.envelope_class_sizes},
              {"commuting_pairs", fp.commuting_pairs},
              {"associating_triples", fp.associating_triples}};
}

inline Json count_report_to_json(const CountReport& r) {
  Json ivals = Json::object();
  for (const auto& [d, v] : r.i_values)
    ivals[std::to_string(d)] = big_to_json(v);
  return Json{{"p", r.p},
              {"total", big_to_json(r.total)},
              {"case_a", big_to_json(r.case_a)},
              {"case_b", big_to_json(r.case_b)},
              {"case_c", big_to_json(r.case_c)},
              {"r", r.r},
              {"n2", r.n2},
              {"I_top", big_to_json(r.i_top)},
              {"I_values", {{"n", r.p - 1}, {"values", std::move(ivals)}}}};
}

inline Json inventory_entry_to_json(const InventoryEntry& e) {
  Json j{{"label", e.label},
         {"case", std::string(1, e.case_tag)},
         {"flags",
          {{"rcc", e.rcc}, {"lcc", e.lcc}, {"associative", e.associative}}},
         {"table", table_to_json(e.table)}};
  if (e.fp) j["fingerprint"] = fingerprint_to_json(*e.fp);
  if (e.env)
    j["envelope"] = Json{{"order", e.env->order},
                         {"soluble", e.env->soluble},
                         {"block_found", e.env->block_found}};
  return j;
}

inline Json inventory_to_json(const IsoInventory& inv) {
  Json entries = Json::array();
  for (const auto& e : inv.entries) entries.push_back(inventory_entry_to_json(e));
  return Json{{"p", inv.p},
              {"counts",
               {{"total", static_cast<long long>(inv.entries.size())},
                {"case_a", inv.count_a},
                {"case_b", inv.count_b},
                {"case_c", inv.count_c}}},
              {"entries", std::move(entries)}};
}

}  // namespace rccloop
