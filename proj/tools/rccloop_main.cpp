#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rccloop/brute.hpp"
#include "rccloop/constructions.hpp"
#include "rccloop/counting.hpp"
#include "rccloop/gl2.hpp"
#include "rccloop/io.hpp"
#include "rccloop/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using rccloop::Json;

struct ManifestClock {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

/// All numeric fields stay integers; wall time is reported in milliseconds.
void emit_manifest(bool as_json, const std::string& subcommand,
                   Json parameters, Json result,
                   const std::vector<std::string>& outputs,
                   const ManifestClock& clock) {
  if (!as_json) return;
  Json manifest{{"subcommand", subcommand},
                {"parameters", std::move(parameters)},
                {"artifact_version", kVersion},
                {"wall_ms", clock.ms()},
                {"result", std::move(result)},
                {"outputs", outputs}};
  std::cout << manifest.dump(2) << std::endl;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw rccloop::InvalidArgument("cannot write " + path);
  out << content;
}

int run(int argc, char** argv) {
  CLI::App app{"Constructs, counts, classifies and verifies the right "
               "conjugacy closed loops of order 2p, together with the "
               "GL(2,q) loop series"};
  app.require_subcommand(1);

  bool json_output = false;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  app.add_flag("--json", json_output, "emit a JSON run manifest on stdout");
  app.add_option("--threads", threads, "parallel width for enumerations");

  if (const char* cap = std::getenv("RCCLOOP_MAX_GROUP")) {
    long long v = std::atoll(cap);
    if (v > 0) rccloop::group_cap().store(v);
  }

  // count --p P
  auto* count_cmd = app.add_subcommand("count", "isomorphism-type counts");
  long long count_p = 0;
  count_cmd->add_option("--p", count_p, "prime p (loops of order 2p)")
      ->required();

  // ind --n N --d D [--brute]
  auto* ind_cmd = app.add_subcommand("ind", "involution count I_{n,d}");
  long long ind_n = 0, ind_d = 0;
  bool ind_brute = false;
  ind_cmd->add_option("--n", ind_n, "degree")->required();
  ind_cmd->add_option("--d", ind_d, "cycle power")->required();
  ind_cmd->add_flag("--brute", ind_brute, "exhaustive count (n <= 10)");

  // enumerate --p P [--verify-iso] [--out FILE] [--emit-tables DIR]
  auto* enum_cmd =
      app.add_subcommand("enumerate", "all loops of order 2p up to isomorphism");
  int enum_p = 0;
  bool enum_verify_iso = false;
  std::string enum_out, enum_tables_dir;
  enum_cmd->add_option("--p", enum_p, "odd prime")->required();
  enum_cmd->add_flag("--verify-iso", enum_verify_iso,
                     "verify pairwise non-isomorphism");
  enum_cmd->add_option("--out", enum_out, "write inventory JSON here");
  enum_cmd->add_option("--emit-tables", enum_tables_dir,
                       "write one Cayley table file per class");

  // gl2 --q Q [--out FILE]
  auto* gl2_cmd = app.add_subcommand("gl2", "the loop of order q^2-1");
  int gl2_q = 0;
  std::string gl2_out;
  gl2_cmd->add_option("--q", gl2_q, "prime power, 3 <= q <= 9")->required();
  gl2_cmd->add_option("--out", gl2_out, "write table and report here");

  // brute --order N [--rcc-only] [--budget SECONDS] [--out FILE]
  auto* brute_cmd =
      app.add_subcommand("brute", "exhaustive normalized-table enumeration");
  int brute_order = 0;
  bool brute_rcc = false;
  double brute_budget = 3600.0;
  std::string brute_out;
  brute_cmd->add_option("--order", brute_order, "table order")->required();
  brute_cmd->add_flag("--rcc-only", brute_rcc, "prune and filter to RCC");
  brute_cmd->add_option("--budget", brute_budget, "time budget in seconds");
  brute_cmd->add_option("--out", brute_out, "write class inventory here");

  // check --file F
  auto* check_cmd = app.add_subcommand("check", "classify a Cayley table file");
  std::string check_file;
  check_cmd->add_option("--file", check_file, "table file (.tbl text or .json)")
      ->required();

  // verify [--tier quick|full|stretch]
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  std::string tier_name = "full";
  verify_cmd->add_option("--tier", tier_name, "quick, full or stretch")
      ->check(CLI::IsMember({"quick", "full", "stretch"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  ManifestClock clock;

  if (*count_cmd) {
    rccloop::CountReport report = rccloop::total_rcc_count(count_p);
    if (!json_output) {
      std::cout << "total " << report.total << "\n"
                << "case_a " << report.case_a << "\n"
                << "case_b " << report.case_b << "\n"
                << "case_c " << report.case_c << std::endl;
    }
    emit_manifest(json_output, "count", Json{{"p", count_p}},
                  rccloop::count_report_to_json(report), {}, clock);
    return 0;
  }

  if (*ind_cmd) {
    Json result;
    if (ind_brute) {
      long long v = rccloop::ind_count_brute(static_cast<int>(ind_n),
                                             static_cast<int>(ind_d));
      if (!json_output) std::cout << v << std::endl;
      result = Json{{"value", v}, {"mode", "brute"}};
    } else {
      rccloop::BigInt v = rccloop::ind_count(ind_n, ind_d);
      if (!json_output) std::cout << v << std::endl;
      result = Json{{"value", rccloop::big_to_json(v)}, {"mode", "formula"}};
    }
    emit_manifest(json_output, "ind", Json{{"n", ind_n}, {"d", ind_d}},
                  std::move(result), {}, clock);
    return 0;
  }

  if (*enum_cmd) {
    rccloop::IsoInventory inv = rccloop::enumerate_2p(
        enum_p, enum_verify_iso ? rccloop::VerifyMode::full_iso
                                : rccloop::VerifyMode::counts_only);
    std::vector<std::string> outputs;
    if (!enum_out.empty()) {
      write_file(enum_out, rccloop::inventory_to_json(inv).dump(2) + "\n");
      outputs.push_back(enum_out);
    }
    if (!enum_tables_dir.empty()) {
      std::filesystem::create_directories(enum_tables_dir);
      std::map<char, int> per_case;
      for (const auto& entry : inv.entries) {
        std::ostringstream name;
        name << "rcc_2p_" << enum_p << "_" << entry.case_tag << "_"
             << per_case[entry.case_tag]++ << ".tbl";
        std::string path =
            (std::filesystem::path(enum_tables_dir) / name.str()).string();
        write_file(path, rccloop::table_to_text(entry.table));
        outputs.push_back(path);
      }
    }
    if (!json_output)
      std::cout << "p=" << enum_p << " total=" << inv.entries.size()
                << " (a=" << inv.count_a << ",b=" << inv.count_b
                << ",c=" << inv.count_c << ")"
                << (enum_verify_iso ? " pairwise non-isomorphic" : "")
                << std::endl;
    emit_manifest(json_output, "enumerate",
                  Json{{"p", enum_p}, {"verify_iso", enum_verify_iso}},
                  Json{{"total", static_cast<long long>(inv.entries.size())},
                       {"case_a", inv.count_a},
                       {"case_b", inv.count_b},
                       {"case_c", inv.count_c}},
                  outputs, clock);
    return 0;
  }

  if (*gl2_cmd) {
    rccloop::GL2Report report = rccloop::gl2_loop_report(gl2_q, gl2_q <= 5);
    Json jrep{{"q", report.q},
              {"loop_order", report.table.order()},
              {"group_order", report.group_order},
              {"envelope_order", report.envelope_order},
              {"envelope_matches", report.envelope_matches},
              {"soluble", report.soluble},
              {"rcc", report.rcc},
              {"lcc", report.lcc}};
    if (report.alternative_class_isomorphic)
      jrep["alternative_class_isomorphic"] =
          *report.alternative_class_isomorphic;
    std::vector<std::string> outputs;
    if (!gl2_out.empty()) {
      Json full{{"report", jrep},
                {"table", rccloop::table_to_json(report.table)}};
      write_file(gl2_out, full.dump(2) + "\n");
      outputs.push_back(gl2_out);
    }
    if (!json_output)
      std::cout << "q=" << gl2_q << " loop_order=" << report.table.order()
                << " group_order=" << report.group_order
                << " soluble=" << (report.soluble ? "yes" : "no")
                << " rcc=" << (report.rcc ? "yes" : "no") << std::endl;
    emit_manifest(json_output, "gl2", Json{{"q", gl2_q}}, std::move(jrep),
                  outputs, clock);
    return 0;
  }

  if (*brute_cmd) {
    rccloop::SearchConfig cfg;
    cfg.order = brute_order;
    cfg.rcc_only = brute_rcc;
    cfg.time_budget_s = brute_budget;
    cfg.parallel_width = threads;
    try {
      rccloop::BruteResult res = rccloop::enumerate_loops(cfg);
      long long rcc_classes = 0, assoc_classes = 0;
      for (const auto& cls : res.classes) {
        if (rccloop::is_rcc(cls.representative)) ++rcc_classes;
        if (rccloop::is_associative(cls.representative)) ++assoc_classes;
      }
      std::vector<std::string> outputs;
      if (!brute_out.empty()) {
        Json classes = Json::array();
        for (const auto& cls : res.classes)
          classes.push_back(
              Json{{"table", rccloop::table_to_json(cls.representative)},
                   {"members", static_cast<long long>(cls.members.size())},
                   {"fingerprint", rccloop::fingerprint_to_json(cls.fp)}});
        write_file(brute_out,
                   Json{{"order", brute_order}, {"classes", classes}}.dump(2) +
                       "\n");
        outputs.push_back(brute_out);
      }
      if (!json_output)
        std::cout << "order=" << brute_order
                  << " classes=" << res.classes.size() << " rcc=" << rcc_classes
                  << " assoc=" << assoc_classes << std::endl;
      emit_manifest(
          json_output, "brute",
          Json{{"order", brute_order},
               {"rcc_only", brute_rcc},
               {"budget_s", static_cast<long long>(brute_budget)}},
          Json{{"classes", static_cast<long long>(res.classes.size())},
               {"rcc", rcc_classes},
               {"assoc", assoc_classes},
               {"survivors", static_cast<long long>(res.survivors.size())},
               {"nodes", res.nodes}},
          outputs, clock);
    } catch (const rccloop::BudgetExceeded&) {
      if (!json_output)
        std::cout << "order=" << brute_order
                  << " budget-exceeded (no verdict)" << std::endl;
      emit_manifest(json_output, "brute",
                    Json{{"order", brute_order}, {"rcc_only", brute_rcc}},
                    Json{{"budget_exceeded", true}}, {}, clock);
    }
    return 0;
  }

  if (*check_cmd) {
    rccloop::LoopTable table;
    try {
      table = rccloop::read_table_file(check_file);
    } catch (const rccloop::Error& e) {
      std::cerr << e.what() << std::endl;
      return 1;
    }
    bool rcc = rccloop::is_rcc(table);
    bool lcc = rccloop::is_lcc(table);
    bool assoc = rccloop::is_associative(table);
    bool comm = rccloop::is_commutative(table);
    Json result{{"order", table.order()},
                {"loop", true},
                {"rcc", rcc},
                {"lcc", lcc},
                {"group", assoc},
                {"commutative", comm}};
    try {
      rccloop::LoopFolder env = rccloop::envelope_of_loop(table);
      auto block = rccloop::block_system(*env.group);
      result["envelope"] =
          Json{{"order", env.group->order()},
               {"soluble", rccloop::is_soluble(*env.group)},
               {"block_found", block.has_value()}};
      result["fingerprint"] =
          rccloop::fingerprint_to_json(rccloop::fingerprint(table));
    } catch (const rccloop::CapExceeded&) {
      result["envelope"] = "skipped (group cap exceeded)";
    }
    if (!json_output)
      std::cout << "order=" << table.order() << " loop=yes"
                << " rcc=" << (rcc ? "yes" : "no")
                << " lcc=" << (lcc ? "yes" : "no")
                << " group=" << (assoc ? "yes" : "no")
                << " commutative=" << (comm ? "yes" : "no") << std::endl;
    emit_manifest(json_output, "check", Json{{"file", check_file}},
                  std::move(result), {}, clock);
    return 0;
  }

  if (*verify_cmd) {
    rccloop::VerifyTier tier = rccloop::VerifyTier::full;
    if (tier_name == "quick") tier = rccloop::VerifyTier::quick;
    if (tier_name == "stretch") tier = rccloop::VerifyTier::stretch;
    auto results = rccloop::run_acceptance(tier, &std::cout, threads);
    bool all_pass = true;
    Json jres = Json::array();
    for (const auto& r : results) {
      all_pass = all_pass && r.pass;
      jres.push_back(Json{{"id", r.id},
                          {"name", r.name},
                          {"pass", r.pass},
                          {"wall_ms", r.wall_ms},
                          {"detail", r.detail}});
    }
    emit_manifest(json_output, "verify", Json{{"tier", tier_name}},
                  Json{{"all_pass", all_pass}, {"criteria", std::move(jres)}},
                  {}, clock);
    return all_pass ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const rccloop::CountMismatch& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  } catch (const rccloop::IsoCollision& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  } catch (const rccloop::StructureViolation& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  } catch (const rccloop::MismatchFound& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  } catch (const rccloop::Error& e) {
    std::cerr << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << std::endl;
    return 2;
  }
}
