// hktlab command-line front end.
//
//   hktlab check    (<file> | --builtin NAME) [--allow-unknown-fields]
//   hktlab analyze  (<file> | --builtin NAME | --all) [--format json|text]
//   hktlab holonomy (<file> | --builtin NAME) --connection obata|bismut|levicivita
//   hktlab catalog  --list | --export NAME PATH
//
// Exit codes: 0 success, 1 input error, 2 I/O error, 3 theorem violation or
// structural defect. HKTLAB_CATALOG_DIR names a directory of extra *.json
// entries that behave like built-ins.

#include "hktlab/hktlab.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <future>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace hktlab;

enum Exit { kOk = 0, kInput = 1, kIo = 2, kViolation = 3 };

std::vector<CatalogEntry> full_catalog(bool strict) {
  auto entries = builtin_catalog();
  if (const char* dir = std::getenv("HKTLAB_CATALOG_DIR"); dir && *dir) {
    for (auto& e : load_catalog_dir(dir, strict)) {
      const bool clash = std::any_of(entries.begin(), entries.end(), [&](const auto& x) { return x.name == e.name; });
      if (clash) throw Error("catalog entry '" + e.name + "' from HKTLAB_CATALOG_DIR duplicates an existing name");
      entries.push_back(std::move(e));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return entries;
}

CatalogEntry find_entry(const std::string& name, bool strict) {
  for (auto& e : full_catalog(strict))
    if (e.name == name) return e;
  throw Error("unknown catalog entry '" + name + "'");
}

struct Source {
  std::string path;
  std::string builtin;
  bool allow_unknown = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("file", path, "entry file (JSON, schema_version 1)");
    cmd->add_option("--builtin", builtin, "catalog entry name");
    cmd->add_flag("--allow-unknown-fields", allow_unknown, "accept unknown top-level fields");
  }

  CatalogEntry resolve() const {
    if (!path.empty() && !builtin.empty()) throw Error("give either a file or --builtin, not both");
    if (!builtin.empty()) return find_entry(builtin, !allow_unknown);
    if (path.empty()) throw Error("no input: give a file or --builtin NAME");
    return load_entry(path, !allow_unknown);
  }
};

Json holonomy_json(const std::string& name, const HolonomyReport& h) {
  Json j;
  j["name"] = name;
  j["connection"] = to_string(h.connection);
  j["dim"] = h.dim;
  j["generator_count"] = h.generators.size();
  j["closed"] = h.closed;
  j["in_gl_n_H"] = h.in_gl;
  j["in_sl_n_H"] = h.in_sl;
  j["g_skew"] = h.g_skew;
  j["certificate"] = h.certificate;
  Json gens = Json::array();
  for (const auto& g : h.generators) gens.push_back(detail::matrix_to_json(g));
  j["generators"] = std::move(gens);
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact analysis of left-invariant hyperhermitian structures"};
  app.require_subcommand(1);

  Source check_src;
  auto* check = app.add_subcommand("check", "validate an entry");
  check_src.add_to(check);

  Source an_src;
  std::string an_format = "json";
  bool an_all = false, an_timing = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "run the full analysis");
  an_src.add_to(analyze_cmd);
  analyze_cmd->add_option("--format", an_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_flag("--all", an_all, "analyze every catalog entry");
  analyze_cmd->add_flag("--timing", an_timing, "report wall-clock time per entry");

  Source hol_src;
  std::string hol_conn = "obata", hol_format = "text";
  auto* hol = app.add_subcommand("holonomy", "holonomy algebra of one connection");
  hol_src.add_to(hol);
  hol->add_option("--connection", hol_conn, "obata, bismut or levicivita")
      ->check(CLI::IsMember({"obata", "bismut", "levicivita"}));
  hol->add_option("--format", hol_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  bool cat_list = false;
  std::vector<std::string> cat_export;
  auto* cat = app.add_subcommand("catalog", "list or export catalog entries");
  cat->add_flag("--list", cat_list, "list entries");
  cat->add_option("--export", cat_export, "NAME PATH")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*check) {
      const CatalogEntry e = check_src.resolve();
      std::cout << e.name << ": valid (n = " << e.n << ", dim " << e.dim() << ")\n";
      return kOk;
    }

    if (*analyze_cmd) {
      std::vector<CatalogEntry> entries;
      if (an_all) {
        if (!an_src.path.empty() || !an_src.builtin.empty()) throw Error("--all takes no other input");
        entries = full_catalog(!an_src.allow_unknown);
      } else {
        entries.push_back(an_src.resolve());
      }
      struct Timed {
        AnalysisReport report;
        double ms;
      };
      std::vector<std::future<Timed>> jobs;
      for (const auto& e : entries)
        jobs.push_back(std::async(std::launch::async, [&e] {
          const auto t0 = std::chrono::steady_clock::now();
          AnalysisReport r = analyze(e);
          const auto t1 = std::chrono::steady_clock::now();
          return Timed{std::move(r), std::chrono::duration<double, std::milli>(t1 - t0).count()};
        }));
      int code = kOk;
      Json all = Json::array();
      for (auto& job : jobs) {
        Timed t = job.get();
        code = std::max(code, t.report.exit_code());
        if (an_format == "json") {
          Json j = to_json(t.report);
          if (an_timing) j["elapsed_ms"] = static_cast<long long>(t.ms);
          all.push_back(std::move(j));
        } else {
          std::cout << to_text(t.report);
          if (an_timing) std::cout << "elapsed: " << static_cast<long long>(t.ms) << " ms\n";
          std::cout << "\n";
        }
      }
      if (an_format == "json") std::cout << (an_all ? all : all.front()).dump(2) << "\n";
      return code;
    }

    if (*hol) {
      const CatalogEntry e = hol_src.resolve();
      const ConnectionKind kind = hol_conn == "obata"    ? ConnectionKind::Obata
                                  : hol_conn == "bismut" ? ConnectionKind::Bismut
                                                         : ConnectionKind::LeviCivita;
      const HolonomyReport h = holonomy_report(e, kind);
      if (hol_format == "json") {
        std::cout << holonomy_json(e.name, h).dump(2) << "\n";
      } else {
        std::cout << e.name << " " << to_string(kind) << " holonomy\n"
                  << "  generators: " << h.generators.size() << "\n"
                  << "  dim: " << h.dim << "\n"
                  << "  closed: " << (h.closed ? "yes" : "no") << "\n"
                  << "  in gl(n,H): " << (h.in_gl ? "yes" : "no") << "\n"
                  << "  in sl(n,H): " << (h.in_sl ? "yes" : "no") << "\n"
                  << "  g-skew: " << (h.g_skew ? "yes" : "no") << "\n";
        if (!h.certificate.empty()) std::cout << "  certificate: " << h.certificate << "\n";
      }
      return kind == ConnectionKind::Obata && !h.in_gl ? kViolation : kOk;
    }

    if (*cat) {
      if (cat_list == !cat_export.empty()) throw Error("catalog needs exactly one of --list or --export");
      if (cat_list) {
        for (const auto& e : full_catalog(true)) {
          std::cout << e.name << "  n=" << e.n << "  " << e.description;
          if (!e.expected.empty()) {
            std::cout << "  [";
            bool first = true;
            for (const auto& [k, v] : e.expected) {
              std::cout << (first ? "" : ", ") << k << "=" << (v ? "true" : "false");
              first = false;
            }
            std::cout << "]";
          }
          std::cout << "\n";
        }
        return kOk;
      }
      save_entry(find_entry(cat_export[0], true), cat_export[1]);
      std::cout << "wrote " << cat_export[1] << "\n";
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
