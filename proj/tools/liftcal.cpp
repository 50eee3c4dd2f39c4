#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "liftcal/abstracted.hpp"
#include "liftcal/bench.hpp"
#include "liftcal/errors.hpp"
#include "liftcal/lifted.hpp"
#include "liftcal/oracle.hpp"
#include "liftcal/reconfig.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace liftcal;

enum Exit : int { kOk = 0, kUsage = 1, kSemantic = 2, kPropertyFailure = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string file;
  std::string abs;
  std::string lattice = "const";
  std::string init = "top";
  std::string format = "text";
  bool dataflow = false;
  bool simplify = false;
  std::string output;
  std::string renames_out;
  uint64_t seed = 0;
  size_t cases = 200;
  size_t features = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write " + path);
}

Lattice lattice_of(const std::string& s) { return s == "constplus" ? Lattice::ConstPlus : Lattice::Const; }

std::string row_text(const LiftedStore& d, size_t k) {
  std::string s = d.configs().formula(k).render() + ":";
  for (size_t v = 0; v < d.vars().size(); ++v) {
    s += v ? ", " : " ";
    s += d.vars()[v] + "=" + render_value(d.at(k, v));
  }
  return s;
}

json store_json(const LiftedStore& d, size_t k) {
  json store = json::object();
  for (size_t v = 0; v < d.vars().size(); ++v) store[d.vars()[v]] = render_value(d.at(k, v));
  return store;
}

json results_json(const LiftedStore& d) {
  json rows = json::array();
  for (size_t k = 0; k < d.size(); ++k) {
    rows.push_back({{"config", d.configs().formula(k).render()}, {"store", store_json(d, k)}});
  }
  return rows;
}

json renames_json(const RenameTable& r) {
  json out = json::object();
  for (const auto& e : r.entries) out[e.name] = e.meaning.to_formula(r.original).render();
  return out;
}

// One-line header for a labeled statement in data-flow listings.
std::string stmt_head(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Skip: return "skip";
    case Stmt::Kind::Assign: return s.var + " := " + render_expr(*s.expr);
    case Stmt::Kind::Seq: return "seq";
    case Stmt::Kind::If: return "if (" + render_expr(*s.expr) + ")";
    case Stmt::Kind::While: return "while (" + render_expr(*s.expr) + ")";
    case Stmt::Kind::IfDef: return "#if (" + s.guard.render() + ")";
    case Stmt::Kind::Lub: return "lub";
  }
  return "?";
}

int cmd_analyze(const RunConfig& cfg) {
  Program p = parse_program(read_file(cfg.file));
  auto K = std::make_shared<const ConfigSet>(valid_configs(p.model));
  Lattice l = lattice_of(cfg.lattice);
  auto vars = program_vars(p);

  std::optional<AbstractionPlan> plan;
  if (!cfg.abs.empty()) plan.emplace(parse_abstraction(cfg.abs, p.model.space), K);
  auto ac = plan ? plan->output_ptr()
                 : std::make_shared<const AbstractedConfigs>(AbstractedConfigs::concrete(K));

  LiftedStore entry = cfg.init == "bot" ? LiftedStore::bot(l, ac->configs, vars)
                                        : LiftedStore::top(l, ac->configs, vars);
  LiftedStore result = plan ? analyze_abstracted(*p.body, *ac, entry) : analyze_lifted(*p.body, entry);

  std::optional<DataflowSolution> flow;
  std::vector<const Stmt*> by_label;
  if (cfg.dataflow) {
    flow = solve_dataflow(build_dataflow(p.body, ac), entry);
    by_label = stmts_by_label(*p.body);
  }

  if (cfg.format == "json") {
    json doc;
    doc["configs"] = json::array();
    for (size_t k = 0; k < ac->size(); ++k) doc["configs"].push_back(ac->configs->formula(k).render());
    doc["results"] = results_json(result);
    doc["renames"] = renames_json(ac->renames);
    if (flow) {
      json rows = json::array();
      for (const auto& r : flow->rows) {
        rows.push_back({{"label", r.label},
                        {"stmt", stmt_head(*by_label.at(static_cast<size_t>(r.label)))},
                        {"in", results_json(r.in)},
                        {"out", results_json(r.out)}});
      }
      doc["dataflow"] = std::move(rows);
    }
    std::cout << doc.dump(2) << "\n";
    return kOk;
  }

  for (size_t k = 0; k < result.size(); ++k) std::cout << row_text(result, k) << "\n";
  for (const auto& e : ac->renames.entries) {
    std::cout << "where " << e.name << " = " << e.meaning.to_formula(ac->renames.original).render()
              << "\n";
  }
  if (flow) {
    for (const auto& r : flow->rows) {
      std::cout << "\n[" << r.label << "] " << stmt_head(*by_label.at(static_cast<size_t>(r.label)))
                << "\n";
      for (size_t k = 0; k < r.in.size(); ++k) std::cout << "  in   " << row_text(r.in, k) << "\n";
      for (size_t k = 0; k < r.out.size(); ++k) std::cout << "  out  " << row_text(r.out, k) << "\n";
    }
  }
  return kOk;
}

int cmd_reconfigure(const RunConfig& cfg) {
  Program p = parse_program(read_file(cfg.file));
  Abstraction alpha = parse_abstraction(cfg.abs, p.model.space);
  Reconfigured r = reconfigure(p, alpha, cfg.simplify);
  std::string text = pretty(r.program);
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.output, text);
  }
  if (!cfg.renames_out.empty()) write_file(cfg.renames_out, r.renames.render());
  return kOk;
}

int cmd_check(const RunConfig& cfg) {
  if (cfg.file.empty() != cfg.abs.empty()) throw UsageError("check needs both <file> and --abs, or neither");
  std::vector<PropertyReport> reports;
  if (cfg.file.empty()) {
    reports = check_all(cfg.seed, cfg.cases);
  } else {
    Program p = parse_program(read_file(cfg.file));
    reports = check_instance(p, parse_abstraction(cfg.abs, p.model.space), cfg.seed, cfg.cases);
  }
  bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });

  if (cfg.format == "json") {
    json props = json::array();
    for (const auto& r : reports) {
      json j = {{"name", r.name},
                {"cases", r.cases},
                {"passed", r.cases - r.failures},
                {"failures", r.failures}};
      if (!r.passed()) j["counterexample"] = r.counterexample;
      props.push_back(std::move(j));
    }
    json doc = {{"seed", cfg.seed}, {"properties", std::move(props)}, {"ok", ok}};
    std::cout << doc.dump(2) << "\n";
  } else {
    for (const auto& r : reports) {
      std::printf("%-4s %-14s %zu/%zu\n", r.passed() ? "PASS" : "FAIL", r.name.c_str(),
                  r.cases - r.failures, r.cases);
      if (!r.passed()) std::cout << r.counterexample << "\n";
    }
  }
  return ok ? kOk : kPropertyFailure;
}

int cmd_bench(const RunConfig& cfg) {
  if (cfg.features > kMaxBenchFeatures) {
    throw UsageError("--features must be at most " + std::to_string(kMaxBenchFeatures));
  }
  BenchRow r = run_bench(cfg.features, cfg.seed);
  std::printf("%8s %8s %12s %12s %12s %10s %10s\n", "features", "configs", "lifted_ms", "join_ms",
              "half_ms", "join_x", "half_x");
  std::printf("%8zu %8zu %12.4f %12.4f %12.4f %10.1f %10.1f\n", r.features, r.configs, r.lifted_ms,
              r.join_ms, r.half_ms, r.join_speedup(), r.half_speedup());
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifted constant propagation with variability abstractions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* analyze = app.add_subcommand("analyze", "Run the lifted or abstracted analysis");
  analyze->add_option("file", cfg.file, "Program file")->required();
  analyze->add_option("--abs", cfg.abs, "Abstraction expression");
  analyze->add_option("--lattice", cfg.lattice)->check(CLI::IsMember({"const", "constplus"}));
  analyze->add_option("--init", cfg.init)->check(CLI::IsMember({"top", "bot"}));
  analyze->add_flag("--dataflow", cfg.dataflow, "Print per-label in/out stores");
  analyze->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));

  auto* reconf = app.add_subcommand("reconfigure", "Rewrite a program under an abstraction");
  reconf->add_option("file", cfg.file, "Program file")->required();
  reconf->add_option("--abs", cfg.abs, "Abstraction expression")->required();
  reconf->add_flag("--simplify", cfg.simplify, "Drop trivially true or dead guards");
  reconf->add_option("-o,--output", cfg.output, "Output program file");
  reconf->add_option("--renames", cfg.renames_out, "Rename sidecar file");

  auto* check = app.add_subcommand("check", "Run the property checks");
  check->add_option("file", cfg.file, "Program file (single-instance mode)");
  check->add_option("--abs", cfg.abs, "Abstraction expression");
  check->add_option("--cases", cfg.cases);
  check->add_option("--seed", cfg.seed);
  check->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));

  auto* bench = app.add_subcommand("bench", "Time lifted against abstracted analysis");
  bench->add_option("--features", cfg.features)->required();
  bench->add_option("--seed", cfg.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (reconf->parsed()) return cmd_reconfigure(cfg);
    if (check->parsed()) return cmd_check(cfg);
    return cmd_bench(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  }
}
