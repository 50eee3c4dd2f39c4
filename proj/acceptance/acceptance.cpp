// One line per acceptance criterion: "PASS <id>  <detail>" or "FAIL <id>  <detail>".
// Positional patterns select criteria by id prefix; a leading '!' excludes.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "liftcal/abstracted.hpp"
#include "liftcal/bench.hpp"
#include "liftcal/lifted.hpp"
#include "liftcal/oracle.hpp"
#include "liftcal/reconfig.hpp"

using namespace liftcal;
namespace fs = std::filesystem;

namespace {

constexpr double kGoldenBudgetMs = 1000.0;
constexpr size_t kPropertyCases = 1000;
constexpr uint64_t kPropertySeed = 2024;
constexpr double kPropertyBudgetS = 60.0;
constexpr size_t kPerfFeatures = 14;
constexpr double kPerfJoinBudgetMs = 100.0;
constexpr double kPerfMinSpeedup = 50.0;
constexpr std::array<size_t, 4> kPerfSweep{8, 10, 12, 14};
constexpr size_t kCorpusSize = 20;

constexpr const char* kS1 =
    "features A, B; model A | B; begin x := 0; #if (A) { x := x + 1 }; #if (B) { x := 1 } end";
constexpr const char* kS2 =
    "features A, B; model A | B; begin x := 0; #if (A) { x := x + 1 }; #if (B) { x := x - 1 } end";
constexpr const char* kS1Prime =
    "features A, B; model A | B; begin #if (A) { x := x + 1 }; #if (B) { x := 1 } end";

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::function<Outcome()> run;
};

using Strings = std::vector<std::string>;

std::string num(double x) {
  std::ostringstream ss;
  ss.precision(4);
  ss << x;
  return ss.str();
}

std::string join_strings(const Strings& xs) {
  std::string out = "(";
  for (size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out + ")";
}

Strings column(const LiftedStore& d, std::string_view var) {
  Strings out;
  auto v = d.var_index(var);
  for (size_t k = 0; k < d.size(); ++k) out.push_back(v ? render_value(d.at(k, *v)) : "top");
  return out;
}

Strings formulas(const ConfigSet& K) {
  Strings out;
  for (size_t j = 0; j < K.size(); ++j) out.push_back(K.formula(j).render());
  return out;
}

Strings meanings(const AbstractedConfigs& ac) {
  Strings out;
  for (size_t j = 0; j < ac.size(); ++j) out.push_back(ac.meaning_formula(j).render());
  return out;
}

struct Subject {
  Program program;
  std::shared_ptr<const ConfigSet> K;

  explicit Subject(const char* src)
      : program(parse_program(src)), K(std::make_shared<const ConfigSet>(valid_configs(program.model))) {}

  LiftedStore top(Lattice l = Lattice::Const) const { return LiftedStore::top(l, K, {"x"}); }
  LiftedStore lifted(Lattice l = Lattice::Const) const { return analyze_lifted(*program.body, top(l)); }
  Abstraction abs(std::string_view spec) const { return parse_abstraction(spec, program.model.space); }
  LiftedStore dbar(std::string_view spec, Lattice l) const {
    AbstractionPlan plan(abs(spec), K);
    return analyze_abstracted(*program.body, plan.output(),
                              LiftedStore::top(l, plan.output().configs, {"x"}));
  }
};

// Accumulates mismatches so one criterion can cover several values.
class Expect {
 public:
  void eq(const std::string& what, const Strings& got, const Strings& want) {
    if (got != want) misses_.push_back(what + " = " + join_strings(got) + ", want " + join_strings(want));
  }
  void eq(const std::string& what, const std::string& got, const std::string& want) {
    if (got != want) misses_.push_back(what + " = \"" + got + "\", want \"" + want + "\"");
  }
  void ok(const std::string& what, bool cond) {
    if (!cond) misses_.push_back(what);
  }
  Outcome done(std::string summary) const {
    if (misses_.empty()) return {true, std::move(summary)};
    std::string d;
    for (const auto& m : misses_) d += (d.empty() ? "" : "; ") + m;
    return {false, d};
  }

 private:
  Strings misses_;
};

std::string flat(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '\n') c = ' ';
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out += c;
  }
  return out;
}

Outcome timed(const std::function<Outcome()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o = f();
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d.precision(3);
  d << o.detail << " [" << ms << " ms]";
  if (ms >= kGoldenBudgetMs) return {false, d.str() + " over budget"};
  return {o.pass, d.str()};
}

// ---------------------------------------------------------------- goldens

Outcome golden_lifted() {
  Expect e;
  Subject s1(kS1), s2(kS2);
  e.eq("K", formulas(*s1.K), {"A & B", "A & !B", "!A & B"});
  e.eq("S1", column(s1.lifted(), "x"), {"1", "1", "1"});
  e.eq("S2", column(s2.lifted(), "x"), {"0", "1", "-1"});
  return e.done("S1 (1,1,1), S2 (0,1,-1)");
}

Outcome golden_join_proj() {
  Expect e;
  Subject s1(kS1), s2(kS2);
  auto join = s1.abs("join");
  e.eq("join(S2)", column(alpha_apply(join, *s2.K, s2.lifted()), "x"), {"top"});
  e.eq("join(S1)", column(alpha_apply(join, *s1.K, s1.lifted()), "x"), {"1"});
  auto ac = abstract_configs(join, *s1.K);
  e.eq("join configs", formulas(*ac.configs), {"Z1"});
  e.eq("join meaning", meanings(ac), {"(A & B) | (A & !B) | (!A & B)"});
  auto pa = abstract_configs(s1.abs("proj(A)"), *s1.K);
  e.eq("proj(A) configs", formulas(*pa.configs), {"A & B", "A & !B"});
  e.eq("proj(A)(S2)", column(alpha_apply(s2.abs("proj(A)"), *s2.K, s2.lifted()), "x"), {"0", "1"});
  e.eq("proj(!A)(S2)", column(alpha_apply(s2.abs("proj(!A)"), *s2.K, s2.lifted()), "x"), {"-1"});
  return e.done("join (top),(1); proj(A) (0,1); proj(!A) (-1)");
}

Outcome golden_sequential() {
  Expect e;
  Subject s1(kS1), s2(kS2);
  auto seq = s1.abs("proj(A) >> join");
  e.eq("seq(S1)", column(alpha_apply(seq, *s1.K, s1.lifted()), "x"), {"1"});
  e.eq("seq(S2)", column(alpha_apply(seq, *s2.K, s2.lifted()), "x"), {"top"});
  e.eq("seq meaning", meanings(abstract_configs(seq, *s1.K)), {"(A & B) | (A & !B)"});
  auto prod = abstract_configs(s1.abs("(proj(A) >> join) || proj(B)"), *s1.K);
  e.eq("product space", prod.space().names(), {"Z1", "A", "B"});
  e.eq("product configs", formulas(*prod.configs), {"Z1 & !A & !B", "!Z1 & A & B", "!Z1 & !A & B"});
  return e.done("proj(A)>>join (1),(top); product K' 3 configs");
}

Outcome golden_fignore() {
  Expect e;
  Subject s2(kS2);
  auto fa = s2.abs("fignore(A)"), fb = s2.abs("fignore(B)");
  e.eq("fignore(A)", column(alpha_apply(fa, *s2.K, s2.lifted()), "x"), {"top", "1"});
  e.eq("fignore(A) meanings", meanings(abstract_configs(fa, *s2.K)), {"(A & B) | (!A & B)", "A & !B"});
  e.eq("fignore(B)", column(alpha_apply(fb, *s2.K, s2.lifted()), "x"), {"top", "-1"});
  e.eq("fignore(B) meanings", meanings(abstract_configs(fb, *s2.K)), {"(A & B) | (A & !B)", "!A & B"});
  return e.done("fignore(A) (top,1); fignore(B) (top,-1)");
}

Outcome golden_dbar_const() {
  Expect e;
  e.eq("S1", column(Subject(kS1).dbar("proj(A) >> join", Lattice::Const), "x"), {"1"});
  e.eq("S2", column(Subject(kS2).dbar("proj(A) >> join", Lattice::Const), "x"), {"top"});
  return e.done("S1 (1), S2 (top)");
}

Outcome golden_constplus(const char* spec, const char* want) {
  Expect e;
  e.eq(spec, column(Subject(kS2).dbar(spec, Lattice::ConstPlus), "x"), Strings{want});
  return e.done(std::string(spec) + " (" + want + ")");
}

Outcome golden_reconfigure() {
  Expect e;
  Subject s(kS1Prime);
  auto body = [&](const char* spec) {
    return flat(pretty(*reconfigure(s.program, s.abs(spec)).program.body));
  };
  e.eq("proj(A)>>join", body("proj(A) >> join"),
       "#if (Z1) { x := x + 1 }; #if (Z1) { if (0) { x := 1 } else { skip } }");
  e.eq("proj(B)>>join", body("proj(B) >> join"),
       "#if (Z1) { if (0) { x := x + 1 } else { skip } }; #if (Z1) { x := 1 }");
  auto prod = reconfigure(s.program, s.abs("(proj(A) >> join) || proj(B)"));
  e.eq("product", flat(pretty(*prod.program.body)),
       "#if (Z1 | A) { x := x + 1 }; #if (Z1) { if (0) { x := 1 } else { skip } }; #if (B) { x := 1 }");
  auto K2 = valid_configs(prod.program.model);
  Strings got;
  for (const char* k : {"Z1 & !A & !B", "!Z1 & A & B", "!Z1 & !A & B"}) {
    if (K2.find(parse_featexp(k, prod.program.model.space))) got.push_back(k);
  }
  e.ok("product K' has " + std::to_string(K2.size()) + " configs", K2.size() == 3 && got.size() == 3);
  return e.done("three rewrites match");
}

Outcome golden_trace() {
  Subject s(kS1);
  auto rc = reconfigure(s.program, s.abs("proj(A) >> join"));
  auto K = std::make_shared<const ConfigSet>(valid_configs(rc.program.model));
  std::vector<StmtPtr> steps;
  flatten_seq(rc.program.body, steps);
  LiftedStore cur = LiftedStore::top(Lattice::Const, K, {"x"});
  Strings trace{column(cur, "x").at(0)};
  for (const auto& st : steps) {
    cur = analyze_lifted(*st, cur);
    trace.push_back(column(cur, "x").at(0));
  }
  Expect e;
  e.eq("trace", trace, {"top", "0", "1", "1"});
  return e.done("top -> 0 -> 1 -> 1");
}

// ---------------------------------------------------------------- properties

// check_all order; the first entry also covers every Galois law per constructor.
const std::array<const char*, 7> kPropertyIds{"galois", "fignore_expand", "soundness", "monotonicity",
                                              "commutation", "dataflow", "oracle_equiv"};

struct PropertyRun {
  std::vector<PropertyReport> reports;
  double seconds = 0;
};

const PropertyRun& properties() {
  static const PropertyRun run = [] {
    auto t0 = std::chrono::steady_clock::now();
    PropertyRun r;
    r.reports = check_all(kPropertySeed, kPropertyCases);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return run;
}

Outcome property(size_t i) {
  const PropertyReport& r = properties().reports.at(i);
  std::string d = std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases);
  if (r.cases < kPropertyCases) return {false, d + " below " + std::to_string(kPropertyCases) + " cases"};
  if (!r.passed()) return {false, d + "\n" + r.counterexample};
  return {true, d};
}

Outcome property_budget() {
  double s = properties().seconds;
  return {s < kPropertyBudgetS, num(s) + " s total, budget " + num(kPropertyBudgetS) + " s"};
}

// ---------------------------------------------------------------- performance

struct Sweep {
  std::vector<BenchRow> rows;
};

const Sweep& sweep() {
  static const Sweep s = [] {
    Sweep out;
    for (size_t n : kPerfSweep) out.rows.push_back(run_bench(n));
    return out;
  }();
  return s;
}

const BenchRow& row_for(size_t n) {
  for (const auto& r : sweep().rows) {
    if (r.features == n) return r;
  }
  throw std::logic_error("sweep missing N=" + std::to_string(n));
}

Outcome perf_join_time() {
  const BenchRow& r = row_for(kPerfFeatures);
  return {r.join_ms < kPerfJoinBudgetMs,
          "N=14 join " + num(r.join_ms) + " ms, budget " + num(kPerfJoinBudgetMs) + " ms"};
}

Outcome perf_speedup() {
  const BenchRow& r = row_for(kPerfFeatures);
  return {r.join_speedup() >= kPerfMinSpeedup,
          "N=14 speedup " + num(r.join_speedup()) + "x, need " + num(kPerfMinSpeedup) + "x"};
}

Outcome perf_monotone() {
  std::string d;
  bool ok = true;
  double prev = 0;
  for (const auto& r : sweep().rows) {
    d += (d.empty() ? "" : ", ") + std::string("N=") + std::to_string(r.features) + ": " +
         num(r.join_speedup()) + "x";
    ok = ok && r.join_speedup() >= prev;
    prev = r.join_speedup();
  }
  return {ok, d};
}

// ---------------------------------------------------------------- format

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> corpus() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(LIFTCAL_CORPUS_DIR)) {
    if (e.path().extension() == ".imp") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome format_roundtrip() {
  Expect e;
  auto files = corpus();
  e.ok("corpus has " + std::to_string(files.size()) + " programs", files.size() == kCorpusSize);
  for (const auto& f : files) {
    std::string once = pretty(parse_program(slurp(f)));
    e.ok(f.filename().string() + " not a fixed point", pretty(parse_program(once)) == once);
  }
  return e.done(std::to_string(files.size()) + " programs are fixed points");
}

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = std::string(LIFTCAL_CLI) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, out};
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// Shape of analyze --format json, and every value literal parses back to itself.
std::optional<std::string> json_problem(const nlohmann::json& j, Lattice l) {
  if (!j.is_object() || !j.contains("configs") || !j.contains("results") || !j.contains("renames")) {
    return "missing top-level keys";
  }
  if (!j["configs"].is_array() || !j["results"].is_array() || !j["renames"].is_object()) return "wrong types";
  if (j["configs"].size() != j["results"].size()) return "configs/results length differ";
  for (size_t i = 0; i < j["results"].size(); ++i) {
    const auto& row = j["results"][i];
    if (!row.is_object() || row.value("config", nlohmann::json()) != j["configs"][i]) return "row config mismatch";
    if (!row.contains("store") || !row["store"].is_object()) return "row without store";
    for (const auto& [var, lit] : row["store"].items()) {
      if (!lit.is_string()) return "non-string value for " + var;
      std::string text = lit.get<std::string>();
      if (render_value(parse_value(text, l)) != text) return "literal " + text + " does not round-trip";
    }
  }
  for (const auto& [name, meaning] : j["renames"].items()) {
    if (!meaning.is_string()) return "rename " + name + " is not a string";
  }
  return std::nullopt;
}

Outcome format_json() {
  Expect e;
  size_t docs = 0;
  Strings inputs;
  for (const auto& f : corpus()) inputs.push_back(f.string());
  for (const char* s : {"s1.imp", "s2.imp", "s1prime.imp"}) inputs.push_back(std::string(LIFTCAL_SAMPLES_DIR) + "/" + s);
  for (const auto& file : inputs) {
    for (const char* spec : {"", "join", "fignore(A)"}) {
      for (Lattice l : {Lattice::Const, Lattice::ConstPlus}) {
        std::string args = "analyze " + file + " --format json --lattice " +
                           (l == Lattice::Const ? "const" : "constplus");
        if (*spec) args += std::string(" --abs '") + spec + "'";
        auto [code, out] = run_cli(args);
        if (code == 2) continue;  // spec names a feature this program lacks
        if (code != 0) {
          e.ok(args + " exited " + std::to_string(code), false);
          continue;
        }
        try {
          if (auto p = json_problem(nlohmann::json::parse(out), l)) e.ok(args + ": " + *p, false);
        } catch (const std::exception& ex) {
          e.ok(args + ": " + ex.what(), false);
        }
        ++docs;
      }
    }
  }
  e.ok("no documents checked", docs > 0);
  return e.done(std::to_string(docs) + " documents valid");
}

std::vector<Criterion> criteria() {
  std::vector<Criterion> out{
      {"golden.lifted", [] { return timed(golden_lifted); }},
      {"golden.join_proj", [] { return timed(golden_join_proj); }},
      {"golden.sequential", [] { return timed(golden_sequential); }},
      {"golden.fignore", [] { return timed(golden_fignore); }},
      {"golden.abstracted_const", [] { return timed(golden_dbar_const); }},
      {"golden.constplus_join_a", [] { return timed([] { return golden_constplus("proj(A) >> join", ">=0"); }); }},
      {"golden.constplus_join_b", [] { return timed([] { return golden_constplus("proj(B) >> join", "<=0"); }); }},
      {"golden.reconfigure", [] { return timed(golden_reconfigure); }},
      {"golden.trace", [] { return timed(golden_trace); }},
  };
  for (size_t i = 0; i < kPropertyIds.size(); ++i) {
    out.push_back({std::string("property.") + kPropertyIds[i], [i] { return property(i); }});
  }
  out.push_back({"property.runtime", property_budget});
  out.push_back({"perf.join_time", perf_join_time});
  out.push_back({"perf.speedup", perf_speedup});
  out.push_back({"perf.monotone", perf_monotone});
  out.push_back({"format.roundtrip", format_roundtrip});
  out.push_back({"format.json", format_json});
  return out;
}

bool selected(const std::string& id, const Strings& patterns) {
  bool any_include = false, included = false;
  for (const auto& p : patterns) {
    if (!p.empty() && p[0] == '!') {
      if (id.starts_with(p.substr(1))) return false;
    } else {
      any_include = true;
      included = included || id.starts_with(p);
    }
  }
  return !any_include || included;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  Strings patterns;
  bool list = false;
  app.add_option("patterns", patterns, "id prefixes to run; prefix with ! to exclude");
  app.add_flag("--list", list, "print criterion ids and exit");
  CLI11_PARSE(app, argc, argv);

  int failed = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (!selected(c.id, patterns)) continue;
    if (list) {
      std::cout << c.id << "\n";
      continue;
    }
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << "  " << o.detail << std::endl;
  }
  if (!list && ran == 0) {
    std::cerr << "no criteria match\n";
    return 1;
  }
  return failed == 0 ? 0 : 1;
}
