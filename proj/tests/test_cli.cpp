#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "liftcal/value.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(LIFTCAL_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const char* name) { return std::string(LIFTCAL_SAMPLES_DIR) + "/" + name; }

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("liftcal_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

} // namespace

TEST(Cli, AnalyzeS1) {
  auto r = run("analyze " + sample("s1.imp"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "A & B: x=1\nA & !B: x=1\n!A & B: x=1\n");
}

TEST(Cli, AnalyzeAbstracted) {
  auto r = run("analyze " + sample("s2.imp") + " --abs 'proj(A) >> join'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Z1: x=top\nwhere Z1 = (A & B) | (A & !B)\n");
  auto p = run("analyze " + sample("s2.imp") + " --abs 'proj(A) >> join' --lattice constplus");
  EXPECT_EQ(p.out, "Z1: x=>=0\nwhere Z1 = (A & B) | (A & !B)\n");
}

TEST(Cli, AnalyzeInitBotAndDataflow) {
  auto r = run("analyze " + sample("s1prime.imp") + " --init bot");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "A & B: x=1\nA & !B: x=bot\n!A & B: x=1\n");
  auto d = run("analyze " + sample("s1.imp") + " --abs 'proj(A) >> join' --dataflow --format json");
  ASSERT_EQ(d.code, 0);
  json j = json::parse(d.out);
  ASSERT_TRUE(j.contains("dataflow"));
  EXPECT_EQ(j["dataflow"].size(), 7u);
  EXPECT_EQ(j["dataflow"][0]["out"][0]["store"]["x"], "1");
}

TEST(Cli, JsonSchemaAndValueRoundTrip) {
  for (const char* lat : {"const", "constplus"}) {
    auto r = run("analyze " + sample("s2.imp") + " --abs 'fignore(A)' --format json --lattice " + lat);
    ASSERT_EQ(r.code, 0);
    json j = json::parse(r.out);
    ASSERT_TRUE(j["configs"].is_array());
    ASSERT_TRUE(j["results"].is_array());
    ASSERT_TRUE(j["renames"].is_object());
    ASSERT_EQ(j["configs"].size(), j["results"].size());
    liftcal::Lattice l = std::string(lat) == "const" ? liftcal::Lattice::Const : liftcal::Lattice::ConstPlus;
    for (size_t i = 0; i < j["results"].size(); ++i) {
      const auto& row = j["results"][i];
      EXPECT_EQ(row["config"], j["configs"][i]);
      for (const auto& [var, lit] : row["store"].items()) {
        std::string text = lit.get<std::string>();
        EXPECT_EQ(liftcal::render_value(liftcal::parse_value(text, l)), text);
      }
    }
    EXPECT_EQ(j["results"][0]["store"]["x"], "top");
    EXPECT_EQ(j["results"][1]["store"]["x"], "1");
    EXPECT_EQ(j["renames"].size(), 2u);
  }
}

TEST(Cli, ReconfigureWritesProgramAndSidecar) {
  TempDir dir;
  auto out = dir / "out.imp";
  auto ren = dir / "out.ren";
  auto r = run("reconfigure " + sample("s1prime.imp") + " --abs '(proj(A) >> join) || proj(B)' -o " +
               out.string() + " --renames " + ren.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(out),
            "features Z1, A, B;\n"
            "model (Z1 & !A & !B) | (!Z1 & A & B) | (!Z1 & !A & B);\n"
            "begin\n"
            "  #if (Z1 | A) { x := x + 1 };\n"
            "  #if (Z1) {\n"
            "    if (0) { x := 1 } else { skip }\n"
            "  };\n"
            "  #if (B) { x := 1 }\n"
            "end\n");
  EXPECT_EQ(slurp(ren), "Z1 = (A & B) | (A & !B)\n");
}

TEST(Cli, ReconfigureProjTrueKeepsProgram) {
  auto r = run("reconfigure " + sample("s1.imp") + " --abs 'proj(true)'");
  ASSERT_EQ(r.code, 0);
  TempDir dir;
  auto once = dir / "once.imp";
  std::ofstream(once) << r.out;
  auto again = run("reconfigure " + once.string() + " --abs 'proj(true)'");
  EXPECT_EQ(again.out, r.out);
  EXPECT_NE(r.out.find("#if (A) { x := x + 1 };"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("model A | B;"), std::string::npos) << r.out;
}

// analyze --abs equals reconfigure then analyze, rows matched by config and
// renames matched through the sidecar.
TEST(Cli, CommutesThroughFiles) {
  TempDir dir;
  std::vector<std::string> programs;
  for (const auto& e : fs::directory_iterator(LIFTCAL_CORPUS_DIR)) programs.push_back(e.path().string());
  std::sort(programs.begin(), programs.end());
  size_t checked = 0;
  for (const auto& prog : programs) {
    for (const char* spec : {"join", "proj(A) >> join", "join || proj(A)", "fignore(A)", "proj(!A)"}) {
      auto direct = run("analyze " + prog + " --format json --lattice constplus --abs " + quote(spec));
      if (direct.code == 2) continue;  // spec names a feature the program lacks
      ASSERT_EQ(direct.code, 0) << prog << " " << spec;
      auto out = dir / "r.imp";
      auto ren = dir / "r.ren";
      auto rc = run("reconfigure " + prog + " --abs " + quote(spec) + " -o " + out.string() +
                    " --renames " + ren.string());
      ASSERT_EQ(rc.code, 0);
      auto via = run("analyze " + out.string() + " --format json --lattice constplus");
      ASSERT_EQ(via.code, 0);

      json a = json::parse(direct.out), b = json::parse(via.out);
      ASSERT_EQ(a["results"].size(), b["results"].size()) << prog << " " << spec;
      for (const auto& row : a["results"]) {
        auto it = std::find_if(b["results"].begin(), b["results"].end(),
                               [&](const json& r) { return r["config"] == row["config"]; });
        ASSERT_NE(it, b["results"].end()) << row["config"];
        for (const auto& [var, lit] : row["store"].items()) {
          std::string other = (*it)["store"].contains(var) ? (*it)["store"][var].get<std::string>() : "top";
          EXPECT_EQ(lit.get<std::string>(), other) << prog << " " << spec << " " << var;
        }
      }
      std::string sidecar;
      for (const auto& [name, meaning] : a["renames"].items()) {
        sidecar += name + " = " + meaning.get<std::string>() + "\n";
      }
      EXPECT_EQ(slurp(ren), sidecar);
      ++checked;
    }
  }
  EXPECT_GT(checked, 40u);
}

TEST(Cli, CheckAllPasses) {
  auto r = run("check --cases 500 --seed 7");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  auto j = run("check --cases 20 --seed 7 --format json");
  ASSERT_EQ(j.code, 0);
  json doc = json::parse(j.out);
  EXPECT_TRUE(doc["ok"].get<bool>());
  EXPECT_EQ(doc["properties"].size(), 7u);
}

TEST(Cli, CheckSingleInstance) {
  auto r = run("check " + sample("s1.imp") + " --abs join --cases 100");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS soundness"), std::string::npos);
  EXPECT_NE(r.out.find("PASS commutation"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("check " + sample("s1.imp") + " --abs 'pro('").code, 1);
  EXPECT_EQ(run("analyze " + sample("s1.imp") + " --abs 'proj(C)'").code, 2);
  EXPECT_EQ(run("analyze /nonexistent/file.imp").code, 1);
  EXPECT_EQ(run("analyze " + sample("s1.imp") + " --lattice interval").code, 1);
  EXPECT_EQ(run("reconfigure " + sample("s1.imp")).code, 1);
  EXPECT_EQ(run("check " + sample("s1.imp")).code, 1);
  EXPECT_EQ(run("bench --features 21").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("").code, 1);

  TempDir dir;
  auto bad = dir / "bad.imp";
  std::ofstream(bad) << "features A; begin x := ; end";
  EXPECT_EQ(run("analyze " + bad.string()).code, 1);
  auto undeclared = dir / "undeclared.imp";
  std::ofstream(undeclared) << "features A; begin #if (B) { skip } end";
  EXPECT_EQ(run("analyze " + undeclared.string()).code, 2);
}

TEST(Cli, BenchPrintsTable) {
  auto r = run("bench --features 4 --seed 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("lifted_ms"), std::string::npos);
  EXPECT_NE(r.out.find("      16"), std::string::npos) << r.out;
}
