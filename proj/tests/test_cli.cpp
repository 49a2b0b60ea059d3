#include "testkit.hpp"

#include "lmicert/certifier.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace lmicert;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lmicert-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) {
    std::string cmd = "cd '" + dir_.string() + "' && '" LMICERT_BIN "' " + args + " 2>&1";
    CliRun r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string read(const fs::path& rel) {
    std::ifstream f(dir_ / rel, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  void write(const fs::path& rel, const std::string& text) { std::ofstream(dir_ / rel, std::ios::binary) << text; }

  fs::path dir_;
};

const char* kDruWo = "corpus:DruWo2017-2.3.2P";

}  // namespace

TEST_F(Cli, CertifyWritesACertificateThatVerifies) {
  CliRun r = run(std::string("certify ") + kDruWo);
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("CERTIFIED_FEASIBLE"), std::string::npos);
  ASSERT_TRUE(fs::exists(dir_ / "DruWo2017-2.3.2P.cert.json"));
  Certificate c = certificate_from_json(read("DruWo2017-2.3.2P.cert.json"));
  EXPECT_EQ(c.status, CertStatus::CertifiedFeasible);

  CliRun v = run("verify DruWo2017-2.3.2P.cert.json");
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NE(v.out.find("certificate verified"), std::string::npos);

  // a tampered point no longer satisfies the constraints
  ASSERT_TRUE(c.point);
  c.point->set(1, 1, c.point->operator()(1, 1) + 1);
  write("tampered.json", to_json(c));
  CliRun t = run(std::string("verify tampered.json ") + kDruWo);
  EXPECT_EQ(t.code, 2) << t.out;
  EXPECT_NE(t.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, CertifyWithExplicitOutputPathAndInstanceFile) {
  write("druwo.sdp", serialize_instance(corpus_entry("DruWo2017-2.3.2P").instance));
  CliRun r = run("certify druwo.sdp --out certs/d.json --seed 3");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "certs" / "d.json"));
}

TEST_F(Cli, InconclusiveExitCode) {
  // trace(X) = -1 has no PSD solution
  write("neg.sdp", "name neg\nn 2\nm 1\nb -1\nA 1 1 1 1\nA 1 2 2 1\n");
  CliRun r = run("certify neg.sdp");
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("INCONCLUSIVE"), std::string::npos);
  Certificate c = certificate_from_json(read("neg.cert.json"));
  EXPECT_EQ(c.status, CertStatus::Inconclusive);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 64);
  EXPECT_EQ(run("frobnicate").code, 64);
  EXPECT_EQ(run("certify corpus:NoSuchInstance").code, 64);
  EXPECT_EQ(run("certify missing.sdp").code, 64);
  write("bad.sdp", "n 2\nm 1\nb 1\nA 1 3 3 1\n");
  CliRun bad = run("certify bad.sdp");
  EXPECT_EQ(bad.code, 64);
  EXPECT_NE(bad.out.find("line 4"), std::string::npos) << bad.out;
  EXPECT_EQ(run(std::string("export ") + kDruWo + " --mode nonsense").code, 64);
  write("junk.json", "{not json");
  EXPECT_EQ(run("verify junk.json").code, 64);
  EXPECT_EQ(run("bench --only NoSuchInstance --no-baseline").code, 64);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, ExportChartsWritesOneFilePerChart) {
  CliRun r = run(std::string("export ") + kDruWo + " --mode charts");
  ASSERT_EQ(r.code, 0) << r.out;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "export")) {
    ++files;
    EXPECT_EQ(e.path().extension(), ".ms");
  }
  EXPECT_EQ(files, 7u);
  EXPECT_TRUE(fs::exists(dir_ / "export" / "DruWo2017-2.3.2P.chart-r0-none.ms"));
  EXPECT_TRUE(fs::exists(dir_ / "export" / "DruWo2017-2.3.2P.chart-r2-2_3.ms"));
  // the first rank-one chart is the printed one
  PolySystem f = parse_solver_input(read("export/DruWo2017-2.3.2P.chart-r1-1.ms"));
  EXPECT_TRUE(testkit::same_up_to_scaling(f.polys, testkit::printed_chart_system(1), f.vars));
}

TEST_F(Cli, ExportRadicalScripts) {
  CliRun r = run(std::string("export ") + kDruWo + " --mode radical-script --out m2");
  ASSERT_EQ(r.code, 0) << r.out;
  std::string s = read("m2/DruWo2017-2.3.2P.chart-r1-1.m2");
  EXPECT_NE(s.find("radical I"), std::string::npos);
}

TEST_F(Cli, ExportFixedSystemMatchesTheLibrary) {
  CliRun r = run(std::string("export ") + kDruWo + " --mode fixed-system");
  ASSERT_EQ(r.code, 0) << r.out;
  std::string text = read("export/DruWo2017-2.3.2P.fixed.ms");
  PolySystem f = parse_solver_input(text);
  EXPECT_EQ(f.vars, (std::vector<std::string>{"x22", "x23", "y1", "y2"}));
  EXPECT_EQ(f.size(), 3u);

  const auto& inst = corpus_entry("DruWo2017-2.3.2P").instance;
  CertifyOptions o;
  FrontendOptions fo;
  fo.eps1 = o.epsilon1();
  FrontendResult fe = find_feasible_point(inst, fo);
  ChartSelection chart = select_chart(fe.X_tilde, o.epsilon1());
  Linearized lin = build_linearized(inst, chart);
  FixedSkeleton sk = select_fixed_vars(evaluate_linearized(lin, chart.Y_tilde), o.epsilon2(), fe.X_tilde);
  EXPECT_EQ(text, export_solver_input(build_fixed_system(inst, chart, sk).system));
}

TEST_F(Cli, LagrangeExportIsDeterministic) {
  std::string args = std::string("export ") + kDruWo + " --mode lagrange --seed 7";
  ASSERT_EQ(run(args + " --out a").code, 0);
  ASSERT_EQ(run(args + " --out b").code, 0);
  std::string a = read("a/DruWo2017-2.3.2P.lagrange-seed7.ms"), b = read("b/DruWo2017-2.3.2P.lagrange-seed7.ms");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  PolySystem l = parse_solver_input(a);
  EXPECT_EQ(l.size(), 8u);
  EXPECT_EQ(l.vars.size(), 8u);
  ASSERT_EQ(run(std::string("export ") + kDruWo + " --mode lagrange --seed 8 --out c").code, 0);
  EXPECT_NE(read("c/DruWo2017-2.3.2P.lagrange-seed8.ms"), a);
}

TEST_F(Cli, BenchSingleInstance) {
  CliRun r = run("bench --only DruWo2017-2.3.2P,Gupta2013-12.3P --no-baseline --out rep");
  ASSERT_EQ(r.code, 0) << r.out;
  std::string tsv = read("rep.tsv");
  EXPECT_NE(tsv.find("DruWo2017-2.3.2P"), std::string::npos);
  EXPECT_NE(tsv.find("Gupta2013-12.3P"), std::string::npos);
  EXPECT_EQ(tsv.find("Helmberg"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "rep.txt"));
}
