#include "lmicert/baseline.hpp"
#include "lmicert/bench.hpp"
#include "lmicert/certifier.hpp"
#include "lmicert/corpus.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace lmicert;

namespace {

constexpr int kCertified = 0;
constexpr int kInconclusive = 2;
constexpr int kUsage = 64;
constexpr int kInternal = 70;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SdpInstance resolve_instance(const std::string& spec) {
  if (spec.rfind("corpus:", 0) == 0) {
    try {
      return corpus_entry(spec.substr(7)).instance;
    } catch (const std::out_of_range&) {
      throw UsageError("unknown corpus instance '" + spec.substr(7) + "'");
    }
  }
  if (!fs::exists(spec)) throw UsageError("no such file: " + spec);
  try {
    return load_instance(spec);
  } catch (const ParseError& e) {
    throw UsageError(spec + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(spec + ": " + e.what());
  }
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string read_file(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw UsageError("no such file: " + p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string chart_tag(const std::vector<std::size_t>& iota) {
  std::string s = "r" + std::to_string(iota.size()) + "-";
  if (iota.empty()) return s + "none";
  for (std::size_t i = 0; i < iota.size(); ++i) s += (i ? "_" : "") + std::to_string(iota[i] + 1);
  return s;
}

std::string system_text(const PolySystem& f) {
  if (f.size() == 0) {
    std::string s;
    for (std::size_t i = 0; i < f.vars.size(); ++i) s += (i ? "," : "") + f.vars[i];
    return s + "\n0\n";
  }
  return export_solver_input(f);
}

struct Common {
  double tol = 1e-9;
  double eps1 = 0, eps2 = 0;
  std::uint64_t seed = 1;
  double timeout_s = 0;
  std::string solver_bin;
  std::string out;

  void add(CLI::App* app, const std::string& out_help) {
    app->add_option("--tol", tol, "frontend feasibility tolerance")->envname("LMICERT_TOL");
    app->add_option("--eps1", eps1, "rank threshold for the chart (default sqrt(tol))")->envname("LMICERT_EPS1");
    app->add_option("--eps2", eps2, "rank threshold for fixed variables (default 1e3*eps1)")->envname("LMICERT_EPS2");
    app->add_option("--seed", seed, "master seed")->envname("LMICERT_SEED");
    app->add_option("--timeout-s", timeout_s, "time budget in seconds (0: none)")->envname("LMICERT_TIMEOUT_S");
    app->add_option("--solver-bin", solver_bin, "external exact solver invoked as BIN -f IN -o OUT")
        ->envname("LMICERT_SOLVER_BIN");
    app->add_option("--out", out, out_help)->envname("LMICERT_OUT");
  }

  CertifyOptions certify() const {
    CertifyOptions o;
    o.tol = tol;
    if (eps1 > 0) o.eps1 = eps1;
    if (eps2 > 0) o.eps2 = eps2;
    o.seed = seed;
    o.timeout_s = timeout_s;
    o.solver_bin = solver_bin;
    if (timeout_s > 0) o.solver_timeout_s = std::min(o.solver_timeout_s, timeout_s);
    return o;
  }
};

int cmd_certify(const std::string& spec, const Common& c) {
  SdpInstance inst = resolve_instance(spec);
  CertifyOutcome out = certify_hybrid(inst, c.certify());
  fs::path dest = c.out.empty() ? fs::path(inst.name + ".cert.json") : fs::path(c.out);
  write_file(dest, to_json(out.certificate));
  const Certificate& cert = out.certificate;
  std::cout << "instance   " << inst.name << "\n";
  std::cout << "status     " << to_string(cert.status) << (out.timed_out ? " (time budget exhausted)" : "") << "\n";
  std::cout << "method     " << to_string(cert.method) << "\n";
  if (out.frontend) std::cout << "rank       " << cert.r << " (frontend detected " << out.frontend->detected_rank << ")\n";
  if (cert.eig_margin) std::cout << "eig_margin " << to_string(*cert.eig_margin) << " ~ " << to_double(*cert.eig_margin) << "\n";
  for (const auto& d : out.diagnostics) std::cout << "  [" << d.stage << "] " << d.detail << "\n";
  std::cout << "time       " << out.total_seconds << " s (frontend " << out.frontend_seconds << " s)\n";
  std::cout << "certificate written to " << dest.string() << "\n";
  return out.certified() ? kCertified : kInconclusive;
}

int cmd_verify(const std::string& cert_path, const std::string& spec) {
  Certificate cert;
  try {
    cert = certificate_from_json(read_file(cert_path));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  SdpInstance inst = resolve_instance(spec.empty() ? "corpus:" + cert.instance : spec);
  ReplayResult r = replay(cert, inst);
  for (const auto& c : r.checks) std::cout << "ok   " << c << "\n";
  if (!r.ok) {
    std::cout << "FAIL " << r.failure << "\n";
    return kInconclusive;
  }
  std::cout << "certificate verified\n";
  return kCertified;
}

int cmd_export(const std::string& spec, const std::string& mode, const Common& c) {
  SdpInstance inst = resolve_instance(spec);
  fs::path dir = c.out.empty() ? fs::path("export") : fs::path(c.out);
  std::vector<fs::path> written;
  if (mode == "charts" || mode == "radical-script") {
    for (const auto& iota : enumerate_charts(inst.n)) {
      PolySystem f = build_chart_system(inst, iota);
      std::string tag = inst.name + ".chart-" + chart_tag(iota);
      if (mode == "charts") {
        written.push_back(dir / (tag + ".ms"));
        write_file(written.back(), system_text(f));
      } else {
        written.push_back(dir / (tag + ".m2"));
        write_file(written.back(), radical_script(f, inst.name + " chart " + chart_tag(iota)));
      }
    }
  } else {
    CertifyOptions o = c.certify();
    FrontendOptions fo;
    fo.tol = o.tol;
    fo.seed = o.seed;
    fo.eps1 = o.epsilon1();
    FrontendResult fe = find_feasible_point(inst, fo);
    if (!fe.converged) std::cerr << "warning: frontend did not converge (" << fe.message << ")\n";
    ChartSelection chart = select_chart(fe.X_tilde, o.epsilon1());
    Linearized lin = build_linearized(inst, chart);
    FixedSkeleton sk = select_fixed_vars(evaluate_linearized(lin, chart.Y_tilde), o.epsilon2(), fe.X_tilde);
    FixedSystem fsys = build_fixed_system(inst, chart, sk);
    if (mode == "fixed-system") {
      written.push_back(dir / (inst.name + ".fixed.ms"));
      write_file(written.back(), system_text(fsys.system));
    } else {
      PhiU pu = random_phi_u(fsys.system.vars, fsys.system.size(), o.seed);
      written.push_back(dir / (inst.name + ".lagrange-seed" + std::to_string(o.seed) + ".ms"));
      write_file(written.back(), export_solver_input(lagrange_system(fsys.system, pu.phi, pu.u)));
    }
  }
  for (const auto& p : written) std::cout << p.string() << "\n";
  return 0;
}

int cmd_bench(const Common& c, const std::vector<std::uint64_t>& rot, bool no_clean, bool no_baseline,
              std::size_t workers, const std::vector<std::string>& only) {
  BenchOptions b;
  b.certify = c.certify();
  b.baseline.solver_bin = c.solver_bin;
  b.baseline.seed = c.seed;
  if (c.timeout_s > 0) {
    b.baseline.chart_timeout_s = c.timeout_s;
    b.baseline.budget_s = c.timeout_s;
  }
  b.rotation_seeds = rot;
  b.clean = !no_clean;
  b.run_baseline = !no_baseline;
  b.workers = workers;
  for (const auto& name : only) {
    try {
      corpus_entry(name);
    } catch (const std::out_of_range&) {
      throw UsageError("unknown corpus instance '" + name + "'");
    }
  }
  b.only = only;
  BenchReport rep = run_bench(b);
  std::string prefix = c.out.empty() ? "bench" : c.out;
  write_file(prefix + ".tsv", to_tsv(rep));
  std::string table = to_table(rep);
  write_file(prefix + ".txt", table);
  std::cout << table << "report written to " << prefix << ".tsv and " << prefix << ".txt\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify feasibility of linear matrix inequalities"};
  app.require_subcommand(1);

  Common cc, ce, cb;
  std::string instance, cert_path, mode = "fixed-system";
  std::vector<std::uint64_t> rot;
  bool no_clean = false, no_baseline = false;
  std::size_t workers = 0;
  std::vector<std::string> only;

  auto* certify = app.add_subcommand("certify", "run the hybrid certifier on one instance");
  certify->add_option("instance", instance, "instance file or corpus:NAME")->required();
  cc.add(certify, "certificate path (default <name>.cert.json)");

  auto* verify = app.add_subcommand("verify", "replay a stored certificate");
  verify->add_option("certificate", cert_path, "certificate JSON")->required();
  verify->add_option("instance", instance, "instance file or corpus:NAME (default: the certificate's name)");

  auto* exp = app.add_subcommand("export", "write solver inputs or radical scripts");
  exp->add_option("instance", instance, "instance file or corpus:NAME")->required();
  exp->add_option("--mode", mode, "fixed-system, charts, lagrange or radical-script")
      ->check(CLI::IsMember({"fixed-system", "charts", "lagrange", "radical-script"}));
  ce.add(exp, "output directory (default ./export)");

  auto* bench = app.add_subcommand("bench", "run the corpus and write a comparison report");
  cb.add(bench, "report path prefix (default ./bench)");
  bench->add_option("--rotation-seeds", rot, "rotated variants, one per seed")->delimiter(',');
  bench->add_flag("--no-clean", no_clean, "skip the clean instances");
  bench->add_flag("--no-baseline", no_baseline, "skip chart enumeration");
  bench->add_option("--workers", workers, "worker threads (0: hardware concurrency)");
  bench->add_option("--only", only, "restrict to these corpus names")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*certify) return cmd_certify(instance, cc);
    if (*verify) return cmd_verify(cert_path, instance);
    if (*exp) return cmd_export(instance, mode, ce);
    if (*bench) return cmd_bench(cb, rot, no_clean, no_baseline, workers, only);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
