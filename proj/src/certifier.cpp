#include "lmicert/certifier.hpp"

#include "lmicert/strategies.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace lmicert {

double CertifyOptions::epsilon1() const { return eps1 ? *eps1 : std::sqrt(tol); }
double CertifyOptions::epsilon2() const { return eps2 ? *eps2 : 1e3 * epsilon1(); }

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string join(const std::vector<std::size_t>& v, std::size_t offset = 1) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + offset);
  return "{" + s + "}";
}

std::vector<std::string> x_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t p = 0; p < hvec_length(n); ++p) {
    auto [i, j] = hvec_entry(n, p);
    names.push_back(x_name(n, i, j));
  }
  return names;
}

Box point_box(const SymQ& x) {
  Box b;
  for (const auto& v : x.lower()) b.emplace_back(v);
  return b;
}

// Values of the incidence variables at (X~, Y~).
std::map<std::string, double> incidence_point(const ChartSelection& chart, const SymD& x_tilde) {
  std::map<std::string, double> pt;
  const std::size_t n = chart.n;
  for (std::size_t p = 0; p < hvec_length(n); ++p) {
    auto [i, j] = hvec_entry(n, p);
    pt[x_name(n, i, j)] = x_tilde(i, j);
  }
  for (std::size_t a = 0; a < chart.r; ++a)
    for (std::size_t c = 0; c < n - chart.r; ++c) pt[y_name(chart, chart.iota[a], c)] = chart.Y_tilde(a, c);
  return pt;
}

class Run {
 public:
  Run(const SdpInstance& inst, const CertifyOptions& opts, CertifyOutcome& out)
      : inst_(inst), opts_(opts), out_(out), start_(Clock::now()) {
    out_.certificate.instance = inst.name;
    out_.certificate.n = inst.n;
    out_.certificate.seed = opts.seed;
  }

  void note(const std::string& stage, const std::string& detail, Clock::time_point t) {
    out_.diagnostics.push_back({stage, detail, since(t)});
  }

  bool expired() {
    if (opts_.timeout_s > 0 && since(start_) > opts_.timeout_s) {
      if (!out_.timed_out) out_.diagnostics.push_back({"deadline", "overall budget exhausted", since(start_)});
      out_.timed_out = true;
    }
    return out_.timed_out;
  }

  void from_point(const SymD& x_tilde) {
    Certificate& cert = out_.certificate;
    auto t = Clock::now();
    ChartSelection chart;
    try {
      chart = select_chart(x_tilde, opts_.epsilon1());
    } catch (const ChartError& e) {
      note("chart", e.what(), t);
      return;
    }
    cert.r = chart.r;
    cert.iota = chart.iota;
    note("chart", "iota=" + join(chart.iota) + " r=" + std::to_string(chart.r) +
                      " kernel residual=" + std::to_string(chart.kernel_residual), t);
    cert.narrative.push_back("chart iota=" + join(chart.iota) + " selected by rank-revealing columns of X~ at eps1");

    t = Clock::now();
    Linearized lin = build_linearized(inst_, chart);
    MatD q = evaluate_linearized(lin, chart.Y_tilde);
    FixedSkeleton sk = select_fixed_vars(q, opts_.epsilon2(), x_tilde, opts_.rational_bound);
    cert.J_prime = sk.J_prime;
    cert.fixed_values = sk.fixed_values;
    FixedSystem fs = build_fixed_system(inst_, chart, sk);
    note("fixed-system", "J'=" + join(sk.J_prime) + ", " + std::to_string(fs.system.size()) + " polynomials in " +
                             std::to_string(fs.system.vars.size()) + " variables" +
                             (fs.consistent ? "" : " (map constraints inconsistent after fixing)"), t);
    cert.narrative.push_back("fixed hvec positions J'=" + join(sk.J_prime) + " chosen by rank-revealing columns of Q~ at eps2");

    if (opts_.exact_point && !expired() && exact_point(chart, x_tilde, sk)) return;
    if (opts_.algebraic_curve && !expired() && curve(chart, x_tilde, sk)) return;
    if (opts_.lagrange && !expired() && fs.consistent && lagrange(chart, x_tilde, fs)) return;
  }

 private:
  bool exact_point(const ChartSelection& chart, const SymD& x_tilde, const FixedSkeleton& sk) {
    auto t = Clock::now();
    std::string why;
    auto proof = exact_point_strategy(inst_, chart, x_tilde, sk.J, sk.J_prime, &why);
    note("exact-point", why, t);
    if (!proof) return false;
    Certificate& cert = out_.certificate;
    cert.status = CertStatus::CertifiedFeasible;
    cert.method = CertMethod::ExactPoint;
    cert.point = proof->X;
    cert.box_vars = x_names(inst_.n);
    cert.box = point_box(proof->X);
    cert.eig_margin = proof->eig_margin;
    cert.narrative.push_back("Y~ rationalized with denominators <= " + std::to_string(proof->y_bound));
    cert.narrative.push_back("A(X) = b and X (Y; I) = 0 solved exactly; free parameters taken from X~");
    cert.narrative.push_back("S = X[iota,iota] positive definite with lambda_min(S) >= " + to_string(proof->eig_margin));
    cert.narrative.push_back("X = [I, -Y]^T S [I, -Y] hence X is PSD of rank r and lies in the feasible set");
    return true;
  }

  bool curve(const ChartSelection& chart, const SymD& x_tilde, const FixedSkeleton& sk) {
    auto t = Clock::now();
    std::string why;
    auto proof = algebraic_curve_strategy(inst_, chart, x_tilde, sk.J_prime, sk.fixed_values, &why);
    note("algebraic-curve", why, t);
    if (!proof) return false;
    Certificate& cert = out_.certificate;
    cert.status = CertStatus::CertifiedFeasible;
    cert.method = CertMethod::AlgebraicCurve;
    cert.x0 = proof->X0;
    cert.x1 = proof->X1;
    cert.g = proof->g;
    cert.t = proof->t;
    cert.eig_margin = proof->eig_margin;
    cert.box_vars = x_names(inst_.n);
    IntervalMatrix enc = curve_enclosure(proof->X0, proof->X1, proof->t);
    cert.box.clear();
    for (std::size_t p = 0; p < hvec_length(inst_.n); ++p) {
      auto [i, j] = hvec_entry(inst_.n, p);
      cert.box.push_back(enc(i, j));
    }
    cert.narrative.push_back("affine line X0 + t X1 with A(X0) = b and A(X1) = 0");
    cert.narrative.push_back("g = " + proof->g.to_string() + " divides every entry of det(S) W - R adj(S) R^T");
    cert.narrative.push_back("Sturm sequence isolates one root of g in [" + to_string(proof->t.lo()) + ", " +
                             to_string(proof->t.hi()) + "]");
    cert.narrative.push_back("S(t) positive definite on that interval with lambda_min >= " + to_string(proof->eig_margin));
    cert.narrative.push_back("Schur complement zero and S positive definite hence X(t) PSD of rank r");
    return true;
  }

  bool lagrange(const ChartSelection& chart, const SymD& x_tilde, const FixedSystem& fs) {
    if (fs.system.size() == 0) {
      out_.diagnostics.push_back({"lagrange", "fixed system is empty", 0.0});
      return false;
    }
    auto values = incidence_point(chart, x_tilde);
    std::vector<double> x0;
    for (const auto& v : fs.system.vars) x0.push_back(values.at(v));
    const std::size_t c = fs.system.size();
    for (std::size_t attempt = 0; attempt <= opts_.retries && !expired(); ++attempt) {
      auto t = Clock::now();
      std::uint64_t seed = opts_.seed + attempt;
      PhiU pu = random_phi_u(fs.system.vars, c, seed);
      PolySystem lag = lagrange_system(fs.system, pu.phi, pu.u);
      InitialZ z = initial_z(fs.system, pu.phi, pu.u, x0);
      std::vector<double> start = x0;
      start.insert(start.end(), z.z.begin(), z.z.end());
      std::ostringstream detail;
      detail << "seed " << seed << ": z residual " << z.residual;
      if (z.redraw_u) detail << " (u nearly orthogonal to the multiplier space)";
      NewtonResult nr = newton_refine(lag, start, 50);
      detail << ", Newton residual " << nr.residual << (nr.singular ? " (singular Jacobian)" : "");
      bool done = false;
      if (!nr.singular && std::isfinite(nr.residual)) {
        KrawczykResult kr = krawczyk_certify(lag, nr.x, opts_.krawczyk);
        detail << ", " << kr.message;
        if (kr.certified) {
          PsdCertification psd = psd_certify(kr.box, lag.vars, chart, fs.x_expressions);
          detail << ", PSD: " << psd.reason;
          if (psd.verdict == CertStatus::CertifiedFeasible) {
            record_lagrange(lag, pu, seed, kr.box, *psd.eig_margin, fs, CertMethod::Krawczyk);
            done = true;
          }
        }
      }
      note("krawczyk", detail.str(), t);
      if (done) return true;
      if (!opts_.solver_bin.empty() && !expired() && solver(lag, pu, seed, chart, fs)) return true;
    }
    return false;
  }

  bool solver(const PolySystem& lag, const PhiU& pu, std::uint64_t seed, const ChartSelection& chart,
              const FixedSystem& fs) {
    auto t = Clock::now();
    double budget = opts_.solver_timeout_s;
    if (opts_.timeout_s > 0) budget = std::min(budget, std::max(0.0, opts_.timeout_s - since(start_)));
    SolverRun run = run_solver(opts_.solver_bin, export_solver_input(lag), budget);
    if (run.status != SolverStatus::Ok) {
      note("solver", run.message, t);
      return false;
    }
    try {
      Rur rur = parse_rur(run.output);
      if (rur.kind != Rur::Kind::ZeroDimensional) {
        note("solver", rur.kind == Rur::Kind::Empty ? "no solutions" : "positive-dimensional solution set", t);
        return false;
      }
      RurPoints pts = rur_real_points(rur);
      for (std::size_t i = 0; i < pts.points.size(); ++i) {
        std::map<std::string, Interval> vals;
        for (std::size_t v = 0; v < rur.var_names.size(); ++v) vals[rur.var_names[v]] = pts.points[i].coords[v];
        auto x = x_enclosure(fs.x_expressions, chart.n, vals);
        if (!x) continue;
        PsdScreen s = psd_screen(*x, chart.iota);
        if (s.verdict != PsdVerdict::Accepted) continue;
        Box box;
        for (const auto& v : lag.vars) box.push_back(vals.count(v) ? vals[v] : Interval(0));
        record_lagrange(lag, pu, seed, box, *s.margin, fs, CertMethod::Rur);
        out_.certificate.rur_text = run.output;
        out_.certificate.rur_index = i;
        out_.certificate.narrative.push_back("real point " + std::to_string(i) + " of the solver's parametrization");
        note("solver", "point " + std::to_string(i) + " accepted: " + s.reason, t);
        return true;
      }
      note("solver", std::to_string(pts.points.size()) + " real points, none accepted by the PSD screen", t);
    } catch (const std::exception& e) {
      note("solver", std::string("unusable solver output: ") + e.what(), t);
    }
    return false;
  }

  void record_lagrange(const PolySystem& lag, const PhiU& pu, std::uint64_t seed, const Box& box,
                       const Rational& margin, const FixedSystem& fs, CertMethod method) {
    Certificate& cert = out_.certificate;
    cert.status = CertStatus::CertifiedFeasible;
    cert.method = method;
    cert.seed = seed;
    cert.u = pu.u;
    cert.phi.clear();
    for (std::size_t i = 0; i < fs.system.vars.size(); ++i) cert.phi.push_back(pu.phi.linear_coefficient(i));
    cert.system_vars = lag.vars;
    cert.system_polys.clear();
    for (const auto& p : lag.polys) cert.system_polys.push_back(p.to_string());
    cert.x_vars = fs.system.vars;
    cert.x_expressions.clear();
    for (const auto& e : fs.x_expressions) cert.x_expressions.push_back(e.to_string());
    cert.box_vars = lag.vars;
    cert.box = box;
    cert.eig_margin = margin;
    cert.bits = method == CertMethod::Krawczyk ? opts_.krawczyk.bits : 0;
    cert.narrative.push_back("Lagrange system over the fixed system with (phi, u) drawn from seed " + std::to_string(seed));
    if (method == CertMethod::Krawczyk)
      cert.narrative.push_back("Krawczyk operator maps the box strictly into itself: unique zero in the box");
    cert.narrative.push_back("S = X[iota,iota] positive definite over the box with lambda_min >= " + to_string(margin));
    cert.narrative.push_back("X (Y; I) = 0 with (Y; I) of full column rank hence X is PSD of rank r");
  }

  const SdpInstance& inst_;
  const CertifyOptions& opts_;
  CertifyOutcome& out_;
  Clock::time_point start_;
};

}  // namespace

CertifyOutcome certify_from_point(const SdpInstance& inst, const SymD& x_tilde, const CertifyOptions& opts) {
  CertifyOutcome out;
  auto t = Clock::now();
  Run(inst, opts, out).from_point(x_tilde);
  out.total_seconds = since(t);
  return out;
}

CertifyOutcome certify_hybrid(const SdpInstance& inst, const CertifyOptions& opts) {
  CertifyOutcome out;
  auto t = Clock::now();
  Run run(inst, opts, out);
  FrontendOptions fo;
  fo.tol = opts.tol;
  fo.seed = opts.seed;
  fo.eps1 = opts.epsilon1();
  fo.parallel = opts.parallel_frontend;
  try {
    out.frontend = find_feasible_point(inst, fo);
  } catch (const std::exception& e) {
    run.note("frontend", e.what(), t);
    out.frontend_seconds = out.total_seconds = since(t);
    return out;
  }
  out.frontend_seconds = since(t);
  const FrontendResult& fe = *out.frontend;
  {
    std::ostringstream d;
    d << "residual " << fe.residual << ", min eigenvalue " << fe.min_eig << ", detected rank " << fe.detected_rank
      << (fe.converged ? "" : " (not converged: " + fe.message + ")");
    out.diagnostics.push_back({"frontend", d.str(), out.frontend_seconds});
  }
  if (!fe.converged) {
    out.total_seconds = since(t);
    return out;
  }
  out.certificate.narrative.push_back("frontend point with residual " + std::to_string(fe.residual) +
                                      " and detected rank " + std::to_string(fe.detected_rank));
  if (!run.expired()) run.from_point(fe.X_tilde);
  out.total_seconds = since(t);
  return out;
}

PsdCertification psd_certify(const Box& box, const std::vector<std::string>& box_vars, const ChartSelection& chart,
                             const std::vector<MultiPoly>& x_expressions) {
  PsdCertification out;
  if (box.size() != box_vars.size()) throw std::invalid_argument("box and variable list differ in length");
  std::map<std::string, Interval> vals;
  for (std::size_t i = 0; i < box.size(); ++i) vals[box_vars[i]] = box[i];
  auto x = x_enclosure(x_expressions, chart.n, vals);
  if (!x) {
    out.reason = "box does not determine every entry of X";
    return out;
  }
  PsdScreen s = psd_screen(*x, chart.iota);
  out.reason = s.reason;
  if (s.verdict == PsdVerdict::Accepted && s.margin && *s.margin > 0) {
    out.verdict = CertStatus::CertifiedFeasible;
    out.eig_margin = s.margin;
  } else if (s.verdict == PsdVerdict::Accepted) {
    out.reason = "no positive margin on the chart block";
  }
  return out;
}

std::string export_solver_input(const PolySystem& f) {
  if (f.polys.empty()) throw std::invalid_argument("empty system");
  std::ostringstream out;
  for (std::size_t i = 0; i < f.vars.size(); ++i) out << (i ? "," : "") << f.vars[i];
  out << "\n0\n";
  for (std::size_t i = 0; i < f.polys.size(); ++i) {
    out << f.polys[i].primitive().to_string();
    out << (i + 1 < f.polys.size() ? ",\n" : "\n");
  }
  return out.str();
}

PolySystem parse_solver_input(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("missing variable line");
  std::vector<std::string> vars;
  std::stringstream vs(line);
  for (std::string v; std::getline(vs, v, ',');) vars.push_back(v);
  if (!std::getline(in, line) || line != "0") throw std::invalid_argument("expected characteristic 0 on line 2");
  PolySystem f(vars);
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::stringstream ps(rest);
  std::size_t k = 0;
  for (std::string p; std::getline(ps, p, ',');) {
    std::size_t a = p.find_first_not_of(" \n\t"), b = p.find_last_not_of(" \n\t");
    if (a == std::string::npos) continue;
    f.add(parse_polynomial(p.substr(a, b - a + 1), vars), "poly " + std::to_string(++k));
  }
  return f;
}

}  // namespace lmicert
