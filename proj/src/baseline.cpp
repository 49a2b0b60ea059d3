#include "lmicert/baseline.hpp"

#include "lmicert/certifier.hpp"
#include "lmicert/linalg.hpp"
#include "lmicert/rur.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace lmicert {

std::string to_string(ChartOutcome o) {
  switch (o) {
    case ChartOutcome::PsdFound: return "PSD_FOUND";
    case ChartOutcome::NoPsd: return "NO_PSD";
    case ChartOutcome::SolverFail: return "SOLVER_FAIL";
    case ChartOutcome::Timeout: return "TIMEOUT";
    default: return "EXPORTED";
  }
}

ChartSystem chart_system(const SdpInstance& inst, const std::vector<std::size_t>& iota) {
  ChartSystem cs;
  cs.chart = make_chart(inst.n, iota);
  IncidenceSystem inc = build_incidence(inst, cs.chart);
  Reduction red = reduce(inc, {});
  cs.system = std::move(red.system);
  cs.x_expressions = std::move(red.x_expressions);
  cs.consistent = red.consistent;
  return cs;
}

PolySystem build_chart_system(const SdpInstance& inst, const std::vector<std::size_t>& iota) {
  return chart_system(inst, iota).system;
}

std::vector<std::vector<std::size_t>> enumerate_charts(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i + left <= n; ++i) {
      cur.push_back(i);
      rec(i + 1, left - 1);
      cur.pop_back();
    }
  };
  for (std::size_t r = 0; r < n; ++r) rec(0, r);
  return out;
}

Propagation propagate_linear(const PolySystem& f) {
  Propagation p;
  std::vector<MultiPoly> polys = f.polys;
  std::vector<std::string> labels = f.labels;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t t = 0; t < polys.size(); ++t) {
      const MultiPoly& g = polys[t];
      if (g.total_degree() > 1) continue;
      if (g.is_constant()) {
        if (g.constant_term() != 0) {
          p.inconsistent = true;
          p.reason = labels[t] + " reduces to the nonzero constant " + to_string(g.constant_term());
          return p;
        }
        polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(t));
        labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(t));
        progress = true;
        break;
      }
      std::size_t v = 0;
      while (!g.uses(v)) ++v;
      MultiPoly expr = (g - MultiPoly::variable(f.vars, v) * g.linear_coefficient(v)) * (-1 / g.linear_coefficient(v));
      for (auto& [w, e] : p.solved) e = e.substitute(v, expr);
      p.solved[v] = expr;
      polys.erase(polys.begin() + static_cast<std::ptrdiff_t>(t));
      labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(t));
      for (auto& h : polys) h = h.substitute(v, expr);
      progress = true;
      break;
    }
  }
  p.remaining = PolySystem(f.vars);
  for (std::size_t t = 0; t < polys.size(); ++t)
    if (!polys[t].is_zero()) p.remaining.add(polys[t], labels[t]);
  return p;
}

ChartOutcome ChartEnumeration::summary() const {
  if (found) return ChartOutcome::PsdFound;
  for (ChartOutcome o : {ChartOutcome::Exported, ChartOutcome::SolverFail, ChartOutcome::Timeout})
    for (const auto& c : charts)
      if (c.outcome == o) return o;
  return ChartOutcome::NoPsd;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string chart_label(const std::vector<std::size_t>& iota) {
  std::string s = "{";
  for (std::size_t i = 0; i < iota.size(); ++i) s += (i ? "," : "") + std::to_string(iota[i] + 1);
  return s + "}";
}

// Restricts a system to the variables it uses.
PolySystem compact(const PolySystem& f) {
  std::vector<std::string> used;
  for (std::size_t v = 0; v < f.vars.size(); ++v)
    for (const auto& p : f.polys)
      if (p.uses(v)) {
        used.push_back(f.vars[v]);
        break;
      }
  PolySystem out(used);
  for (std::size_t t = 0; t < f.size(); ++t) out.add(f.polys[t].with_vars(used), f.labels[t]);
  return out;
}

void process_chart(const SdpInstance& inst, const BaselineOptions& opts, ChartRecord& rec, double budget_left) {
  ChartSystem cs = chart_system(inst, rec.iota);
  if (!cs.consistent) {
    rec.outcome = ChartOutcome::NoPsd;
    rec.detail = "map constraints inconsistent on this chart";
    return;
  }
  Propagation prop = propagate_linear(cs.system);
  if (prop.inconsistent) {
    rec.outcome = ChartOutcome::NoPsd;
    rec.detail = "linear propagation: " + prop.reason;
    return;
  }
  std::vector<MultiPoly> xs = cs.x_expressions;
  for (auto& e : xs)
    for (const auto& [v, expr] : prop.solved) e = e.substitute(v, expr);

  if (prop.remaining.size() == 0) {
    bool all_constant = true;
    for (const auto& e : xs) all_constant = all_constant && e.is_constant();
    if (!all_constant) {
      rec.outcome = ChartOutcome::SolverFail;
      rec.detail = "solution set is an affine family of positive dimension; no isolated critical points";
      return;
    }
    SymQ x(inst.n);
    for (std::size_t p = 0; p < xs.size(); ++p) {
      auto [i, j] = hvec_entry(inst.n, p);
      x.set(i, j, xs[p].constant_term());
    }
    Inertia in = inertia(x.dense());
    rec.outcome = in.negative == 0 ? ChartOutcome::PsdFound : ChartOutcome::NoPsd;
    rec.detail = "linear propagation determines X uniquely; " +
                 std::string(in.negative == 0 ? "PSD" : "not PSD") + " (exact inertia)";
    return;
  }

  PolySystem f = compact(prop.remaining);
  PhiU pu = random_phi_u(f.vars, f.size(), opts.seed);
  PolySystem lag = lagrange_system(f, pu.phi, pu.u);
  rec.exported = export_solver_input(lag);
  if (opts.solver_bin.empty()) {
    rec.outcome = ChartOutcome::Exported;
    rec.detail = std::to_string(f.size()) + " polynomials in " + std::to_string(f.vars.size()) +
                 " variables after linear propagation; no solver configured";
    return;
  }
  double limit = opts.chart_timeout_s;
  if (budget_left > 0) limit = std::min(limit, budget_left);
  SolverRun run = run_solver(opts.solver_bin, rec.exported, limit);
  if (run.status == SolverStatus::Timeout) {
    rec.outcome = ChartOutcome::Timeout;
    rec.detail = run.message;
    return;
  }
  if (run.status != SolverStatus::Ok) {
    rec.outcome = ChartOutcome::SolverFail;
    rec.detail = run.message;
    return;
  }
  try {
    Rur rur = parse_rur(run.output);
    if (rur.kind == Rur::Kind::Empty) {
      rec.outcome = ChartOutcome::NoPsd;
      rec.detail = "solver reports no complex solutions";
      return;
    }
    if (rur.kind == Rur::Kind::PositiveDimensional) {
      rec.outcome = ChartOutcome::SolverFail;
      rec.detail = "solver reports a positive-dimensional ideal";
      return;
    }
    std::vector<MultiPoly> over_f;
    for (const auto& e : xs) over_f.push_back(e.with_vars(f.vars));
    RurPoints pts = rur_real_points(rur);
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
      std::map<std::string, Interval> vals;
      for (std::size_t v = 0; v < rur.var_names.size(); ++v) vals[rur.var_names[v]] = pts.points[i].coords[v];
      auto x = x_enclosure(over_f, inst.n, vals);
      if (!x) continue;
      PsdScreen s = psd_screen(*x, cs.chart.iota);
      if (s.verdict == PsdVerdict::Accepted) {
        rec.outcome = ChartOutcome::PsdFound;
        rec.detail = "real point " + std::to_string(i) + ": " + s.reason;
        return;
      }
      if (s.verdict == PsdVerdict::Rejected) ++rejected;
    }
    if (rejected == pts.points.size()) {
      rec.outcome = ChartOutcome::NoPsd;
      rec.detail = std::to_string(pts.points.size()) + " real points, all rejected by the PSD screen";
    } else {
      rec.outcome = ChartOutcome::SolverFail;
      rec.detail = "PSD screen undecided on some real point";
    }
  } catch (const std::exception& e) {
    rec.outcome = ChartOutcome::SolverFail;
    rec.detail = std::string("unusable solver output: ") + e.what();
  }
}

}  // namespace

ChartEnumeration run_baseline(const SdpInstance& inst, const BaselineOptions& opts) {
  ChartEnumeration out;
  out.instance = inst.name;
  auto start = Clock::now();
  for (const auto& iota : enumerate_charts(inst.n)) {
    ChartRecord rec;
    rec.r = iota.size();
    rec.iota = iota;
    double used = std::chrono::duration<double>(Clock::now() - start).count();
    if (opts.budget_s > 0 && used >= opts.budget_s) {
      rec.outcome = ChartOutcome::Timeout;
      rec.detail = "overall budget exhausted";
      out.charts.push_back(rec);
      continue;
    }
    auto t = Clock::now();
    try {
      process_chart(inst, opts, rec, opts.budget_s > 0 ? opts.budget_s - used : 0.0);
    } catch (const std::exception& e) {
      rec.outcome = ChartOutcome::SolverFail;
      rec.detail = std::string("chart ") + chart_label(iota) + ": " + e.what();
    }
    rec.seconds = std::chrono::duration<double>(Clock::now() - t).count();
    out.charts.push_back(rec);
    if (rec.outcome == ChartOutcome::PsdFound) {
      out.found = out.charts.size() - 1;
      break;
    }
  }
  return out;
}

std::string radical_script(const PolySystem& f, const std::string& title) {
  std::ostringstream out;
  out << "-- " << title << "\n";
  out << "R = QQ[";
  for (std::size_t i = 0; i < f.vars.size(); ++i) out << (i ? "," : "") << f.vars[i];
  out << "];\n";
  out << "I = ideal(";
  for (std::size_t i = 0; i < f.polys.size(); ++i) out << (i ? ",\n  " : "\n  ") << f.polys[i].primitive().to_string();
  out << "\n);\n";
  out << "J = radical I;\n";
  out << "print toString mingens J;\n";
  out << "print dim J;\n";
  return out.str();
}

}  // namespace lmicert
