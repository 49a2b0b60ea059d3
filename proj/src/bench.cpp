#include "lmicert/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace lmicert {

namespace {

struct Job {
  const CorpusEntry* entry;
  std::optional<std::uint64_t> rotation;
};

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

BenchRow run_job(const Job& job, const BenchOptions& opts) {
  const CorpusEntry& e = *job.entry;
  BenchRow row;
  row.name = e.instance.name;
  row.n = e.n;
  row.r_min = e.r_min;
  row.r_max = e.r_max;
  row.rotation_seed = job.rotation;
  row.variant = job.rotation ? "T" + std::to_string(*job.rotation) : "I";

  SdpInstance inst = e.instance;
  std::optional<RotationSpec> rot;
  if (job.rotation) {
    rot = make_rotation(inst.n, *job.rotation);
    inst = rotate_instance(inst, *rot);
  }
  CertifyOptions co = opts.certify;
  co.parallel_frontend = false;
  try {
    CertifyOutcome out = certify_hybrid(inst, co);
    row.hybrid_time_s = out.total_seconds;
    row.frontend_time_s = out.frontend_seconds;
    if (out.frontend) row.r_max_detected = out.frontend->detected_rank;
    row.hybrid_status = out.timed_out && !out.certified() ? "TIMEOUT" : to_string(out.certificate.status);
    row.hybrid_method = to_string(out.certificate.method);
    if (!out.certified() && !out.diagnostics.empty()) row.note = out.diagnostics.back().stage + ": " + out.diagnostics.back().detail;
    if (out.certified() && rot) {
      if (auto x = x_midpoint(out.certificate)) {
        auto ax = apply_map(e.instance, back_transform(*rot, *x));
        double s = 0;
        for (std::size_t k = 0; k < ax.size(); ++k) {
          double d = to_double(Rational(ax[k] - e.instance.b[k]));
          s += d * d;
        }
        row.back_residual = std::sqrt(s);
      }
    }
  } catch (const std::exception& ex) {
    row.hybrid_status = "ERROR";
    row.note = ex.what();
  }

  if (opts.run_baseline) {
    auto t = std::chrono::steady_clock::now();
    try {
      ChartEnumeration en = run_baseline(inst, opts.baseline);
      row.baseline_status = to_string(en.summary());
    } catch (const std::exception& ex) {
      row.baseline_status = "ERROR";
      if (row.note.empty()) row.note = std::string("baseline: ") + ex.what();
    }
    row.baseline_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
  } else {
    row.baseline_status = "-";
  }
  return row;
}

}  // namespace

BenchReport run_bench(const BenchOptions& opts) {
  std::vector<Job> jobs;
  for (const auto& e : corpus()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), e.instance.name) == opts.only.end()) continue;
    if (opts.clean) jobs.push_back({&e, std::nullopt});
    for (auto s : opts.rotation_seeds) jobs.push_back({&e, s});
  }
  BenchReport rep;
  rep.config.push_back("tol=" + sci(opts.certify.tol));
  rep.config.push_back("eps1=" + sci(opts.certify.epsilon1()));
  rep.config.push_back("eps2=" + sci(opts.certify.epsilon2()));
  rep.config.push_back("seed=" + std::to_string(opts.certify.seed));
  std::string seeds;
  for (auto s : opts.rotation_seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
  rep.config.push_back("rotation_seeds=" + (seeds.empty() ? std::string("none") : seeds));
  rep.config.push_back("solver=" + (opts.certify.solver_bin.empty() ? std::string("none") : opts.certify.solver_bin));
  rep.config.push_back("timeout_s=" + fixed3(opts.certify.timeout_s));

  rep.rows.resize(jobs.size());
  std::size_t workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(jobs.size(), 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) rep.rows[i] = run_job(jobs[i], opts);
    });
  for (auto& t : pool) t.join();
  return rep;
}

std::string to_tsv(const BenchReport& r) {
  std::ostringstream out;
  for (const auto& c : r.config) out << "# " << c << "\n";
  out << "name\tvariant\trotation_seed\tn\tr_min\tr_max\tr_max_detected\thybrid_status\thybrid_method\t"
         "hybrid_time_s\tfrontend_time_s\tbaseline_status\tbaseline_time_s\tback_residual\tnote\n";
  for (const auto& row : r.rows) {
    out << row.name << "\t" << row.variant << "\t" << (row.rotation_seed ? std::to_string(*row.rotation_seed) : "-")
        << "\t" << row.n << "\t" << row.r_min << "\t" << (row.r_max ? std::to_string(*row.r_max) : "-") << "\t"
        << row.r_max_detected << "\t" << row.hybrid_status << "\t" << row.hybrid_method << "\t"
        << fixed3(row.hybrid_time_s) << "\t" << fixed3(row.frontend_time_s) << "\t" << row.baseline_status << "\t"
        << fixed3(row.baseline_time_s) << "\t" << (row.back_residual ? sci(*row.back_residual) : "-") << "\t"
        << row.note << "\n";
  }
  return out.str();
}

std::string to_table(const BenchReport& r) {
  std::vector<std::vector<std::string>> cells{
      {"instance", "var", "n", "r_min", "r_max", "det", "hybrid", "t [frontend]", "baseline", "t"}};
  for (const auto& row : r.rows)
    cells.push_back({row.name, row.variant, std::to_string(row.n), std::to_string(row.r_min),
                     row.r_max ? std::to_string(*row.r_max) : "-", std::to_string(row.r_max_detected),
                     row.hybrid_status, fixed3(row.hybrid_time_s) + " [" + fixed3(row.frontend_time_s) + "]",
                     row.baseline_status, fixed3(row.baseline_time_s)});
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::ostringstream out;
  for (std::size_t l = 0; l < cells.size(); ++l) {
    for (std::size_t c = 0; c < cells[l].size(); ++c) {
      out << cells[l][c];
      if (c + 1 < cells[l].size()) out << std::string(width[c] - cells[l][c].size() + 2, ' ');
    }
    out << "\n";
    if (l == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total - 2, '-') << "\n";
    }
  }
  return out.str();
}

}  // namespace lmicert
