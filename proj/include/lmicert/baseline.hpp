#pragma once

#include "lmicert/instance.hpp"
#include "lmicert/pipeline.hpp"
#include "lmicert/solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lmicert {

// EXPORTED: the chart system survived linear propagation and was written out, but no solver is configured.
enum class ChartOutcome { PsdFound, NoPsd, SolverFail, Timeout, Exported };
std::string to_string(ChartOutcome o);

struct ChartSystem {
  ChartSelection chart;
  PolySystem system;                      // map constraints eliminated; kernel entries of X (Y; I)
  std::vector<MultiPoly> x_expressions;   // X entries over system.vars, hvec order
  bool consistent = true;                 // map constraints alone are solvable
};

ChartSystem chart_system(const SdpInstance& inst, const std::vector<std::size_t>& iota);
PolySystem build_chart_system(const SdpInstance& inst, const std::vector<std::size_t>& iota);

// All charts with |iota| = 0..n-1, by size then lexicographically.
std::vector<std::vector<std::size_t>> enumerate_charts(std::size_t n);

// Repeatedly solves degree-1 polynomials for one variable and substitutes.
struct Propagation {
  bool inconsistent = false;
  PolySystem remaining;                          // nonlinear leftovers over the original variable list
  std::map<std::size_t, MultiPoly> solved;       // variable index -> expression in the other variables
  std::string reason;
};

Propagation propagate_linear(const PolySystem& f);

struct BaselineOptions {
  std::string solver_bin;
  double chart_timeout_s = kDefaultSolverTimeout;
  double budget_s = 0.0;  // overall; 0 means none
  std::uint64_t seed = 1;
};

struct ChartRecord {
  std::size_t r = 0;
  std::vector<std::size_t> iota;
  ChartOutcome outcome = ChartOutcome::Exported;
  std::string detail;
  double seconds = 0.0;
  std::string exported;  // solver input for charts that reached the export stage
};

struct ChartEnumeration {
  std::string instance;
  std::vector<ChartRecord> charts;
  std::optional<std::size_t> found;  // index into charts of the first PSD_FOUND

  // PSD_FOUND if any chart succeeded; else EXPORTED, SOLVER_FAIL or TIMEOUT if any chart ended so; else NO_PSD.
  ChartOutcome summary() const;
};

ChartEnumeration run_baseline(const SdpInstance& inst, const BaselineOptions& opts = {});

// Macaulay2 script computing the radical of the chart ideal and its minimal generators.
std::string radical_script(const PolySystem& f, const std::string& title);

}  // namespace lmicert
