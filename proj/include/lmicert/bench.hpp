#pragma once

#include "lmicert/baseline.hpp"
#include "lmicert/certifier.hpp"
#include "lmicert/corpus.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lmicert {

struct BenchOptions {
  CertifyOptions certify;
  BaselineOptions baseline;
  bool run_baseline = true;
  bool clean = true;
  std::vector<std::uint64_t> rotation_seeds;  // one rotated variant per seed
  std::vector<std::string> only;              // restrict to these corpus names
  std::size_t workers = 0;                    // 0: hardware concurrency
};

struct BenchRow {
  std::string name;
  std::string variant;  // "I" for clean, "T<seed>" for rotated
  std::optional<std::uint64_t> rotation_seed;
  std::size_t n = 0, r_min = 0;
  std::optional<std::size_t> r_max;
  std::size_t r_max_detected = 0;
  std::string hybrid_status;  // CERTIFIED_FEASIBLE, INCONCLUSIVE, TIMEOUT or ERROR
  std::string hybrid_method;
  double hybrid_time_s = 0, frontend_time_s = 0;
  std::string baseline_status;  // chart summary, or "-" when not run
  double baseline_time_s = 0;
  std::optional<double> back_residual;  // ||A(T X_mid T^T) - b|| on the original instance, rotated rows
  std::string note;
};

struct BenchReport {
  std::vector<std::string> config;
  std::vector<BenchRow> rows;
};

BenchReport run_bench(const BenchOptions& opts);
std::string to_tsv(const BenchReport& r);
std::string to_table(const BenchReport& r);

}  // namespace lmicert
