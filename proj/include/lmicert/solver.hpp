#pragma once

#include <string>

namespace lmicert {

constexpr double kDefaultSolverTimeout = 600.0;

enum class SolverStatus { Ok, Timeout, Failed };

struct SolverRun {
  SolverStatus status = SolverStatus::Failed;
  std::string output;   // contents of the output file when the solver exited with status 0
  std::string message;
  double seconds = 0.0;
};

// Runs `binary -f <input> -o <output>` in a fresh temporary directory, killing it after timeout_s.
SolverRun run_solver(const std::string& binary, const std::string& input, double timeout_s = kDefaultSolverTimeout);

}  // namespace lmicert
