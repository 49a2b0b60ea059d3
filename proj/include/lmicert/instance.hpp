#pragma once

#include "lmicert/matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lmicert {

// Feasibility system <A_k, X>_F = b_k, X PSD.
struct SdpInstance {
  std::string name;
  std::size_t n = 0;
  std::vector<SymQ> A;
  std::vector<Rational> b;
  std::optional<SymQ> C;

  std::size_t m() const { return A.size(); }
  // Throws std::invalid_argument when sizes disagree.
  void validate() const;
  bool operator==(const SdpInstance& o) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<Rational> apply_map(const SdpInstance& inst, const SymQ& x);
std::vector<double> apply_map(const SdpInstance& inst, const SymD& x);

// Line format: '#' comments, "name <label>", "n <int>", "m <int>", "b <rat>...",
// "A <k> <i> <j> <rat>", "C <i> <j> <rat>"; indices 1-based with i <= j.
SdpInstance parse_instance(const std::string& text);
std::string serialize_instance(const SdpInstance& inst);
SdpInstance load_instance(const std::string& path);

struct RotationSpec {
  MatQ T;
  std::uint64_t seed = 0;
};

// Integer entries uniform in [-3,3], redrawn until det != 0.
RotationSpec make_rotation(std::size_t n, std::uint64_t seed);

// A_k -> T^T A_k T, b unchanged. Throws on singular T.
SdpInstance rotate_instance(const SdpInstance& inst, const RotationSpec& spec);

// T X T^T: maps a point of the rotated instance to the original one.
SymQ back_transform(const RotationSpec& spec, const SymQ& x);
SymD back_transform(const RotationSpec& spec, const SymD& x);
// T^{-1} X (T^{-1})^T: maps a point of the original instance to the rotated one.
SymQ forward_transform(const RotationSpec& spec, const SymQ& x);

SymQ congruence(const MatQ& t, const SymQ& x);  // t x t^T

}  // namespace lmicert
