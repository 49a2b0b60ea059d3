#pragma once

#include "lmicert/instance.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lmicert {

struct CorpusEntry {
  SdpInstance instance;
  std::size_t n = 0;
  std::size_t r_min = 0;
  std::optional<std::size_t> r_max;  // unknown for the Pataki clean family and HeNaSa
};

// The 20 weakly feasible benchmark instances, in table order.
const std::vector<CorpusEntry>& corpus();
// Throws std::out_of_range for an unknown name.
const CorpusEntry& corpus_entry(const std::string& name);
std::vector<std::string> corpus_names();

// A printed linear term coef * x_ij (1-based, any order of i and j).
struct PrintedTerm {
  std::size_t i, j;
  Rational coef;
};
// Encodes sum(coef * x_ij) = rhs with the Frobenius convention:
// a printed "2 x_13" becomes A(1,3) = A(3,1) = 1.
SymQ constraint_matrix(std::size_t n, const std::vector<PrintedTerm>& terms);

}  // namespace lmicert
