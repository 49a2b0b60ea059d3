#include "lmicert/corpus.hpp"

#include <stdexcept>

namespace lmicert {

SymQ constraint_matrix(std::size_t n, const std::vector<PrintedTerm>& terms) {
  SymQ a(n);
  for (const auto& t : terms) {
    if (t.i < 1 || t.j < 1 || t.i > n || t.j > n) throw std::out_of_range("printed term index out of range");
    std::size_t i = t.i - 1, j = t.j - 1;
    Rational v = i == j ? t.coef : t.coef / 2;
    a.set(i, j, a(i, j) + v);
  }
  return a;
}

namespace {

struct Row {
  std::vector<PrintedTerm> terms;
  int rhs;
};

CorpusEntry make(const char* name, std::size_t n, std::size_t r_min, std::optional<std::size_t> r_max,
                 const std::vector<Row>& rows) {
  CorpusEntry e;
  e.instance.name = name;
  e.instance.n = n;
  for (const auto& row : rows) {
    e.instance.A.push_back(constraint_matrix(n, row.terms));
    e.instance.b.push_back(Rational(row.rhs));
  }
  e.n = n;
  e.r_min = r_min;
  e.r_max = r_max;
  e.instance.validate();
  return e;
}

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> c;
  c.push_back(make("DruWo2017-2.3.2P", 3, 1, 2, {{{{1, 3, 2}, {2, 2, 1}}, 1}, {{{3, 3, 1}}, 0}}));
  c.push_back(make("Gupta2013-12.3P", 3, 1, 2, {{{{3, 3, 1}, {1, 2, 2}}, 1}, {{{2, 2, 1}}, 0}}));
  c.push_back(make("Hauenstein2.6P", 3, 1, 2, {{{{1, 1, 1}, {2, 3, 2}}, 2}, {{{2, 2, 1}}, 0}}));
  c.push_back(make("Helmberg2000-2.2.1P", 3, 1, 2,
                   {{{{3, 3, 1}, {1, 2, -1}}, 1}, {{{1, 1, 1}}, 0}, {{{1, 3, 1}}, 0}, {{{2, 3, 1}}, 0}}));
  c.push_back(make("LauVall2020-2.5.1P", 2, 1, 1, {{{{1, 1, 1}}, 1}, {{{2, 2, 1}}, 0}}));
  c.push_back(make("LauVall2020-2.5.2P", 3, 1, 2, {{{{1, 1, 1}}, 0}, {{{1, 3, 2}, {2, 2, 1}}, 1}}));
  c.push_back(make("Pataki2017-4P", 3, 1, 2, {{{{1, 1, 1}}, 0}, {{{1, 3, 2}, {2, 2, 1}}, 1}}));
  c.push_back(make("deKlerk2002-2.1P", 2, 1, 1, {{{{1, 1, 1}}, 0}, {{{2, 2, 1}}, 1}}));
  c.push_back(make("DruWo2017-2.3.2D", 3, 1, 2,
                   {{{{1, 1, 1}}, 0}, {{{1, 2, 1}}, 0}, {{{2, 2, 1}, {1, 3, -1}}, 1}, {{{2, 3, 1}}, 0}}));
  c.push_back(make("Gupta2013-12.3D", 3, 1, 2,
                   {{{{1, 1, 1}}, 0}, {{{1, 3, 2}}, 0}, {{{2, 3, 2}}, 0}, {{{3, 3, 1}, {1, 2, -1}}, 1}}));
  c.push_back(make("HNS2020-4.1D", 4, 2, 2,
                   {{{{1, 1, 1}}, 1},
                    {{{1, 3, 1}}, 0},
                    {{{1, 4, 1}}, 0},
                    {{{2, 2, 1}}, 2},
                    {{{2, 3, 1}}, 0},
                    {{{2, 4, 1}}, 0},
                    {{{3, 3, 1}, {1, 2, -2}}, 0},
                    {{{3, 4, 2}}, 4},
                    {{{4, 4, 1}, {1, 2, -1}}, 0}}));
  c.push_back(make("Hauenstein2.6D", 3, 1, 2,
                   {{{{1, 2, 2}}, 0}, {{{1, 3, 2}}, 0}, {{{2, 3, 2}, {1, 1, -2}}, -2}, {{{3, 3, 1}}, 0}}));
  c.push_back(make("Helmberg2000-2.2.1D", 3, 1, 2, {{{{2, 2, 1}}, 0}, {{{1, 2, 2}, {3, 3, 1}}, 1}}));
  c.push_back(make("Pataki2017-4D", 3, 1, 2,
                   {{{{1, 2, 2}}, 0}, {{{2, 2, 1}, {1, 3, -1}}, 1}, {{{2, 3, 2}}, 0}, {{{3, 3, 1}}, 0}}));
  c.push_back(make("Permenter2018-4.3.1D", 5, 0, 1,
                   {{{{1, 2, 1}}, 0},
                    {{{1, 3, 1}}, 0},
                    {{{1, 4, 1}}, 0},
                    {{{1, 5, 1}}, 0},
                    {{{1, 1, 1}, {2, 2, 1}}, 0},
                    {{{2, 4, 1}}, 0},
                    {{{2, 5, 1}}, 0},
                    {{{3, 4, 1}}, 0},
                    {{{3, 5, 1}}, 0},
                    {{{3, 3, 1}, {2, 3, -1}, {4, 4, 1}}, 0},
                    {{{4, 5, 1}}, 0}}));
  c.push_back(make("Permenter2018-4.3.2D", 4, 2, 2,
                   {{{{1, 1, 1}}, 1},
                    {{{1, 3, 1}}, 0},
                    {{{1, 4, 1}, {2, 3, 1}}, 0},
                    {{{2, 4, 1}}, 0},
                    {{{1, 2, 2}, {3, 3, 1}}, -1},
                    {{{2, 2, 1}, {3, 4, 2}}, -1},
                    {{{4, 4, 1}}, 1}}));
  c.push_back(make("PatakiCleanDim4P", 4, 1, std::nullopt,
                   {{{{1, 1, 1}}, 0}, {{{1, 4, 2}, {2, 2, 1}}, 0}, {{{2, 4, 2}, {3, 3, 1}}, 10}}));
  c.push_back(make("PatakiCleanDim5P", 5, 1, std::nullopt,
                   {{{{1, 1, 1}}, 0},
                    {{{1, 5, 2}, {2, 2, 1}}, 0},
                    {{{2, 5, 2}, {3, 3, 1}}, 0},
                    {{{3, 5, 2}, {4, 4, 1}}, 10}}));
  c.push_back(make("PatakiCleanDim6P", 6, 1, std::nullopt,
                   {{{{1, 1, 1}}, 0},
                    {{{1, 6, 2}, {2, 2, 1}}, 0},
                    {{{2, 6, 2}, {3, 3, 1}}, 0},
                    {{{3, 6, 2}, {4, 4, 1}}, 0},
                    {{{4, 6, 2}, {5, 5, 1}}, 10}}));
  c.push_back(make("HeNaSa2016-6.2P", 6, 2, std::nullopt,
                   {{{{1, 1, 1}}, 1},
                    {{{1, 2, 1}}, 0},
                    {{{1, 4, 1}}, 0},
                    {{{1, 3, 2}, {2, 2, 1}}, 0},
                    {{{2, 3, 2}}, 1},
                    {{{1, 5, 2}, {2, 4, 2}}, -3},
                    {{{3, 3, 1}}, 1},
                    {{{2, 5, 2}, {3, 4, 2}}, -4},
                    {{{3, 5, 1}}, 0},
                    {{{1, 6, 2}, {4, 4, 1}}, 2},
                    {{{2, 6, 1}, {4, 5, 1}}, 0},
                    {{{4, 6, 2}}, 1},
                    {{{3, 6, 2}, {5, 5, 1}}, 0},
                    {{{5, 6, 2}}, 1},
                    {{{6, 6, 1}}, 1}}));
  return c;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : corpus())
    if (e.instance.name == name) return e;
  throw std::out_of_range("unknown corpus instance '" + name + "'");
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& e : corpus()) out.push_back(e.instance.name);
  return out;
}

}  // namespace lmicert
