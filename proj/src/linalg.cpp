#include "lmicert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lmicert {

SymD to_double(const SymQ& x) {
  SymD d(x.n());
  for (std::size_t j = 0; j < x.n(); ++j)
    for (std::size_t i = j; i < x.n(); ++i) d.set(i, j, to_double(x(i, j)));
  return d;
}

MatD to_double(const MatQ& x) {
  MatD d(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) d(i, j) = to_double(x(i, j));
  return d;
}

MatQ exact_from_double(const MatD& x) {
  MatQ q(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) q(i, j) = exact_from_double(x(i, j));
  return q;
}

std::string to_string(const MatQ& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ", ";
      s += to_string(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

// ---------------------------------------------------------------- eigen

SymEigen sym_eigen(const MatD& input) {
  const std::size_t n = input.rows();
  if (n != input.cols()) throw std::invalid_argument("sym_eigen needs a square matrix");
  MatD a = input;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  MatD v = MatD::identity(n);
  const double scale = std::max(frobenius(a), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-18 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  SymEigen out;
  out.vectors = MatD(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values.push_back(a(order[c], order[c]));
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, c) = v(k, order[c]);
  }
  return out;
}

std::vector<double> sym_eigenvalues(const MatD& a) { return sym_eigen(a).values; }
std::vector<double> sym_eigenvalues(const SymD& x) { return sym_eigen(x.dense()).values; }

// ---------------------------------------------------------------- svd

namespace {

struct JacobiSvd {
  std::vector<double> values;
  MatD v;
  MatD av;  // A*V, columns scaled by the singular values
};

JacobiSvd one_sided_jacobi(const MatD& a) {
  const std::size_t p = a.rows(), q = a.cols();
  MatD u = a;
  MatD v = MatD::identity(q);
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i < q; ++i) {
      for (std::size_t j = i + 1; j < q; ++j) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t k = 0; k < p; ++k) {
          alpha += u(k, i) * u(k, i);
          beta += u(k, j) * u(k, j);
          gamma += u(k, i) * u(k, j);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t k = 0; k < p; ++k) {
          double x = u(k, i), y = u(k, j);
          u(k, i) = c * x - s * y;
          u(k, j) = s * x + c * y;
        }
        for (std::size_t k = 0; k < q; ++k) {
          double x = v(k, i), y = v(k, j);
          v(k, i) = c * x - s * y;
          v(k, j) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> norms(q);
  for (std::size_t j = 0; j < q; ++j) {
    double s = 0;
    for (std::size_t k = 0; k < p; ++k) s += u(k, j) * u(k, j);
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });
  JacobiSvd out;
  out.v = MatD(q, q);
  out.av = MatD(p, q);
  for (std::size_t c = 0; c < q; ++c) {
    out.values.push_back(norms[order[c]]);
    for (std::size_t k = 0; k < q; ++k) out.v(k, c) = v(k, order[c]);
    for (std::size_t k = 0; k < p; ++k) out.av(k, c) = u(k, order[c]);
  }
  return out;
}

}  // namespace

Svd svd(const MatD& a) {
  JacobiSvd j = one_sided_jacobi(a);
  Svd out;
  out.values.assign(j.values.begin(), j.values.begin() + std::min(a.rows(), a.cols()));
  out.v = std::move(j.v);
  return out;
}

std::vector<double> singular_values(const MatD& a) { return svd(a).values; }

double norm2(const MatD& a) {
  if (a.empty()) return 0.0;
  auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

double frobenius(const MatD& a) {
  double s = 0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

// ---------------------------------------------------------------- rank revealing

double rank_reveal_constant(std::size_t /*p*/, std::size_t q) {
  double half_lo = static_cast<double>(q / 2), half_hi = static_cast<double>(q - q / 2);
  return std::sqrt(1.0 + kVolumeFactor * kVolumeFactor * half_lo * half_hi);
}

RankRevealResult rank_revealing_columns(const MatD& a, double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  const std::size_t p = a.rows(), q = a.cols();
  RankRevealResult res;
  res.c_pq = rank_reveal_constant(p, q);
  if (p == 0 || q == 0) return res;
  Svd s = svd(a);
  std::size_t r = 0;
  while (r < s.values.size() && s.values[r] >= epsilon) ++r;
  res.r = r;
  res.sigma_r = r ? s.values[r - 1] : 0.0;
  res.sigma_r_plus_1 = r < s.values.size() ? s.values[r] : 0.0;
  if (r == 0) return res;

  // W = leading right singular vectors as rows (r x q).
  MatD w(r, q);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < q; ++j) w(i, j) = s.v(j, i);

  // Complete pivoting on W picks the initial columns.
  std::vector<std::size_t> cols;
  {
    MatD g = w;
    std::vector<bool> row_used(r, false), col_used(q, false);
    for (std::size_t step = 0; step < r; ++step) {
      double best = -1;
      std::size_t bi = 0, bj = 0;
      for (std::size_t j = 0; j < q; ++j) {
        if (col_used[j]) continue;
        for (std::size_t i = 0; i < r; ++i) {
          if (row_used[i]) continue;
          if (std::abs(g(i, j)) > best) {
            best = std::abs(g(i, j));
            bi = i;
            bj = j;
          }
        }
      }
      row_used[bi] = col_used[bj] = true;
      cols.push_back(bj);
      double piv = g(bi, bj);
      if (piv == 0.0) continue;
      for (std::size_t i = 0; i < r; ++i) {
        if (row_used[i]) continue;
        double f = g(i, bj) / piv;
        for (std::size_t j = 0; j < q; ++j) g(i, j) -= f * g(bi, j);
      }
    }
  }

  // Local maximum volume: no single column exchange grows |det W_J| by more than the factor.
  for (int iter = 0; iter < 1000; ++iter) {
    MatD b = w.columns(cols);
    auto t = solve(b, w, 1e-300);
    if (!t) break;
    double best = kVolumeFactor;
    std::size_t ba = 0, bj = q;
    for (std::size_t j = 0; j < q; ++j) {
      if (std::find(cols.begin(), cols.end(), j) != cols.end()) continue;
      for (std::size_t k = 0; k < r; ++k) {
        if (std::abs((*t)(k, j)) > best) {
          best = std::abs((*t)(k, j));
          ba = k;
          bj = j;
        }
      }
    }
    if (bj == q) break;
    cols[ba] = bj;
    ++res.volume_swaps;
  }
  std::sort(cols.begin(), cols.end());
  res.cols = cols;
  return res;
}

double rho(const MatD& a, double epsilon) {
  auto rr = rank_revealing_columns(a, epsilon);
  if (rr.r == 0) throw std::invalid_argument("rho undefined for zero matrix");
  return rr.sigma_r;
}

// ---------------------------------------------------------------- float solves

std::optional<MatD> solve(const MatD& a, const MatD& b, double tiny) {
  const std::size_t n = a.rows();
  if (n != a.cols() || b.rows() != n) throw std::invalid_argument("solve dimension mismatch");
  MatD m = a, x = b;
  double amax = 0;
  for (double v : a.data()) amax = std::max(amax, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (!(std::abs(m(piv, k)) > tiny * amax) || amax == 0) return std::nullopt;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = m(i, k) / m(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double s = x(kk, j);
      for (std::size_t c = kk + 1; c < n; ++c) s -= m(kk, c) * x(c, j);
      x(kk, j) = s / m(kk, kk);
    }
  }
  return x;
}

std::optional<std::vector<double>> solve(const MatD& a, const std::vector<double>& b, double tiny) {
  MatD bb(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) bb(i, 0) = b[i];
  auto x = solve(a, bb, tiny);
  if (!x) return std::nullopt;
  std::vector<double> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = (*x)(i, 0);
  return out;
}

std::vector<double> lstsq(const MatD& a, const std::vector<double>& b, double rcond) {
  if (b.size() != a.rows()) throw std::invalid_argument("lstsq dimension mismatch");
  const std::size_t p = a.rows(), q = a.cols();
  std::vector<double> x(q, 0.0);
  if (p == 0 || q == 0) return x;
  JacobiSvd s = one_sided_jacobi(a);
  double cut = rcond * (s.values.empty() ? 0.0 : s.values[0]);
  for (std::size_t c = 0; c < q; ++c) {
    double sigma = s.values[c];
    if (!(sigma > cut) || sigma == 0.0) continue;
    // u_c = av_c / sigma; coefficient = u_c . b / sigma
    double dot = 0;
    for (std::size_t k = 0; k < p; ++k) dot += s.av(k, c) * b[k];
    double coef = dot / (sigma * sigma);
    for (std::size_t k = 0; k < q; ++k) x[k] += coef * s.v(k, c);
  }
  return x;
}

// ---------------------------------------------------------------- exact

Rref rref(const MatQ& a, const std::vector<std::size_t>& column_order) {
  std::vector<std::size_t> order = column_order;
  if (order.empty()) {
    order.resize(a.cols());
    std::iota(order.begin(), order.end(), 0);
  }
  MatQ m = a;
  std::size_t row = 0;
  Rref out;
  for (std::size_t c : order) {
    if (row == m.rows()) break;
    std::size_t piv = row;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(piv, j));
    Rational inv = 1 / m(row, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(c);
    ++row;
  }
  out.reduced = MatQ(row, m.cols());
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.reduced(i, j) = m(i, j);
  return out;
}

std::size_t rank(const MatQ& a) { return rref(a).pivots.size(); }

Rational determinant(MatQ m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      det = -det;
    }
    det *= m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

std::optional<MatQ> inverse(const MatQ& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
  MatQ aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rref r = rref(aug, order);
  if (r.pivots.size() < n) return std::nullopt;
  MatQ inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r.reduced(i, n + j);
  return inv;
}

std::optional<AffineSolution> solve_affine(const MatQ& a, const std::vector<Rational>& b,
                                           const std::vector<std::size_t>& column_order) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_affine dimension mismatch");
  const std::size_t q = a.cols();
  MatQ aug(a.rows(), q + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < q; ++j) aug(i, j) = a(i, j);
    aug(i, q) = b[i];
  }
  std::vector<std::size_t> order = column_order;
  if (order.empty()) {
    order.resize(q);
    std::iota(order.begin(), order.end(), 0);
  }
  Rref r = rref(aug, order);
  // A pivot never lands on the augmented column because it is not in the order; check leftover rows.
  MatQ full = rref(aug, [&] {
                auto o = order;
                o.push_back(q);
                return o;
              }()).reduced;
  for (std::size_t i = 0; i < full.rows(); ++i) {
    bool zero_lhs = true;
    for (std::size_t j = 0; j < q; ++j)
      if (full(i, j) != 0) {
        zero_lhs = false;
        break;
      }
    if (zero_lhs && full(i, q) != 0) return std::nullopt;
  }
  AffineSolution sol;
  sol.particular.assign(q, Rational(0));
  std::vector<bool> is_pivot(q, false);
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    is_pivot[r.pivots[i]] = true;
    sol.particular[r.pivots[i]] = r.reduced(i, q);
  }
  for (std::size_t c : order)
    if (!is_pivot[c]) sol.free_columns.push_back(c);
  sol.nullspace = MatQ(q, sol.free_columns.size());
  for (std::size_t f = 0; f < sol.free_columns.size(); ++f) {
    std::size_t fc = sol.free_columns[f];
    sol.nullspace(fc, f) = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) sol.nullspace(r.pivots[i], f) = -r.reduced(i, fc);
  }
  return sol;
}

std::optional<std::vector<Rational>> solve(const MatQ& a, const std::vector<Rational>& b) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve needs a square matrix");
  auto s = solve_affine(a, b);
  if (!s || !s->free_columns.empty()) return std::nullopt;
  return s->particular;
}

bool is_positive_definite(const MatQ& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("is_positive_definite needs a square matrix");
  MatQ m = a;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return true;
}

Inertia inertia(const MatQ& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inertia needs a square matrix");
  MatQ m = a;
  Inertia out;
  while (m.rows() > 0) {
    const std::size_t n = m.rows();
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (m(i, i) != 0 && (piv == n || abs(m(i, i)) > abs(m(piv, piv)))) piv = i;
    if (piv != n) {
      if (m(piv, piv) > 0)
        ++out.positive;
      else
        ++out.negative;
      MatQ next(n - 1, n - 1);
      std::size_t ri = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == piv) continue;
        std::size_t rj = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == piv) continue;
          next(ri, rj++) = m(i, j) - m(i, piv) * m(piv, j) / m(piv, piv);
        }
        ++ri;
      }
      m = std::move(next);
      continue;
    }
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n && bi == n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (m(i, j) != 0) {
          bi = i;
          bj = j;
          break;
        }
    if (bi == n) {
      out.zero += n;
      break;
    }
    // 2x2 block [[0,c],[c,0]] has one positive and one negative eigenvalue.
    ++out.positive;
    ++out.negative;
    Rational c = m(bi, bj);
    MatQ next(n - 2, n - 2);
    std::size_t ri = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == bi || i == bj) continue;
      std::size_t rj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == bi || j == bj) continue;
        // E^{-1} = [[0,1/c],[1/c,0]]
        Rational corr = (m(i, bi) * m(bj, j) + m(i, bj) * m(bi, j)) / c;
        next(ri, rj++) = m(i, j) - corr;
      }
      ++ri;
    }
    m = std::move(next);
  }
  return out;
}

std::optional<Rational> exact_min_eig_lower_bound(const MatQ& a) {
  const std::size_t n = a.rows();
  if (n == 0) return std::nullopt;
  double lmin = sym_eigenvalues(to_double(a)).back();
  if (!(lmin > 0)) return std::nullopt;
  double mu = lmin * (1.0 - 1e-9);
  for (int attempt = 0; attempt < 80; ++attempt) {
    Rational q = rationalize(mu, 1000000);
    if (q > exact_from_double(mu)) q = round_down(exact_from_double(mu), 60);
    if (q > 0) {
      MatQ shifted = a;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= q;
      if (is_positive_definite(shifted)) return q;
    }
    mu *= 0.5;
  }
  return std::nullopt;
}

}  // namespace lmicert
