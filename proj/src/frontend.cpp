#include "lmicert/frontend.hpp"

#include "lmicert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

namespace lmicert {

namespace {

// Frobenius projection onto the affine set, with the pseudo-inverse of the Gram matrix cached.
class AffineProjector {
 public:
  explicit AffineProjector(const SdpInstance& inst) : n_(inst.n), m_(inst.m()), a_(inst.m()), b_(inst.m()) {
    for (std::size_t k = 0; k < m_; ++k) {
      a_[k] = to_double(inst.A[k]).dense();
      b_[k] = to_double(inst.b[k]);
    }
    MatD gram(m_, m_);
    for (std::size_t k = 0; k < m_; ++k)
      for (std::size_t l = 0; l < m_; ++l) gram(k, l) = inner(a_[k], a_[l]);
    SymEigen e = sym_eigen(gram);
    double cut = 1e-13 * std::max(e.values.empty() ? 0.0 : e.values.front(), 1e-300);
    gpinv_ = MatD(m_, m_);
    for (std::size_t c = 0; c < m_; ++c) {
      if (e.values[c] <= cut) continue;
      for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) gpinv_(i, j) += e.vectors(i, c) * e.vectors(j, c) / e.values[c];
    }
    scale_ = 1.0;
    for (double v : b_) scale_ = std::max(scale_, std::abs(v));
  }

  MatD project(const MatD& x) const {
    std::vector<double> res(m_);
    for (std::size_t k = 0; k < m_; ++k) res[k] = inner(a_[k], x) - b_[k];
    std::vector<double> lam = gpinv_ * res;
    MatD out = x;
    for (std::size_t k = 0; k < m_; ++k) out = out - a_[k] * lam[k];
    return symmetrize(out);
  }

  double residual(const MatD& x) const {
    double s = 0;
    for (std::size_t k = 0; k < m_; ++k) {
      double r = inner(a_[k], x) - b_[k];
      s += r * r;
    }
    return std::sqrt(s);
  }

  const std::vector<MatD>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  double scale() const { return scale_; }
  std::size_t n() const { return n_; }

  static double inner(const MatD& x, const MatD& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.data().size(); ++i) s += x.data()[i] * y.data()[i];
    return s;
  }
  static MatD symmetrize(const MatD& x) {
    MatD s = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j) s(i, j) = s(j, i) = 0.5 * (x(i, j) + x(j, i));
    return s;
  }

 private:
  std::size_t n_, m_;
  std::vector<MatD> a_;
  std::vector<double> b_;
  MatD gpinv_;
  double scale_ = 1.0;
};

MatD psd_part(const MatD& x) {
  SymEigen e = sym_eigen(x);
  const std::size_t n = x.rows();
  MatD out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    double l = e.values[c];
    if (l <= 0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += l * e.vectors(i, c) * e.vectors(j, c);
  }
  return AffineProjector::symmetrize(out);
}

struct DykstraRun {
  MatD x;
  std::size_t iterations = 0;
};

DykstraRun dykstra(const AffineProjector& proj, MatD x, std::size_t sweeps) {
  const std::size_t n = x.rows();
  MatD p(n, n), q(n, n);
  DykstraRun run;
  for (std::size_t it = 0; it < sweeps; ++it) {
    MatD y = proj.project(x + p);
    p = x + p - y;
    MatD xn = psd_part(y + q);
    q = y + q - xn;
    double change = frobenius(xn - x);
    x = std::move(xn);
    run.iterations = it + 1;
    if (change <= 1e-15 * std::max(1.0, frobenius(x))) break;
  }
  run.x = std::move(x);
  return run;
}

double residual_norm(const AffineProjector& proj, const MatD& b, std::vector<double>* res) {
  MatD xb = b * b.transpose();
  const auto& as = proj.a();
  double norm = 0;
  if (res) res->assign(as.size(), 0.0);
  for (std::size_t k = 0; k < as.size(); ++k) {
    double r = AffineProjector::inner(as[k], xb) - proj.b()[k];
    if (res) (*res)[k] = r;
    norm += r * r;
  }
  return std::sqrt(norm);
}

// Levenberg-Marquardt on X = B B^T, B of size n x r. Eigenvalues below `floor` start at `floor`
// so that every column of B can move.
MatD polish(const AffineProjector& proj, const MatD& x, std::size_t r, std::size_t iters, std::size_t& used,
            double floor = 0.0) {
  const std::size_t n = x.rows();
  if (r == 0) return MatD(n, n);
  SymEigen e = sym_eigen(x);
  MatD b(n, r);
  for (std::size_t c = 0; c < r; ++c) {
    double s = std::sqrt(std::max(e.values[c], floor));
    for (std::size_t i = 0; i < n; ++i) b(i, c) = e.vectors(i, c) * s;
  }
  const auto& as = proj.a();
  const std::size_t m = as.size(), k = n * r;
  std::vector<double> res;
  double norm = residual_norm(proj, b, &res);
  double mu = 1e-6;
  for (std::size_t it = 0; it < iters && norm >= 1e-15; ++it) {
    ++used;
    MatD jac(m + k, k);
    for (std::size_t q = 0; q < m; ++q) {
      MatD g = as[q] * b;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < r; ++c) jac(q, i * r + c) = 2.0 * g(i, c);
    }
    std::vector<double> rhs = res;
    rhs.resize(m + k, 0.0);
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      double damp = std::sqrt(mu);
      for (std::size_t v = 0; v < k; ++v) jac(m + v, v) = damp;
      std::vector<double> step = lstsq(jac, rhs, 1e-13);
      MatD trial = b;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < r; ++c) trial(i, c) -= step[i * r + c];
      std::vector<double> tres;
      double tnorm = residual_norm(proj, trial, &tres);
      if (tnorm < norm) {
        b = std::move(trial);
        res = std::move(tres);
        norm = tnorm;
        mu = std::max(mu * 0.1, 1e-30);
        accepted = true;
      } else {
        mu *= 10;
      }
    }
    if (!accepted) break;
  }
  return AffineProjector::symmetrize(b * b.transpose());
}

MatD random_psd_start(std::size_t n, std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd(0.0, 1.0);
  MatD g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = nd(rng);
  return (g * g.transpose()) * (1.0 / static_cast<double>(n));
}

}  // namespace

bool FrontendResult::consistent(const SdpInstance& inst) const {
  auto r = apply_map(inst, X_tilde);
  double s = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    double d = r[k] - to_double(inst.b[k]);
    s += d * d;
  }
  double res = std::sqrt(s);
  double lmin = sym_eigenvalues(X_tilde).back();
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  return close(res, residual) && close(lmin, min_eig);
}

SymD project_affine(const SdpInstance& inst, const SymD& x) {
  inst.validate();
  AffineProjector proj(inst);
  MatD p = proj.project(x.dense());
  if (proj.residual(p) > 1e-8 * proj.scale())
    throw std::invalid_argument("inconsistent constraint system: b is not in the range of the map");
  return SymD::from_dense(p, false);
}

SymD project_psd(const SymD& x) { return SymD::from_dense(psd_part(x.dense()), false); }

FrontendResult find_feasible_point(const SdpInstance& inst, const FrontendOptions& opts) {
  inst.validate();
  const std::size_t n = inst.n;
  AffineProjector proj(inst);
  const std::size_t sweeps = std::min(opts.max_iter, kDykstraSweeps);
  const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);

  std::vector<DykstraRun> runs(restarts);
  if (opts.parallel && restarts > 1) {
    std::vector<std::future<DykstraRun>> futs;
    for (std::size_t k = 0; k < restarts; ++k)
      futs.push_back(std::async(std::launch::async, [&, k] {
        return dykstra(proj, random_psd_start(n, opts.seed, k), sweeps);
      }));
    for (std::size_t k = 0; k < restarts; ++k) runs[k] = futs[k].get();
  } else {
    for (std::size_t k = 0; k < restarts; ++k) runs[k] = dykstra(proj, random_psd_start(n, opts.seed, k), sweeps);
  }

  FrontendResult out;
  MatD acc(n, n);
  for (const auto& r : runs) {
    acc = acc + r.x;
    out.iterations += r.iterations;
  }
  out.restarts_used = restarts;
  MatD avg = proj.project(acc * (1.0 / static_cast<double>(restarts)));

  std::size_t gn = 0;
  MatD full = polish(proj, avg, n, 100, gn, 1e-3 * std::max(1.0, frobenius(avg)));
  std::vector<double> w = sym_eigen(full).values;
  double thresh = std::sqrt(opts.tol) * std::max(1.0, w.front());
  std::size_t r = 0;
  while (r < n && w[r] > thresh) ++r;
  MatD xt = polish(proj, full, r, 200, gn);
  out.iterations += gn;

  out.X_tilde = SymD::from_dense(xt, false);
  out.residual = proj.residual(out.X_tilde.dense());
  out.min_eig = sym_eigenvalues(out.X_tilde).back();
  double eps1 = opts.eps1.value_or(std::sqrt(opts.tol));
  out.detected_rank = rank_revealing_columns(out.X_tilde.dense(), eps1).r;
  out.converged = out.residual <= opts.tol && out.min_eig >= -opts.tol;
  if (!out.converged) {
    std::ostringstream msg;
    msg << "frontend did not converge (best residual " << out.residual << ", min eigenvalue " << out.min_eig << ")";
    out.message = msg.str();
  }
  return out;
}

}  // namespace lmicert
