#include "lmicert/krawczyk.hpp"

#include "lmicert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmicert {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

MatD to_mat(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  MatD m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  return m;
}

void require_square(const PolySystem& f) {
  if (!f.square())
    throw std::invalid_argument("system is not square: " + std::to_string(f.size()) + " polynomials in " +
                                std::to_string(f.vars.size()) + " variables");
}

}  // namespace

NewtonResult newton_refine(const PolySystem& f, std::vector<double> x0, std::size_t iters) {
  require_square(f);
  if (x0.size() != f.vars.size()) throw std::invalid_argument("starting point has wrong length");
  PolyMatrix jac = jacobian(f);
  NewtonResult out;
  out.x = std::move(x0);
  for (std::size_t it = 0; it < iters; ++it) {
    std::vector<double> fx = f.evaluate(out.x);
    out.residual = norm(fx);
    if (out.residual == 0.0) break;
    MatD j = to_mat(evaluate(jac, out.x), f.vars.size());
    auto step = solve(j, fx);
    if (!step) {
      out.singular = true;
      break;
    }
    for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] -= (*step)[i];
    double sn = norm(*step);
    out.step_norms.push_back(sn);
    ++out.iterations;
    if (sn <= 1e-17 * std::max(1.0, norm(out.x))) break;
  }
  out.residual = norm(f.evaluate(out.x));
  return out;
}

InitialZ initial_z(const PolySystem& f, const MultiPoly& phi, const std::vector<Rational>& u,
                   const std::vector<double>& x, double threshold) {
  const std::size_t k = f.vars.size(), c = f.polys.size();
  if (u.size() != c + 1) throw std::invalid_argument("u must have length c+1");
  if (x.size() != k) throw std::invalid_argument("point has wrong length");
  std::vector<MultiPoly> rows{phi.with_vars(f.vars)};
  for (const auto& p : f.polys) rows.push_back(p);
  // Unknown z in R^{c+1}; equations J(phi,f)^T z = 0 then u^T z = 1.
  MatD m(k + 1, c + 1);
  for (std::size_t i = 0; i <= c; ++i) {
    for (std::size_t v = 0; v < k; ++v) m(v, i) = rows[i].derivative(v).evaluate(x);
    m(k, i) = to_double(u[i]);
  }
  std::vector<double> rhs(k + 1, 0.0);
  rhs[k] = 1.0;
  InitialZ out;
  out.z = lstsq(m, rhs);
  std::vector<double> r = m * out.z;
  for (std::size_t i = 0; i <= k; ++i) r[i] -= rhs[i];
  out.residual = norm(r);
  out.redraw_u = !(out.residual <= threshold * std::max(1.0, frobenius(m)));
  return out;
}

bool krawczyk_test(const PolySystem& f, const Box& box, unsigned bits, Box* image, std::string* message) {
  require_square(f);
  const std::size_t n = f.vars.size();
  if (box.size() != n) throw std::invalid_argument("box has wrong length");
  auto fail = [&](const std::string& why) {
    if (message) *message = why;
    return false;
  };
  std::vector<Rational> mid(n);
  std::vector<double> mid_d(n);
  for (std::size_t i = 0; i < n; ++i) {
    mid[i] = box[i].mid();
    mid_d[i] = to_double(mid[i]);
  }
  PolyMatrix jac = jacobian(f);
  MatD jm = to_mat(evaluate(jac, mid_d), n);
  auto inv = solve(jm, MatD::identity(n));
  if (!inv) return fail("Jacobian numerically singular at the box midpoint");
  MatQ y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite((*inv)(i, j))) return fail("non-finite preconditioner");
      y(i, j) = exact_from_double((*inv)(i, j));
    }
  std::vector<Rational> fm = f.evaluate(mid);
  std::vector<std::vector<Interval>> jx(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) jx[i].push_back(jac[i][j].evaluate(box).rounded(bits));

  Box k(n);
  bool inside = true;
  for (std::size_t i = 0; i < n; ++i) {
    Rational yf = 0;
    for (std::size_t j = 0; j < n; ++j) yf += y(i, j) * fm[j];
    Interval acc(mid[i] - yf);
    for (std::size_t j = 0; j < n; ++j) {
      // (I - Y J(X))_{ij}
      Interval e(i == j ? Rational(1) : Rational(0));
      for (std::size_t l = 0; l < n; ++l)
        if (y(i, l) != 0) e -= Interval(y(i, l)) * jx[l][j];
      acc += e.rounded(bits) * (box[j] - Interval(mid[j]));
    }
    k[i] = acc.rounded(bits);
    if (!box[i].interior_contains(k[i])) inside = false;
  }
  if (image) *image = k;
  if (!inside) return fail("Krawczyk image not strictly inside the box");
  if (message) *message = "Krawczyk image strictly inside the box";
  return true;
}

KrawczykResult krawczyk_certify(const PolySystem& f, const std::vector<double>& center, const KrawczykOptions& opts) {
  require_square(f);
  if (center.size() != f.vars.size()) throw std::invalid_argument("center has wrong length");
  KrawczykResult out;
  double scale = 1.0;
  for (double v : center) {
    if (!std::isfinite(v)) {
      out.message = "non-finite center";
      return out;
    }
    scale = std::max(scale, std::fabs(v));
  }
  std::vector<Rational> c(center.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = exact_from_double(center[i]);
  out.message = "empty radius schedule";
  for (double rad : opts.radii) {
    Rational r = rationalize(rad * scale, 1LL << 52);
    if (r <= 0) continue;
    Box box(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) box[i] = Interval(c[i] - r, c[i] + r);
    Box image;
    std::string msg;
    if (krawczyk_test(f, box, opts.bits, &image, &msg)) {
      out.certified = true;
      out.box = box;
      out.image = image;
      out.radius = rad * scale;
      out.message = msg + " at radius " + std::to_string(out.radius);
      return out;
    }
    out.message = msg;
  }
  out.message = "inconclusive: " + out.message;
  return out;
}

}  // namespace lmicert
