#include "tpgm/krylov.hpp"

#include <algorithm>
#include <cmath>

namespace tpgm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

KrylovResult gmres(const LinearOperator& a, std::span<const double> b, double rtol,
                   std::size_t max_iter, std::size_t restart) {
  const std::size_t n = b.size();
  KrylovResult res;
  res.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  const double target = rtol * bnorm;
  const std::size_t m = std::max<std::size_t>(1, std::min(restart, n));

  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<double> h((m + 1) * m);  // column-major Hessenberg, h[i + j*(m+1)]
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);
  std::vector<double> r(n), ax(n);

  auto residual = [&] {
    a(res.x, ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    return norm2(r);
  };

  double beta = residual();
  while (res.iterations < max_iter) {
    if (beta <= target) break;
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    std::size_t j = 0;
    for (; j < m && res.iterations < max_iter; ++j) {
      ++res.iterations;
      a(v[j], v[j + 1]);
      // Modified Gram-Schmidt.
      for (std::size_t i = 0; i <= j; ++i) {
        const double hij = dot(v[j + 1], v[i]);
        h[i + j * (m + 1)] = hij;
        for (std::size_t t = 0; t < n; ++t) v[j + 1][t] -= hij * v[i][t];
      }
      const double hnext = norm2(v[j + 1]);
      h[j + 1 + j * (m + 1)] = hnext;
      if (hnext > 0.0)
        for (double& t : v[j + 1]) t /= hnext;

      for (std::size_t i = 0; i < j; ++i) {
        const double a0 = h[i + j * (m + 1)];
        const double a1 = h[i + 1 + j * (m + 1)];
        h[i + j * (m + 1)] = cs[i] * a0 + sn[i] * a1;
        h[i + 1 + j * (m + 1)] = -sn[i] * a0 + cs[i] * a1;
      }
      const double a0 = h[j + j * (m + 1)];
      const double a1 = h[j + 1 + j * (m + 1)];
      const double rho = std::hypot(a0, a1);
      cs[j] = rho > 0.0 ? a0 / rho : 1.0;
      sn[j] = rho > 0.0 ? a1 / rho : 0.0;
      h[j + j * (m + 1)] = rho;
      h[j + 1 + j * (m + 1)] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      // Happy breakdown or estimated convergence.
      if (std::abs(g[j + 1]) <= target || hnext == 0.0) {
        ++j;
        break;
      }
    }

    // Back substitution on the j x j triangle.
    for (std::size_t ii = j; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t k = ii + 1; k < j; ++k) s -= h[ii + k * (m + 1)] * y[k];
      const double d = h[ii + ii * (m + 1)];
      y[ii] = d != 0.0 ? s / d : 0.0;
    }
    for (std::size_t k = 0; k < j; ++k)
      for (std::size_t t = 0; t < n; ++t) res.x[t] += y[k] * v[k][t];

    const double previous = beta;
    beta = residual();
    if (!std::isfinite(beta)) break;
    // Stagnation over a whole cycle: further restarts will not help.
    if (beta >= previous && j == m) break;
  }
  res.residual_norm = beta;
  res.converged = std::isfinite(beta) && beta <= target;
  return res;
}

}  // namespace tpgm
