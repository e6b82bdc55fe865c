#include "gridcop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace gridcop {

CorrelationMatrix::CorrelationMatrix(int dim) : dim_(dim) {
  if (dim < 2) throw ValidationError("correlation matrix needs dim >= 2");
  m_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) m_[static_cast<std::size_t>(i) * dim + i] = 1.0;
}

CorrelationMatrix CorrelationMatrix::identity(int dim) { return CorrelationMatrix(dim); }

CorrelationMatrix CorrelationMatrix::bivariate(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw ValidationError("bivariate correlation must satisfy |rho| < 1");
  }
  CorrelationMatrix r(2);
  r.set(0, 1, rho);
  return r;
}

void CorrelationMatrix::set(int i, int j, double v) {
  if (i == j) {
    if (v != 1.0) throw ValidationError("correlation matrix diagonal must stay 1");
    return;
  }
  m_[static_cast<std::size_t>(i) * dim_ + j] = v;
  m_[static_cast<std::size_t>(j) * dim_ + i] = v;
}

double CorrelationMatrix::rho() const {
  if (dim_ != 2) throw DimensionMismatch("rho() is defined for 2x2 correlation matrices");
  return at(0, 1);
}

double CorrelationMatrix::min_eigenvalue() const {
  const auto ev = jacobi_eigenvalues(m_, dim_);
  return ev.front();
}

void CorrelationMatrix::check() const {
  for (int i = 0; i < dim_; ++i) {
    if (at(i, i) != 1.0) throw ValidationError("correlation matrix diagonal entry != 1");
    for (int j = i + 1; j < dim_; ++j) {
      if (at(i, j) != at(j, i)) throw ValidationError("correlation matrix not symmetric");
      if (!(std::abs(at(i, j)) < 1.0)) {
        throw ValidationError("correlation entries must satisfy |r| < 1");
      }
    }
  }
  if (!(min_eigenvalue() > 0.0)) throw ValidationError("correlation matrix not positive definite");
}

std::vector<double> jacobi_eigenvalues(std::span<const double> a, int n) {
  if (static_cast<std::size_t>(n) * n != a.size()) {
    throw DimensionMismatch("jacobi_eigenvalues: size mismatch");
  }
  std::vector<double> m(a.begin(), a.end());
  auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off < 1e-30) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace {

// Eigenvalue counting for a symmetric tridiagonal matrix: number of
// eigenvalues strictly below x, via the Sturm/LDL^T recurrence.
int tridiag_count_below(std::span<const double> diag, std::span<const double> sub, double x) {
  int count = 0;
  double d = 1.0;
  const std::size_t k = diag.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double b2 = i == 0 ? 0.0 : sub[i - 1] * sub[i - 1];
    d = diag[i] - x - (d == 0.0 ? b2 / 1e-300 : b2 / d);
    if (d < 0.0) ++count;
  }
  return count;
}

double tridiag_extreme(std::span<const double> diag, std::span<const double> sub, bool smallest) {
  // Gershgorin bracket.
  double lo = diag[0], hi = diag[0];
  const std::size_t k = diag.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double r = (i > 0 ? std::abs(sub[i - 1]) : 0.0) + (i + 1 < k ? std::abs(sub[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const int target = smallest ? 1 : static_cast<int>(k);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tridiag_count_below(diag, sub, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo < 1e-13 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

EigenExtremes extreme_eigenvalues(
    const std::function<void(std::span<const double>, std::span<double>)>& matvec, std::size_t n) {
  if (n == 0) throw DimensionMismatch("extreme_eigenvalues: empty operator");
  if (n == 1) {
    std::vector<double> e{1.0}, out(1);
    matvec(e, out);
    return {out[0], out[0]};
  }
  const std::size_t max_steps = std::min<std::size_t>(n, 220);

  // Deterministic pseudo-random start vector.
  std::vector<double> v(n);
  std::uint64_t s = 0x9e3779b97f4a7c15ULL;
  for (auto& x : v) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    x = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
  }
  double nrm = 0.0;
  for (double x : v) nrm += x * x;
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;

  std::vector<std::vector<double>> basis;
  basis.push_back(v);
  std::vector<double> alpha, beta;
  std::vector<double> w(n);

  for (std::size_t j = 0; j < max_steps; ++j) {
    matvec(basis[j], w);
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += w[i] * basis[j][i];
    alpha.push_back(a);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * basis[j][i];
    if (j > 0) {
      for (std::size_t i = 0; i < n; ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
    }
    // Full reorthogonalization against the stored basis.
    for (const auto& u : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += w[i] * u[i];
      for (std::size_t i = 0; i < n; ++i) w[i] -= dot * u[i];
    }
    double b = 0.0;
    for (double x : w) b += x * x;
    b = std::sqrt(b);
    if (b < 1e-13 || j + 1 == max_steps) break;
    beta.push_back(b);
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
    basis.push_back(std::move(next));
  }

  return {tridiag_extreme(alpha, beta, true), tridiag_extreme(alpha, beta, false)};
}

std::vector<double> cholesky_lower(std::span<const double> a, int n) {
  if (static_cast<std::size_t>(n) * n != a.size()) {
    throw DimensionMismatch("cholesky_lower: size mismatch");
  }
  std::vector<double> l(a.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) {
        sum -= l[static_cast<std::size_t>(i) * n + k] * l[static_cast<std::size_t>(j) * n + k];
      }
      if (i == j) {
        if (sum <= 0.0) throw NumericalError("cholesky_lower: matrix not positive definite");
        l[static_cast<std::size_t>(i) * n + j] = std::sqrt(sum);
      } else {
        l[static_cast<std::size_t>(i) * n + j] =
            sum / l[static_cast<std::size_t>(j) * n + j];
      }
    }
  }
  return l;
}

}  // namespace gridcop
