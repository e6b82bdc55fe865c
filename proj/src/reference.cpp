#include "gridcop/reference.hpp"

#include <algorithm>
#include <cmath>

#include "gridcop/normal.hpp"

namespace gridcop {

namespace {
constexpr double kPi = 3.141592653589793;
}

ReferenceCopula ReferenceCopula::independence(int dims) {
  if (dims < 2) throw ValidationError("independence copula needs dims >= 2");
  ReferenceCopula c;
  c.family_ = Family::independence;
  c.dims_ = dims;
  return c;
}

ReferenceCopula ReferenceCopula::gaussian(CorrelationMatrix r) {
  r.check();
  ReferenceCopula c;
  c.family_ = Family::gaussian;
  c.dims_ = r.dim();
  c.corr_ = std::move(r);
  return c;
}

ReferenceCopula ReferenceCopula::clayton(double theta) {
  if (!(theta > 0.0)) throw ValidationError("Clayton copula needs theta > 0");
  ReferenceCopula c;
  c.family_ = Family::clayton;
  c.dims_ = 2;
  c.theta_ = theta;
  return c;
}

ReferenceCopula ReferenceCopula::gumbel(double theta) {
  if (!(theta >= 1.0)) throw ValidationError("Gumbel copula needs theta >= 1");
  ReferenceCopula c;
  c.family_ = Family::gumbel;
  c.dims_ = 2;
  c.theta_ = theta;
  return c;
}

ReferenceCopula ReferenceCopula::gauss_mixture(std::array<double, 2> mean1,
                                               std::array<double, 2> mean2) {
  ReferenceCopula c;
  c.family_ = Family::gauss_mixture;
  c.dims_ = 2;
  c.mean1_ = mean1;
  c.mean2_ = mean2;
  return c;
}

const CorrelationMatrix& ReferenceCopula::correlation() const {
  if (!corr_) throw DomainError("correlation() requires the Gaussian family");
  return *corr_;
}

std::string ReferenceCopula::name() const {
  switch (family_) {
    case Family::independence: return "independence";
    case Family::gaussian: return "gaussian";
    case Family::clayton: return "clayton";
    case Family::gumbel: return "gumbel";
    case Family::gauss_mixture: return "gauss_mixture";
  }
  return "?";
}

double ReferenceCopula::mixture_marginal_cdf(double x, int dim) const {
  return 0.5 * norm_cdf(x - mean1_[dim]) + 0.5 * norm_cdf(x - mean2_[dim]);
}

double ReferenceCopula::mixture_marginal_quantile(double u, int dim) const {
  // Monotone in x; bisection bracket wide enough for both components.
  double lo = std::min(mean1_[dim], mean2_[dim]) - 10.0;
  double hi = std::max(mean1_[dim], mean2_[dim]) + 10.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mixture_marginal_cdf(mid, dim) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

double ReferenceCopula::cdf(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dims_) {
    throw DimensionMismatch("reference cdf: point dimension mismatch");
  }
  for (double x : u) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reference cdf: coordinate outside [0,1]");
  }
  // Copula boundary conditions hold for every family.
  for (double x : u) {
    if (x == 0.0) return 0.0;
  }

  switch (family_) {
    case Family::independence: {
      double p = 1.0;
      for (double x : u) p *= x;
      return p;
    }
    case Family::gaussian: {
      if (dims_ != 2) {
        throw DomainError("Gaussian copula CDF supported for d = 2 only");
      }
      const double rho = corr_->rho();
      if (u[0] == 1.0) return u[1];
      if (u[1] == 1.0) return u[0];
      return bivariate_normal_cdf(norm_quantile(u[0]), norm_quantile(u[1]), rho);
    }
    case Family::clayton: {
      const double s = std::pow(u[0], -theta_) + std::pow(u[1], -theta_) - 1.0;
      return s <= 0.0 ? 0.0 : std::pow(s, -1.0 / theta_);
    }
    case Family::gumbel: {
      if (u[0] == 1.0) return u[1];
      if (u[1] == 1.0) return u[0];
      const double s = std::pow(-std::log(u[0]), theta_) + std::pow(-std::log(u[1]), theta_);
      return std::exp(-std::pow(s, 1.0 / theta_));
    }
    case Family::gauss_mixture: {
      const double x = mixture_marginal_quantile(u[0], 0);
      const double y = mixture_marginal_quantile(u[1], 1);
      return 0.5 * norm_cdf(x - mean1_[0]) * norm_cdf(y - mean1_[1]) +
             0.5 * norm_cdf(x - mean2_[0]) * norm_cdf(y - mean2_[1]);
    }
  }
  throw DomainError("unknown copula family");
}

namespace {

// Conditional quantile of the Gumbel copula: solves dC/du (u, v) = p in v.
double gumbel_conditional_quantile(double u, double p, double theta) {
  const double lu = -std::log(u);
  const double lut = std::pow(lu, theta);
  auto conditional = [&](double v) {
    const double s = lut + std::pow(-std::log(v), theta);
    const double c = std::exp(-std::pow(s, 1.0 / theta));
    return c * std::pow(s, 1.0 / theta - 1.0) * std::pow(lu, theta - 1.0) / u;
  };
  double lo = 1e-300, hi = 1.0 - 1e-16;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (conditional(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> ReferenceCopula::sample(std::size_t n, Rng& rng) const {
  std::vector<double> out(n * static_cast<std::size_t>(dims_));
  switch (family_) {
    case Family::independence: {
      for (auto& x : out) x = rng.uniform();
      break;
    }
    case Family::gaussian: {
      const int d = dims_;
      const auto l = cholesky_lower(corr_->data(), d);
      std::vector<double> z(d);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : z) v = rng.normal();
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int k = 0; k <= j; ++k) s += l[static_cast<std::size_t>(j) * d + k] * z[k];
          out[i * d + j] = norm_cdf(s);
        }
      }
      break;
    }
    case Family::clayton: {
      for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const double w = rng.uniform();
        const double v =
            std::pow(std::pow(u, -theta_) * (std::pow(w, -theta_ / (1.0 + theta_)) - 1.0) + 1.0,
                     -1.0 / theta_);
        out[i * 2] = u;
        out[i * 2 + 1] = v;
      }
      break;
    }
    case Family::gumbel: {
      for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const double w = rng.uniform();
        out[i * 2] = u;
        out[i * 2 + 1] = theta_ == 1.0 ? w : gumbel_conditional_quantile(u, w, theta_);
      }
      break;
    }
    case Family::gauss_mixture: {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& mean = rng.uniform() < 0.5 ? mean1_ : mean2_;
        const double x = mean[0] + rng.normal();
        const double y = mean[1] + rng.normal();
        out[i * 2] = mixture_marginal_cdf(x, 0);
        out[i * 2 + 1] = mixture_marginal_cdf(y, 1);
      }
      break;
    }
  }
  return out;
}

double tau_to_param(ReferenceCopula::Family family, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw DomainError("tau_to_param: tau must lie in (0,1)");
  }
  switch (family) {
    case ReferenceCopula::Family::clayton: return 2.0 * tau / (1.0 - tau);
    case ReferenceCopula::Family::gumbel: return 1.0 / (1.0 - tau);
    case ReferenceCopula::Family::gaussian: return std::sin(kPi * tau / 2.0);
    default: throw DomainError("tau_to_param: unsupported family");
  }
}

ReferenceCopula reference_from_tau(ReferenceCopula::Family family, double tau) {
  const double p = tau_to_param(family, tau);
  switch (family) {
    case ReferenceCopula::Family::clayton: return ReferenceCopula::clayton(p);
    case ReferenceCopula::Family::gumbel: return ReferenceCopula::gumbel(p);
    case ReferenceCopula::Family::gaussian: return ReferenceCopula::gaussian2(p);
    default: throw DomainError("reference_from_tau: unsupported family");
  }
}

GridCopula project(const ReferenceCopula& ref, const Grid& g) {
  if (ref.dims() != g.dims()) {
    throw DimensionMismatch("project: reference and grid dimensions differ");
  }
  return project_cdf([&ref](std::span<const double> u) { return ref.cdf(u); }, g);
}

}  // namespace gridcop
