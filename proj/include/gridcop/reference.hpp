#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gridcop/copula.hpp"
#include "gridcop/linalg.hpp"
#include "gridcop/rng.hpp"

namespace gridcop {

// Parametric copula families used as centering models, data generators and
// ground truth.
class ReferenceCopula {
 public:
  enum class Family { independence, gaussian, clayton, gumbel, gauss_mixture };

  static ReferenceCopula independence(int dims);
  static ReferenceCopula gaussian(CorrelationMatrix r);
  static ReferenceCopula gaussian2(double rho) {
    return gaussian(CorrelationMatrix::bivariate(rho));
  }
  static ReferenceCopula clayton(double theta);  // theta > 0, d = 2
  static ReferenceCopula gumbel(double theta);   // theta >= 1, d = 2
  // Copula of an equal-weight two-component bivariate normal mixture with
  // identity covariances and the given component means.
  static ReferenceCopula gauss_mixture(std::array<double, 2> mean1 = {1.0, 1.0},
                                       std::array<double, 2> mean2 = {-1.0, -1.0});

  Family family() const { return family_; }
  int dims() const { return dims_; }
  double theta() const { return theta_; }
  const CorrelationMatrix& correlation() const;
  std::string name() const;

  // Copula CDF. Gaussian supported for d = 2 only (throws DomainError above).
  double cdf(std::span<const double> u) const;

  // n i.i.d. draws, row-major n x d.
  std::vector<double> sample(std::size_t n, Rng& rng) const;

  // Marginal CDF of the mixture underlying the gauss_mixture family,
  // coordinate `dim`.
  double mixture_marginal_cdf(double x, int dim) const;

 private:
  ReferenceCopula() = default;
  Family family_ = Family::independence;
  int dims_ = 2;
  double theta_ = 0.0;                       // clayton / gumbel
  std::optional<CorrelationMatrix> corr_;    // gaussian
  std::array<double, 2> mean1_{1.0, 1.0};    // gauss_mixture
  std::array<double, 2> mean2_{-1.0, -1.0};

  double mixture_marginal_quantile(double u, int dim) const;
};

// Family parameter matching a target Kendall's tau in (0,1):
// Clayton theta = 2 tau / (1 - tau), Gumbel theta = 1 / (1 - tau),
// Gaussian rho = sin(pi tau / 2).
double tau_to_param(ReferenceCopula::Family family, double tau);
ReferenceCopula reference_from_tau(ReferenceCopula::Family family, double tau);

// Grid-uniform version of a reference copula (corner inclusion-exclusion).
GridCopula project(const ReferenceCopula& ref, const Grid& g);

}  // namespace gridcop
