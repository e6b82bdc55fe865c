#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridcop/copula.hpp"
#include "gridcop/exchange.hpp"
#include "gridcop/grid.hpp"

namespace gridcop {

// Observations on the raw scale, row-major n x d. No missing values.
struct Dataset {
  std::size_t n = 0;
  int d = 0;
  std::vector<double> y;  // n * d

  double at(std::size_t i, int j) const { return y[i * static_cast<std::size_t>(d) + j]; }
  std::span<const double> row(std::size_t i) const {
    return {y.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
};

// One-dimensional marginal model. Known kinds have fixed CDFs; the gaussian
// kind is parametric with unconstrained parameters (mu, log sigma) and a
// Gaussian prior on both.
struct MarginalSpec {
  enum class Kind {
    known_uniform,
    known_std_normal,
    known_gauss_mixture,  // 0.5 N(mu_sep,1) + 0.5 N(-mu_sep,1) marginal
    known_table,          // piecewise-linear CDF through (y, F(y)) points
    gaussian              // parametric location-scale
  };

  Kind kind = Kind::known_uniform;
  double mix_separation = 1.0;  // known_gauss_mixture component offset
  std::vector<std::pair<double, double>> table;  // known_table, ascending in both

  // gaussian kind: initial values and prior hyper-parameters.
  double init_mu = 0.0;
  double init_sigma = 1.0;
  double prior_mu_mean = 0.0;
  double prior_mu_sd = 100.0;
  double prior_log_sigma_mean = 0.0;
  double prior_log_sigma_sd = 10.0;

  bool parametric() const { return kind == Kind::gaussian; }
  // Parameters are (mu, log sigma) for the gaussian kind, empty otherwise.
  std::vector<double> init_params() const;
  double cdf(double y, std::span<const double> params) const;
  double log_pdf(double y, std::span<const double> params) const;
  double log_prior(std::span<const double> params) const;
};

// Pseudo-observations u_ij = F_j(y_ij), row-major n x d.
std::vector<double> pseudo_observations(const Dataset& data,
                                        const std::vector<MarginalSpec>& marginals,
                                        const std::vector<std::vector<double>>& params);

// Single-dimension update of an existing pseudo-observation matrix.
void pseudo_observations_dim(const Dataset& data, const MarginalSpec& marginal,
                             std::span<const double> params, int dim, std::vector<double>& u);

// Cell counts of pseudo-observations, flat enumeration order.
std::vector<std::int64_t> cell_counts(std::span<const double> u, std::size_t n, const Grid& g);

// Copula part of the log-likelihood: sum_B counts(B) log(mass(B)/vol(B)).
// Returns -inf when an occupied cell carries zero mass.
double copula_log_likelihood(const GridCopula& c, std::span<const std::int64_t> counts);

// Likelihood change under a rectangle exchange, from the four changed cells.
double delta_log_likelihood(std::span<const std::int64_t> counts, const GridCopula& c,
                            const ExchangeProposal& p);

// Marginal part of the log-likelihood for one dimension.
double marginal_log_likelihood(const Dataset& data, const MarginalSpec& marginal,
                               std::span<const double> params, int dim);

}  // namespace gridcop
