#include "gridcop/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridcop/normal.hpp"

namespace gridcop {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.9189385332046727;
}  // namespace

std::vector<double> MarginalSpec::init_params() const {
  if (!parametric()) return {};
  return {init_mu, std::log(init_sigma)};
}

double MarginalSpec::cdf(double y, std::span<const double> params) const {
  switch (kind) {
    case Kind::known_uniform:
      return std::clamp(y, 0.0, 1.0);
    case Kind::known_std_normal:
      return norm_cdf(y);
    case Kind::known_gauss_mixture:
      return 0.5 * norm_cdf(y - mix_separation) + 0.5 * norm_cdf(y + mix_separation);
    case Kind::known_table: {
      if (table.size() < 2) throw ValidationError("known_table marginal needs >= 2 points");
      if (y <= table.front().first) return table.front().second;
      if (y >= table.back().first) return table.back().second;
      auto it = std::upper_bound(table.begin(), table.end(), y,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& [x1, p1] = *it;
      const auto& [x0, p0] = *(it - 1);
      return x1 == x0 ? p0 : p0 + (p1 - p0) * (y - x0) / (x1 - x0);
    }
    case Kind::gaussian: {
      const double mu = params[0];
      const double sigma = std::exp(params[1]);
      return norm_cdf((y - mu) / sigma);
    }
  }
  throw ValidationError("unknown marginal kind");
}

double MarginalSpec::log_pdf(double y, std::span<const double> params) const {
  switch (kind) {
    case Kind::known_uniform:
      return (y >= 0.0 && y <= 1.0) ? 0.0 : kNegInf;
    case Kind::known_std_normal:
      return -0.5 * y * y - kLogSqrt2Pi;
    case Kind::known_gauss_mixture:
      return std::log(0.5 * norm_pdf(y - mix_separation) + 0.5 * norm_pdf(y + mix_separation));
    case Kind::known_table: {
      if (y <= table.front().first || y >= table.back().first) return kNegInf;
      auto it = std::upper_bound(table.begin(), table.end(), y,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& [x1, p1] = *it;
      const auto& [x0, p0] = *(it - 1);
      const double slope = (p1 - p0) / (x1 - x0);
      return slope > 0.0 ? std::log(slope) : kNegInf;
    }
    case Kind::gaussian: {
      const double mu = params[0];
      const double log_sigma = params[1];
      const double z = (y - mu) / std::exp(log_sigma);
      return -0.5 * z * z - log_sigma - kLogSqrt2Pi;
    }
  }
  throw ValidationError("unknown marginal kind");
}

double MarginalSpec::log_prior(std::span<const double> params) const {
  if (!parametric()) return 0.0;
  const double zm = (params[0] - prior_mu_mean) / prior_mu_sd;
  const double zs = (params[1] - prior_log_sigma_mean) / prior_log_sigma_sd;
  return -0.5 * (zm * zm + zs * zs);
}

void pseudo_observations_dim(const Dataset& data, const MarginalSpec& marginal,
                             std::span<const double> params, int dim, std::vector<double>& u) {
  const std::size_t d = static_cast<std::size_t>(data.d);
  for (std::size_t i = 0; i < data.n; ++i) {
    const double v = marginal.cdf(data.at(i, dim), params);
    if (std::isnan(v) || v < 0.0 || v > 1.0) {
      throw DomainError("pseudo-observation outside [0,1] at row " + std::to_string(i) +
                        ", column " + std::to_string(dim));
    }
    u[i * d + static_cast<std::size_t>(dim)] = v;
  }
}

std::vector<double> pseudo_observations(const Dataset& data,
                                        const std::vector<MarginalSpec>& marginals,
                                        const std::vector<std::vector<double>>& params) {
  if (static_cast<int>(marginals.size()) != data.d) {
    throw DimensionMismatch("pseudo_observations: one marginal per data column required");
  }
  std::vector<double> u(data.n * static_cast<std::size_t>(data.d));
  for (int j = 0; j < data.d; ++j) {
    pseudo_observations_dim(data, marginals[j], params[j], j, u);
  }
  return u;
}

std::vector<std::int64_t> cell_counts(std::span<const double> u, std::size_t n, const Grid& g) {
  const std::size_t d = static_cast<std::size_t>(g.dims());
  if (u.size() != n * d) throw DimensionMismatch("cell_counts: matrix size mismatch");
  std::vector<std::int64_t> counts(g.cell_count(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++counts[g.locate_flat(u.subspan(i * d, d))];
  }
  return counts;
}

double copula_log_likelihood(const GridCopula& c, std::span<const std::int64_t> counts) {
  if (counts.size() != c.grid().cell_count()) {
    throw GridMismatch("copula_log_likelihood: counts not aligned with grid");
  }
  double ll = 0.0;
  for (std::size_t f = 0; f < counts.size(); ++f) {
    if (counts[f] == 0) continue;
    const double dens = c.cell_density(f);
    if (!(dens > 0.0)) return kNegInf;
    ll += static_cast<double>(counts[f]) * std::log(dens);
  }
  return ll;
}

double delta_log_likelihood(std::span<const std::int64_t> counts, const GridCopula& c,
                            const ExchangeProposal& p) {
  const auto cells = site_cells(c.grid(), p.site);
  const double e[4] = {-p.epsilon, p.epsilon, p.epsilon, -p.epsilon};
  double delta = 0.0;
  for (int k = 0; k < 4; ++k) {
    const std::int64_t cnt = counts[cells[k]];
    if (cnt == 0) continue;
    const double before = c.mass_at(cells[k]);
    const double after = before + e[k];
    if (!(after > 0.0)) return kNegInf;
    if (!(before > 0.0)) return kNegInf;  // leaving -inf would be ill-defined
    delta += static_cast<double>(cnt) * (std::log(after) - std::log(before));
  }
  return delta;
}

double marginal_log_likelihood(const Dataset& data, const MarginalSpec& marginal,
                               std::span<const double> params, int dim) {
  double ll = 0.0;
  for (std::size_t i = 0; i < data.n; ++i) {
    ll += marginal.log_pdf(data.at(i, dim), params);
  }
  return ll;
}

}  // namespace gridcop
