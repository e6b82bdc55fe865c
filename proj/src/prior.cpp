#include "gridcop/prior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridcop {

WeightSpec WeightSpec::adjacency(const Grid& g) {
  WeightSpec w;
  w.kind_ = Kind::adjacency;
  const std::size_t n = g.cell_count();
  w.rows_.resize(n);
  w.degree_.assign(n, 0.0);
  std::vector<std::size_t> nb;
  for (std::size_t f = 0; f < n; ++f) {
    g.neighbors_flat(f, nb);
    auto& row = w.rows_[f];
    row.reserve(nb.size());
    for (std::size_t j : nb) row.emplace_back(j, 1.0);
    w.degree_[f] = static_cast<double>(nb.size());
  }
  return w;
}

WeightSpec WeightSpec::inverse_distance(const Grid& g) {
  WeightSpec w;
  w.kind_ = Kind::inverse_distance;
  const std::size_t n = g.cell_count();
  if (n > 20000) {
    throw ValidationError("inverse-distance weights need O(cells^2) memory; refusing " +
                          std::to_string(n) + " cells");
  }
  const int d = g.dims();
  std::vector<double> centroid(n * static_cast<std::size_t>(d));
  std::vector<int> idx(d);
  for (std::size_t f = 0; f < n; ++f) {
    g.cell_at(f, idx);
    for (int i = 0; i < d; ++i) centroid[f * d + i] = g.interval_center(i, idx[i]);
  }
  w.rows_.resize(n);
  w.degree_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = w.rows_[i];
    row.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = centroid[i * d + k] - centroid[j * d + k];
        s += diff * diff;
      }
      const double wij = 1.0 / std::sqrt(s);
      row.emplace_back(j, wij);
      w.degree_[i] += wij;
    }
  }
  return w;
}

GammaInterval gamma_bounds(const WeightSpec& w) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w.degree(i) > 0.0)) {
      throw SingularWeights("gamma_bounds: weight row " + std::to_string(i) + " sums to zero");
    }
  }
  // Normalized weight matrix D^{-1/2} W D^{-1/2}, applied as a matvec.
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt_deg[i] = 1.0 / std::sqrt(w.degree(i));

  EigenExtremes ext{};
  if (n <= 400) {
    std::vector<double> dense(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& [j, wij] : w.row(i)) {
        dense[i * n + j] = wij * inv_sqrt_deg[i] * inv_sqrt_deg[j];
      }
    }
    const auto ev = jacobi_eigenvalues(dense, static_cast<int>(n));
    ext.min = ev.front();
    ext.max = ev.back();
  } else {
    auto matvec = [&](std::span<const double> x, std::span<double> y) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const auto& [j, wij] : w.row(i)) s += wij * inv_sqrt_deg[j] * x[j];
        y[i] = s * inv_sqrt_deg[i];
      }
    };
    ext = extreme_eigenvalues(matvec, n);
  }
  if (ext.min >= 0.0 || ext.max <= 0.0) {
    throw NumericalError("gamma_bounds: unexpected spectrum of normalized weights");
  }
  return {1.0 / ext.min, 1.0 / ext.max};
}

double alpha_from_star(double alpha_star, const Grid& g) {
  if (!(alpha_star >= 0.0)) throw DomainError("alpha_star must be >= 0");
  return alpha_star * static_cast<double>(g.cell_count());
}

PriorSpec PriorSpec::flat(int dims) {
  PriorSpec p;
  p.variant = Variant::squared_l2;
  p.alpha_star = 0.0;
  p.centering = ReferenceCopula::independence(dims);
  p.hierarchical = false;
  return p;
}

PriorModel::PriorModel(PriorSpec spec, const Grid& g) : spec_(std::move(spec)), grid_(g) {
  alpha_ = alpha_from_star(spec_.alpha_star, g);
  cell_volume_.resize(g.cell_count());
  for (std::size_t f = 0; f < g.cell_count(); ++f) cell_volume_[f] = g.cell_volume_flat(f);
  if (spec_.variant != PriorSpec::Variant::squared_l2) {
    weights_ = spec_.weights == WeightSpec::Kind::adjacency ? WeightSpec::adjacency(g)
                                                            : WeightSpec::inverse_distance(g);
    if (spec_.variant == PriorSpec::Variant::car) {
      const auto bounds = gamma_bounds(*weights_);
      if (!bounds.contains(spec_.gamma)) {
        throw ValidationError("CAR gamma " + std::to_string(spec_.gamma) +
                              " outside the valid open interval (" + std::to_string(bounds.lo) +
                              ", " + std::to_string(bounds.hi) + ")");
      }
    } else {
      spec_.gamma = 1.0;  // ICAR boundary case
    }
  }
}

double PriorModel::distance(std::span<const double> v) const {
  if (spec_.variant == PriorSpec::Variant::squared_l2) {
    // sum_l lambda_l (c_l - c0_l)^2 with densities c = mass / lambda.
    double s = 0.0;
    for (std::size_t f = 0; f < v.size(); ++f) s += v[f] * v[f] / cell_volume_[f];
    return s;
  }
  const WeightSpec& w = *weights_;
  double diag = 0.0, cross = 0.0;
  for (std::size_t f = 0; f < v.size(); ++f) {
    diag += w.degree(f) * v[f] * v[f];
    double s = 0.0;
    for (const auto& [j, wij] : w.row(f)) s += wij * v[j];
    cross += v[f] * s;
  }
  return diag - spec_.gamma * cross;
}

double PriorModel::log_kernel(const GridCopula& c, const GridCopula& c0_on_grid) const {
  if (!(c.grid() == grid_) || !(c0_on_grid.grid() == grid_)) {
    throw GridMismatch("prior kernel: copulas not on the prior's grid");
  }
  if (alpha_ == 0.0) return 0.0;
  const auto m = c.mass();
  const auto m0 = c0_on_grid.mass();
  std::vector<double> v(m.size());
  for (std::size_t f = 0; f < m.size(); ++f) v[f] = m[f] - m0[f];
  return -0.5 * alpha_ * distance(v);
}

double PriorModel::delta_log_kernel(const GridCopula& c, const GridCopula& c0_on_grid,
                                    const ExchangeProposal& p) const {
  if (alpha_ == 0.0) return 0.0;
  const auto cells = site_cells(grid_, p.site);
  const double e[4] = {-p.epsilon, p.epsilon, p.epsilon, -p.epsilon};
  const auto m = c.mass();
  const auto m0 = c0_on_grid.mass();

  if (spec_.variant == PriorSpec::Variant::squared_l2) {
    double dd = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double v = m[cells[k]] - m0[cells[k]];
      dd += ((v + e[k]) * (v + e[k]) - v * v) / cell_volume_[cells[k]];
    }
    return -0.5 * alpha_ * dd;
  }

  // Quadratic form Q = D_W - gamma W: delta = 2 e^T Q v + e^T Q e with e
  // supported on the four exchanged cells.
  const WeightSpec& w = *weights_;
  auto v_at = [&](std::size_t f) { return m[f] - m0[f]; };
  double cross_ev = 0.0;  // e^T Q v
  double cross_ee = 0.0;  // e^T Q e (off-diagonal part)
  double diag_ee = 0.0;
  for (int k = 0; k < 4; ++k) {
    const std::size_t f = cells[k];
    double wv = 0.0;  // (W v)_f
    double we = 0.0;  // (W e)_f
    for (const auto& [j, wij] : w.row(f)) {
      wv += wij * v_at(j);
      for (int l = 0; l < 4; ++l) {
        if (cells[l] == j) we += wij * e[l];
      }
    }
    cross_ev += e[k] * (w.degree(f) * v_at(f) - spec_.gamma * wv);
    diag_ee += w.degree(f) * e[k] * e[k];
    cross_ee += e[k] * we;
  }
  const double dd = 2.0 * cross_ev + diag_ee - spec_.gamma * cross_ee;
  return -0.5 * alpha_ * dd;
}

double PriorModel::centering_move_log_ratio(const GridCopula& c, const GridCopula& c0_old,
                                            const GridCopula& c0_new) const {
  return log_kernel(c, c0_new) - log_kernel(c, c0_old);
}

}  // namespace gridcop
