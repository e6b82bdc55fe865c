#include "gridcop/copula.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridcop {

GridCopula::GridCopula(Grid grid, std::vector<double> mass, double tol)
    : grid_(std::move(grid)), mass_(std::move(mass)) {
  if (mass_.size() != grid_.cell_count()) {
    throw DimensionMismatch("mass vector has " + std::to_string(mass_.size()) +
                            " entries, grid has " + std::to_string(grid_.cell_count()) +
                            " cells");
  }
  check(tol);
}

GridCopula GridCopula::independence(const Grid& g) {
  std::vector<double> mass(g.cell_count());
  for (std::size_t f = 0; f < g.cell_count(); ++f) mass[f] = g.cell_volume_flat(f);
  return GridCopula(g, std::move(mass));
}

void GridCopula::set_mass_unchecked(std::vector<double> mass) {
  if (mass.size() != mass_.size()) throw DimensionMismatch("set_mass_unchecked: size mismatch");
  mass_ = std::move(mass);
}

double GridCopula::max_invariant_violation() const {
  double worst = 0.0;
  double total = 0.0;
  for (double m : mass_) {
    if (m < 0.0) worst = std::max(worst, -m);
    total += m;
  }
  worst = std::max(worst, std::abs(total - 1.0));

  // Marginal uniformity: per dimension, per interval, summed cell mass must
  // equal the interval width.
  const int d = grid_.dims();
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) {
    std::vector<double> sums(grid_.intervals(i), 0.0);
    for (std::size_t f = 0; f < mass_.size(); ++f) {
      grid_.cell_at(f, idx);
      sums[idx[i]] += mass_[f];
    }
    for (int k = 0; k < grid_.intervals(i); ++k) {
      worst = std::max(worst, std::abs(sums[k] - grid_.interval_width(i, k)));
    }
  }
  return worst;
}

void GridCopula::check(double tol) const {
  const double v = max_invariant_violation();
  if (v > tol) {
    throw ValidationError("grid-copula invariant violated by " + std::to_string(v) +
                          " (tolerance " + std::to_string(tol) + ")");
  }
}

double GridCopula::density(std::span<const double> u) const {
  const std::size_t f = grid_.locate_flat(u);
  return mass_[f] / grid_.cell_volume_flat(f);
}

double GridCopula::cdf(std::span<const double> u) const {
  const int d = grid_.dims();
  if (static_cast<int>(u.size()) != d) throw DimensionMismatch("cdf: point dimension mismatch");
  // Per-dimension coverage: intervals fully below u contribute factor 1, the
  // interval containing u contributes its covered fraction.
  std::vector<int> last(d);     // highest interval with nonzero coverage
  std::vector<double> frac(d);  // coverage fraction of that interval
  for (int i = 0; i < d; ++i) {
    const double x = u[i];
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cdf: coordinate outside [0,1]");
    if (x == 0.0) return 0.0;
    const int k = grid_.locate_interval(i, x);
    last[i] = k;
    frac[i] = (x - grid_.lower_edge(i, k)) / grid_.interval_width(i, k);
  }
  double total = 0.0;
  std::vector<int> idx(d, 0);
  while (true) {
    double factor = 1.0;
    for (int i = 0; i < d; ++i) {
      if (idx[i] == last[i]) factor *= frac[i];
    }
    total += factor * mass_[grid_.flat_index(idx)];
    // Advance odometer over the box [0, last].
    int i = d - 1;
    while (i >= 0) {
      if (idx[i] < last[i]) {
        ++idx[i];
        break;
      }
      idx[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return total;
}

GridCopula project_cdf(const CdfFn& cdf, const Grid& g, double tol) {
  const int d = g.dims();
  // Corner lattice: per dimension the points {0} + cuts.
  std::vector<std::size_t> corner_stride(d);
  std::size_t corners = 1;
  for (int i = d - 1; i >= 0; --i) {
    corner_stride[i] = corners;
    corners *= static_cast<std::size_t>(g.intervals(i)) + 1;
  }
  std::vector<double> corner_cdf(corners);
  {
    std::vector<double> pt(d);
    std::vector<int> ci(d, 0);
    for (std::size_t f = 0; f < corners; ++f) {
      bool on_boundary = false;
      for (int i = 0; i < d; ++i) {
        pt[i] = ci[i] == 0 ? 0.0 : g.upper_edge(i, ci[i] - 1);
        if (ci[i] == 0) on_boundary = true;
      }
      corner_cdf[f] = on_boundary ? 0.0 : cdf(pt);
      int i = d - 1;
      while (i >= 0) {
        if (ci[i] < g.intervals(i)) {
          ++ci[i];
          break;
        }
        ci[i] = 0;
        --i;
      }
      if (i < 0) break;
    }
  }

  std::vector<double> mass(g.cell_count());
  std::vector<int> idx(d);
  double worst_negative = 0.0;
  for (std::size_t f = 0; f < g.cell_count(); ++f) {
    g.cell_at(f, idx);
    // Inclusion-exclusion over the 2^d corners of the cell.
    double m = 0.0;
    for (unsigned bits = 0; bits < (1u << d); ++bits) {
      std::size_t corner = 0;
      int sign = 1;
      for (int i = 0; i < d; ++i) {
        const bool low = (bits >> i) & 1u;
        if (low) sign = -sign;
        corner += corner_stride[i] * static_cast<std::size_t>(idx[i] + (low ? 0 : 1));
      }
      m += sign * corner_cdf[corner];
    }
    if (m < worst_negative) worst_negative = m;
    mass[f] = m;
  }
  if (worst_negative < -1e-9) {
    throw NumericalError("project: inclusion-exclusion produced mass " +
                         std::to_string(worst_negative) + "; reference CDF is not a copula CDF");
  }
  double total = 0.0;
  for (auto& m : mass) {
    if (m < 0.0) m = 0.0;
    total += m;
  }
  if (!(total > 0.0)) throw NumericalError("project: zero total mass");
  for (auto& m : mass) m /= total;
  return GridCopula(g, std::move(mass), tol);
}

GridCopula grid_division(const GridCopula& c, int dim, double new_cut) {
  const Grid& g = c.grid();
  const Grid fine = g.refine(dim, new_cut);
  return refine_to(c, fine);
}

GridCopula refine_to(const GridCopula& c, const Grid& finer) {
  const Grid& g = c.grid();
  if (!g.refined_by(finer)) {
    throw GridMismatch("refine_to: target grid does not refine the source grid");
  }
  const int d = g.dims();
  // Per dimension: parent interval of each fine interval and the width ratio.
  std::vector<std::vector<int>> parent(d);
  std::vector<std::vector<double>> ratio(d);
  for (int i = 0; i < d; ++i) {
    parent[i].resize(finer.intervals(i));
    ratio[i].resize(finer.intervals(i));
    for (int k = 0; k < finer.intervals(i); ++k) {
      const int p = g.locate_interval(i, finer.upper_edge(i, k));
      parent[i][k] = p;
      ratio[i][k] = finer.interval_width(i, k) / g.interval_width(i, p);
    }
  }
  std::vector<double> mass(finer.cell_count());
  std::vector<int> idx(d);
  CellIndex pidx(d);
  for (std::size_t f = 0; f < finer.cell_count(); ++f) {
    finer.cell_at(f, idx);
    double r = 1.0;
    for (int i = 0; i < d; ++i) {
      pidx[i] = parent[i][idx[i]];
      r *= ratio[i][idx[i]];
    }
    mass[f] = c.mass_at(pidx) * r;
  }
  return GridCopula(finer, std::move(mass), kCopulaTolLoose);
}

GridCopula bivariate_margin(const GridCopula& c, int dim_i, int dim_j) {
  const Grid& g = c.grid();
  if (dim_i < 0 || dim_j >= g.dims() || dim_i >= dim_j) {
    throw IndexError("bivariate_margin: need 0 <= i < j < dims");
  }
  std::vector<std::vector<double>> cuts = {
      std::vector<double>(g.cuts(dim_i).begin(), g.cuts(dim_i).end()),
      std::vector<double>(g.cuts(dim_j).begin(), g.cuts(dim_j).end())};
  Grid marg(std::move(cuts));
  std::vector<double> mass(marg.cell_count(), 0.0);
  std::vector<int> idx(g.dims());
  const std::size_t mj = static_cast<std::size_t>(g.intervals(dim_j));
  for (std::size_t f = 0; f < g.cell_count(); ++f) {
    g.cell_at(f, idx);
    mass[static_cast<std::size_t>(idx[dim_i]) * mj + static_cast<std::size_t>(idx[dim_j])] +=
        c.mass_at(f);
  }
  return GridCopula(marg, std::move(mass), kCopulaTolLoose);
}

}  // namespace gridcop
