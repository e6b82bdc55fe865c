#include "gridcop/measures.hpp"

#include <algorithm>
#include <cmath>

namespace gridcop {

namespace {

void require_2d(const GridCopula& c, const char* what) {
  if (c.grid().dims() != 2) {
    throw DimensionMismatch(std::string(what) + " is defined for 2-d grid copulas");
  }
}

// Re-expresses both copulas on their common refinement and folds
// f(c1_density, c2_density, cell_volume) over its cells.
template <typename F>
double fold_common(const GridCopula& a, const GridCopula& b, F f) {
  if (a.grid().dims() != b.grid().dims()) {
    throw DimensionMismatch("copulas have different dimension counts");
  }
  if (a.grid() == b.grid()) {
    double total = 0.0;
    for (std::size_t c = 0; c < a.grid().cell_count(); ++c) {
      const double vol = a.grid().cell_volume_flat(c);
      total += f(a.mass_at(c) / vol, b.mass_at(c) / vol, vol);
    }
    return total;
  }
  const Grid common = common_refinement(a.grid(), b.grid());
  const GridCopula ra = refine_to(a, common);
  const GridCopula rb = refine_to(b, common);
  double total = 0.0;
  for (std::size_t c = 0; c < common.cell_count(); ++c) {
    const double vol = common.cell_volume_flat(c);
    total += f(ra.mass_at(c) / vol, rb.mass_at(c) / vol, vol);
  }
  return total;
}

}  // namespace

double spearman_rho(const GridCopula& c) {
  require_2d(c, "spearman_rho");
  const Grid& g = c.grid();
  const int m0 = g.intervals(0);
  const int m1 = g.intervals(1);
  double s = 0.0;
  for (int k = 0; k < m0; ++k) {
    const double ax = g.upper_edge(0, k), ax0 = g.lower_edge(0, k);
    const double dx2 = ax * ax - ax0 * ax0;
    for (int l = 0; l < m1; ++l) {
      const double by = g.upper_edge(1, l), by0 = g.lower_edge(1, l);
      const double dy2 = by * by - by0 * by0;
      const std::size_t f = static_cast<std::size_t>(k) * m1 + l;
      s += dx2 * dy2 * c.cell_density(f);
    }
  }
  return 3.0 * s - 3.0;
}

double kendall_tau(const GridCopula& c) {
  require_2d(c, "kendall_tau");
  const Grid& g = c.grid();
  const int m0 = g.intervals(0);
  const int m1 = g.intervals(1);
  auto flat = [&](int k, int l) { return static_cast<std::size_t>(k) * m1 + l; };

  // Inside cell (k,l) the CDF is bilinear:
  //   C(u,v) = C00 + mx (u-a0) + my (v-b0) + dens (u-a0)(v-b0),
  // where C00 is the CDF at the cell's lower corner, mx = dC/du along the
  // bottom edge (constant in u within the column) and my = dC/dv along the
  // left edge. Integrating C * dens over the cell gives a polynomial in the
  // cell widths; summing over cells is exact.
  double total = 0.0;
  std::vector<double> corner(static_cast<std::size_t>(m1) + 1, 0.0);  // CDF at (a_k, b_l)
  std::vector<double> my(static_cast<std::size_t>(m1), 0.0);          // left-edge flux per row
  for (int k = 0; k < m0; ++k) {
    const double w = g.interval_width(0, k);
    std::vector<double> next_corner(static_cast<std::size_t>(m1) + 1, 0.0);
    double mx = 0.0;  // bottom-edge flux, accumulated up the column
    for (int l = 0; l < m1; ++l) {
      const double h = g.interval_width(1, l);
      const double dens = c.cell_density(flat(k, l));
      total += dens * (corner[l] * w * h + mx * w * w * h / 2.0 + my[l] * w * h * h / 2.0 +
                       dens * w * w * h * h / 4.0);
      mx += dens * h;
      next_corner[l + 1] = corner[l + 1] + mx * w;
      my[l] += dens * w;
    }
    corner = std::move(next_corner);
  }
  return 4.0 * total - 1.0;
}

double hellinger(const GridCopula& c1, const GridCopula& c2) {
  const double affinity = fold_common(c1, c2, [](double d1, double d2, double vol) {
    return std::sqrt(d1 * d2) * vol;
  });
  return std::sqrt(std::max(0.0, 1.0 - affinity));
}

double integrated_squared_error(const GridCopula& c1, const GridCopula& c2) {
  return fold_common(c1, c2, [](double d1, double d2, double vol) {
    const double diff = d1 - d2;
    return diff * diff * vol;
  });
}

}  // namespace gridcop
