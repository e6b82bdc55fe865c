#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "gridcop/copula.hpp"
#include "gridcop/exchange.hpp"
#include "gridcop/grid.hpp"
#include "gridcop/rng.hpp"

namespace gridcop::testing {

// 2x2 copula with mass 1/2 on each diagonal cell.
inline GridCopula checkerboard() {
  return GridCopula(Grid::uniform(2, 2), {0.5, 0.0, 0.0, 0.5});
}

// Random grid copula generated by a burst of random exchanges from
// independence; stays exactly inside the copula polytope.
inline GridCopula random_copula(const Grid& g, int exchanges, std::uint64_t seed) {
  GridCopula c = GridCopula::independence(g);
  Rng rng(seed);
  for (int i = 0; i < exchanges; ++i) {
    apply_exchange_in_place(c, random_exchange(c, rng));
  }
  return c;
}

// Draws from a grid copula: cell by mass, uniform inside the cell.
inline std::vector<double> sample_grid_copula(const GridCopula& c, std::size_t n, Rng& rng) {
  const Grid& g = c.grid();
  const int d = g.dims();
  std::vector<double> cumulative(g.cell_count());
  double acc = 0.0;
  for (std::size_t f = 0; f < g.cell_count(); ++f) {
    acc += c.mass_at(f);
    cumulative[f] = acc;
  }
  std::vector<double> out(n * static_cast<std::size_t>(d));
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * acc;
    const std::size_t f = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    g.cell_at(std::min(f, g.cell_count() - 1), idx);
    for (int k = 0; k < d; ++k) {
      out[i * d + k] = g.lower_edge(k, idx[k]) + rng.uniform() * g.interval_width(k, idx[k]);
    }
  }
  return out;
}

// Concordance estimate of Kendall's tau from a 2-d point sample, using
// disjoint consecutive pairs so the terms are independent.
inline double mc_kendall_tau(const std::vector<double>& pts) {
  const std::size_t n = pts.size() / 2;
  std::size_t pairs = 0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    const double dx = pts[2 * i] - pts[2 * (i + 1)];
    const double dy = pts[2 * i + 1] - pts[2 * (i + 1) + 1];
    s += dx * dy > 0.0 ? 1.0 : (dx * dy < 0.0 ? -1.0 : 0.0);
    ++pairs;
  }
  return s / static_cast<double>(pairs);
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2048) {
  double s = f(a) + f(b);
  const double h = (b - a) / n;
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace gridcop::testing
