#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gridcop/grid.hpp"

namespace gridcop {

// Tolerances for the grid-copula invariants: construction-time checks and
// checks after long transformation chains.
inline constexpr double kCopulaTolStrict = 1e-10;
inline constexpr double kCopulaTolLoose = 1e-9;

// A grid-uniform copula: one probability per grid cell, stored densely in
// enumeration order. The density is constant inside each cell, the total
// mass is 1, and every one-dimensional marginal is uniform.
class GridCopula {
 public:
  // Validates mass vector against the invariants at tolerance `tol`.
  GridCopula(Grid grid, std::vector<double> mass, double tol = kCopulaTolStrict);

  static GridCopula independence(const Grid& g);

  const Grid& grid() const { return grid_; }
  std::span<const double> mass() const { return mass_; }
  double mass_at(std::size_t flat) const { return mass_[flat]; }
  double mass_at(const CellIndex& c) const { return mass_[grid_.flat_index(c)]; }
  double cell_density(std::size_t flat) const {
    return mass_[flat] / grid_.cell_volume_flat(flat);
  }

  // Piecewise-constant density at u.
  double density(std::span<const double> u) const;
  // Mass of the box (0, u], exact for the piecewise-uniform distribution.
  double cdf(std::span<const double> u) const;

  // Throws ValidationError if any invariant fails at tolerance `tol`.
  void check(double tol = kCopulaTolStrict) const;
  // Largest invariant violation (mass negativity, total-mass error, or
  // marginal-uniformity deviation).
  double max_invariant_violation() const;

  // Sampler hook: shifts (-e, +e, +e, -e) across four cells, no validation.
  void shift4(const std::array<std::size_t, 4>& cells, double epsilon) {
    mass_[cells[0]] -= epsilon;
    mass_[cells[1]] += epsilon;
    mass_[cells[2]] += epsilon;
    mass_[cells[3]] -= epsilon;
  }
  // Sampler hook: replaces the mass vector without validation.
  void set_mass_unchecked(std::vector<double> mass);

 private:
  Grid grid_;
  std::vector<double> mass_;
};

// CDF of a d-dimensional distribution on [0,1]^d, used for projection.
using CdfFn = std::function<double(std::span<const double>)>;

// Grid-uniform version of the distribution with CDF `cdf`: each cell gets the
// probability the reference assigns to it, by 2^d-corner inclusion-exclusion.
// Negative cell masses above -1e-9 (rounding) are clamped to zero and the
// result renormalized; anything worse throws NumericalError.
GridCopula project_cdf(const CdfFn& cdf, const Grid& g, double tol = kCopulaTolLoose);

// Same distribution on a grid with one extra cut: split cells share their
// mass proportionally to volume.
GridCopula grid_division(const GridCopula& c, int dim, double new_cut);

// Same distribution expressed on `finer`, which must refine c's grid.
GridCopula refine_to(const GridCopula& c, const Grid& finer);

// 2-d marginal copula for dimensions i < j.
GridCopula bivariate_margin(const GridCopula& c, int dim_i, int dim_j);

}  // namespace gridcop
