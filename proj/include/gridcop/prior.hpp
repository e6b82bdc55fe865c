#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "gridcop/copula.hpp"
#include "gridcop/exchange.hpp"
#include "gridcop/grid.hpp"
#include "gridcop/linalg.hpp"
#include "gridcop/reference.hpp"

namespace gridcop {

// Symmetric nonnegative weights over grid cells (zero diagonal), stored as
// sparse rows. Adjacency uses the grid's von Neumann neighbor structure;
// inverse centroid distance is dense and costs O(cells^2) memory.
class WeightSpec {
 public:
  enum class Kind { adjacency, inverse_distance };

  static WeightSpec adjacency(const Grid& g);
  static WeightSpec inverse_distance(const Grid& g);

  Kind kind() const { return kind_; }
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::pair<std::size_t, double>>& row(std::size_t i) const { return rows_[i]; }
  double degree(std::size_t i) const { return degree_[i]; }

 private:
  Kind kind_ = Kind::adjacency;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
  std::vector<double> degree_;  // row sums D_W
};

// Open gamma interval (1/lambda_min, 1/lambda_max) of D^{-1/2} W D^{-1/2}
// inside which the CAR quadratic form is a distance. Throws SingularWeights
// if any row sum is zero.
struct GammaInterval {
  double lo;
  double hi;
  // Strict interior with a margin for eigensolve rounding; the boundaries
  // themselves (gamma = 1 is the ICAR case) must not pass.
  bool contains(double gamma) const {
    const double tol = 1e-9 * std::max(std::abs(lo), std::abs(hi));
    return gamma > lo + tol && gamma < hi - tol;
  }
};
GammaInterval gamma_bounds(const WeightSpec& w);

// Prior precision from its cell-count-normalized parameterization.
double alpha_from_star(double alpha_star, const Grid& g);

struct PriorSpec {
  enum class Variant { squared_l2, car, icar };

  Variant variant = Variant::icar;
  double alpha_star = 0.0;  // 0 = flat prior
  double gamma = 1.0;       // CAR only; ICAR pins gamma = 1
  WeightSpec::Kind weights = WeightSpec::Kind::adjacency;
  ReferenceCopula centering = ReferenceCopula::independence(2);
  // Treat the centering correlation as random (Gaussian centering, d = 2)
  // and sample it with the hit-and-run move.
  bool hierarchical = false;

  static PriorSpec flat(int dims);
};

// Log prior kernel evaluation bound to one grid: caches alpha and the weight
// structure. The kernel is log pi(C) up to the normalizing constant:
// -(alpha/2) D(C, C0) with
//   squared_l2: D = sum_l lambda_l (c_l - c0_l)^2   (densities)
//   car/icar:   D = v^T (D_W - gamma W) v           (v = cell mass deltas)
class PriorModel {
 public:
  PriorModel(PriorSpec spec, const Grid& g);

  const PriorSpec& spec() const { return spec_; }
  double alpha() const { return alpha_; }

  double log_kernel(const GridCopula& c, const GridCopula& c0_on_grid) const;

  // log_kernel(after) - log_kernel(before) for a rectangle exchange,
  // computed from the four changed cells (plus their neighbors for CAR/ICAR).
  double delta_log_kernel(const GridCopula& c, const GridCopula& c0_on_grid,
                          const ExchangeProposal& p) const;

  // Hit-and-run acceptance term: (alpha/2) (D(C, C0_old) - D(C, C0_new)).
  double centering_move_log_ratio(const GridCopula& c, const GridCopula& c0_old,
                                  const GridCopula& c0_new) const;

 private:
  PriorSpec spec_;
  Grid grid_;
  double alpha_;
  std::optional<WeightSpec> weights_;  // car / icar
  std::vector<double> cell_volume_;

  double distance(std::span<const double> v) const;  // D as a quadratic form in v
};

}  // namespace gridcop
