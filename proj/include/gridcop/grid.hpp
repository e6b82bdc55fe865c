#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gridcop/errors.hpp"

namespace gridcop {

// Cell index: one interval index per dimension, 0-based, idx[i] in [0, m_i).
using CellIndex = std::vector<int>;

// Orthogonal grid of [0,1]^d. Per dimension, a strictly increasing sequence
// of cut points in (0,1] ending exactly at 1; the implicit lower bound 0 is
// not stored. Cell k of dimension i is the half-open interval
// (cut[k-1], cut[k]] with cut[-1] = 0. Immutable after construction.
class Grid {
 public:
  // Validates and builds. Throws ValidationError naming the offending
  // dimension and rule.
  explicit Grid(std::vector<std::vector<double>> cuts_per_dim);

  // Equally spaced m intervals per dimension: cuts i/m, i = 1..m.
  static Grid uniform(int dims, int intervals_per_dim);

  int dims() const { return static_cast<int>(cuts_.size()); }
  int intervals(int dim) const { return static_cast<int>(cuts_[dim].size()); }
  std::span<const double> cuts(int dim) const { return cuts_[dim]; }
  std::size_t cell_count() const { return cell_count_; }

  double lower_edge(int dim, int k) const { return k == 0 ? 0.0 : cuts_[dim][k - 1]; }
  double upper_edge(int dim, int k) const { return cuts_[dim][k]; }
  double interval_width(int dim, int k) const { return upper_edge(dim, k) - lower_edge(dim, k); }
  double interval_center(int dim, int k) const {
    return 0.5 * (lower_edge(dim, k) + upper_edge(dim, k));
  }

  // Enumeration order is lexicographic in the cell index, dimension 0
  // slowest. Flat index = ((idx0*m1 + idx1)*m2 + idx2)*...
  std::size_t flat_index(const CellIndex& c) const;
  CellIndex cell_at(std::size_t flat) const;
  // Writes the cell index for `flat` into `out` (out.size() == dims()).
  void cell_at(std::size_t flat, std::span<int> out) const;

  double cell_volume(const CellIndex& c) const;
  double cell_volume_flat(std::size_t flat) const;

  // Von Neumann adjacency: cells differing by +-1 in exactly one coordinate.
  std::vector<CellIndex> neighbors(const CellIndex& c) const;
  // Flat-index variant, appended to `out` (cleared first).
  void neighbors_flat(std::size_t flat, std::vector<std::size_t>& out) const;

  // Cell containing u, half-open convention; coordinate 0 maps to interval 0.
  CellIndex locate(std::span<const double> u) const;
  std::size_t locate_flat(std::span<const double> u) const;
  // Interval index in one dimension for coordinate value x in [0,1].
  int locate_interval(int dim, double x) const;

  // Grid with one extra cut in `dim`; all other dimensions unchanged.
  Grid refine(int dim, double new_cut) const;

  // Per-dimension union of cut sets.
  friend Grid common_refinement(const Grid& a, const Grid& b);

  friend bool operator==(const Grid& a, const Grid& b) { return a.cuts_ == b.cuts_; }

  // True if every cut of this grid appears in `finer` (per dimension).
  bool refined_by(const Grid& finer) const;

  void check_cell(const CellIndex& c) const;

 private:
  std::vector<std::vector<double>> cuts_;
  std::vector<std::size_t> stride_;  // stride_[i] = prod of m_j for j > i
  std::size_t cell_count_ = 0;

  void init_strides();
};

Grid common_refinement(const Grid& a, const Grid& b);

// Every interval split into `factor` equal parts (upper edges preserved
// exactly). factor <= 1 returns the grid unchanged.
Grid refine_uniformly(const Grid& g, int factor);

}  // namespace gridcop
