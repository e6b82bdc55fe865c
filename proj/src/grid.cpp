#include "gridcop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridcop {

namespace {

std::string dim_msg(int dim, const std::string& rule) {
  return "grid dimension " + std::to_string(dim) + ": " + rule;
}

}  // namespace

Grid::Grid(std::vector<std::vector<double>> cuts_per_dim) : cuts_(std::move(cuts_per_dim)) {
  if (cuts_.size() < 2) {
    throw ValidationError("grid needs at least 2 dimensions, got " + std::to_string(cuts_.size()));
  }
  for (int i = 0; i < dims(); ++i) {
    const auto& c = cuts_[i];
    if (c.empty()) throw ValidationError(dim_msg(i, "empty cut sequence"));
    double prev = 0.0;
    for (double x : c) {
      if (!(x > prev)) {
        throw ValidationError(dim_msg(i, "cuts must be strictly increasing in (0,1], saw " +
                                             std::to_string(x)));
      }
      prev = x;
    }
    if (c.back() != 1.0) throw ValidationError(dim_msg(i, "last cut must be exactly 1"));
  }
  init_strides();
}

Grid Grid::uniform(int dims, int intervals_per_dim) {
  if (dims < 2) throw ValidationError("uniform grid needs dims >= 2");
  if (intervals_per_dim < 1) throw ValidationError("uniform grid needs m >= 1");
  std::vector<double> cuts(intervals_per_dim);
  for (int k = 0; k < intervals_per_dim; ++k) {
    cuts[k] = static_cast<double>(k + 1) / static_cast<double>(intervals_per_dim);
  }
  cuts.back() = 1.0;
  return Grid(std::vector<std::vector<double>>(dims, cuts));
}

void Grid::init_strides() {
  stride_.assign(cuts_.size(), 1);
  std::size_t s = 1;
  for (int i = dims() - 1; i >= 0; --i) {
    stride_[i] = s;
    s *= static_cast<std::size_t>(intervals(i));
  }
  cell_count_ = s;
}

void Grid::check_cell(const CellIndex& c) const {
  if (static_cast<int>(c.size()) != dims()) {
    throw IndexError("cell index has " + std::to_string(c.size()) + " coordinates, grid has " +
                     std::to_string(dims()));
  }
  for (int i = 0; i < dims(); ++i) {
    if (c[i] < 0 || c[i] >= intervals(i)) {
      throw IndexError("cell coordinate " + std::to_string(i) + " out of range: " +
                       std::to_string(c[i]));
    }
  }
}

std::size_t Grid::flat_index(const CellIndex& c) const {
  check_cell(c);
  std::size_t f = 0;
  for (int i = 0; i < dims(); ++i) f += static_cast<std::size_t>(c[i]) * stride_[i];
  return f;
}

CellIndex Grid::cell_at(std::size_t flat) const {
  CellIndex c(dims());
  cell_at(flat, c);
  return c;
}

void Grid::cell_at(std::size_t flat, std::span<int> out) const {
  if (flat >= cell_count_) throw IndexError("flat cell index out of range");
  for (int i = 0; i < dims(); ++i) {
    out[i] = static_cast<int>(flat / stride_[i]);
    flat %= stride_[i];
  }
}

double Grid::cell_volume(const CellIndex& c) const {
  check_cell(c);
  double v = 1.0;
  for (int i = 0; i < dims(); ++i) v *= interval_width(i, c[i]);
  return v;
}

double Grid::cell_volume_flat(std::size_t flat) const {
  if (flat >= cell_count_) throw IndexError("flat cell index out of range");
  double v = 1.0;
  for (int i = 0; i < dims(); ++i) {
    const int k = static_cast<int>(flat / stride_[i]);
    flat %= stride_[i];
    v *= interval_width(i, k);
  }
  return v;
}

std::vector<CellIndex> Grid::neighbors(const CellIndex& c) const {
  check_cell(c);
  std::vector<CellIndex> out;
  out.reserve(2 * static_cast<std::size_t>(dims()));
  for (int i = 0; i < dims(); ++i) {
    if (c[i] > 0) {
      CellIndex n = c;
      --n[i];
      out.push_back(std::move(n));
    }
    if (c[i] + 1 < intervals(i)) {
      CellIndex n = c;
      ++n[i];
      out.push_back(std::move(n));
    }
  }
  return out;
}

void Grid::neighbors_flat(std::size_t flat, std::vector<std::size_t>& out) const {
  out.clear();
  if (flat >= cell_count_) throw IndexError("flat cell index out of range");
  std::size_t rem = flat;
  for (int i = 0; i < dims(); ++i) {
    const int k = static_cast<int>(rem / stride_[i]);
    rem %= stride_[i];
    if (k > 0) out.push_back(flat - stride_[i]);
    if (k + 1 < intervals(i)) out.push_back(flat + stride_[i]);
  }
}

int Grid::locate_interval(int dim, double x) const {
  if (!(x >= 0.0 && x <= 1.0) || std::isnan(x)) {
    throw DomainError("coordinate " + std::to_string(x) + " outside [0,1]");
  }
  const auto& c = cuts_[dim];
  // First cut >= x; x == 0 lands in interval 0 by the same rule.
  const auto it = std::lower_bound(c.begin(), c.end(), x);
  return static_cast<int>(it - c.begin()) == intervals(dim)
             ? intervals(dim) - 1  // x == 1 exactly, guarded by range check above
             : static_cast<int>(it - c.begin());
}

CellIndex Grid::locate(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dims()) {
    throw DimensionMismatch("point has " + std::to_string(u.size()) + " coordinates, grid has " +
                            std::to_string(dims()));
  }
  CellIndex c(dims());
  for (int i = 0; i < dims(); ++i) c[i] = locate_interval(i, u[i]);
  return c;
}

std::size_t Grid::locate_flat(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dims()) {
    throw DimensionMismatch("point has " + std::to_string(u.size()) + " coordinates, grid has " +
                            std::to_string(dims()));
  }
  std::size_t f = 0;
  for (int i = 0; i < dims(); ++i) {
    f += static_cast<std::size_t>(locate_interval(i, u[i])) * stride_[i];
  }
  return f;
}

Grid Grid::refine(int dim, double new_cut) const {
  if (dim < 0 || dim >= dims()) throw IndexError("refine: dimension out of range");
  if (!(new_cut > 0.0 && new_cut < 1.0)) {
    throw ValidationError("refine: new cut must lie strictly inside (0,1)");
  }
  auto cuts = cuts_;
  auto& c = cuts[dim];
  const auto it = std::lower_bound(c.begin(), c.end(), new_cut);
  if (it != c.end() && *it == new_cut) {
    throw ValidationError("refine: cut " + std::to_string(new_cut) + " already present");
  }
  c.insert(it, new_cut);
  return Grid(std::move(cuts));
}

Grid common_refinement(const Grid& a, const Grid& b) {
  if (a.dims() != b.dims()) {
    throw DimensionMismatch("common_refinement: grids have different dimension counts");
  }
  std::vector<std::vector<double>> cuts(a.dims());
  for (int i = 0; i < a.dims(); ++i) {
    std::vector<double> merged;
    merged.reserve(a.cuts_[i].size() + b.cuts_[i].size());
    std::set_union(a.cuts_[i].begin(), a.cuts_[i].end(), b.cuts_[i].begin(), b.cuts_[i].end(),
                   std::back_inserter(merged));
    cuts[i] = std::move(merged);
  }
  return Grid(std::move(cuts));
}

Grid refine_uniformly(const Grid& g, int factor) {
  if (factor <= 1) return g;
  std::vector<std::vector<double>> cuts;
  cuts.reserve(static_cast<std::size_t>(g.dims()));
  for (int i = 0; i < g.dims(); ++i) {
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(g.intervals(i)) * factor);
    for (int k = 0; k < g.intervals(i); ++k) {
      const double lo = g.lower_edge(i, k);
      const double w = g.interval_width(i, k);
      for (int s = 1; s <= factor; ++s) {
        c.push_back(s == factor ? g.upper_edge(i, k) : lo + w * s / factor);
      }
    }
    cuts.push_back(std::move(c));
  }
  return Grid(std::move(cuts));
}

bool Grid::refined_by(const Grid& finer) const {
  if (finer.dims() != dims()) return false;
  for (int i = 0; i < dims(); ++i) {
    if (!std::includes(finer.cuts_[i].begin(), finer.cuts_[i].end(), cuts_[i].begin(),
                       cuts_[i].end())) {
      return false;
    }
  }
  return true;
}

}  // namespace gridcop
