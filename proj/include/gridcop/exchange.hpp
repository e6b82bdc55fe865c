#pragma once

#include <array>
#include <vector>

#include "gridcop/copula.hpp"
#include "gridcop/grid.hpp"
#include "gridcop/rng.hpp"

namespace gridcop {

// Location of a rectangle exchange: a coordinate plane (dim_a < dim_b), one
// fixed interval index for every other dimension, and two distinct interval
// indices per plane axis. The four implied cells are
// (a1,b1), (a1,b2), (a2,b1), (a2,b2).
struct ExchangeSite {
  int dim_a = 0;
  int dim_b = 1;
  std::vector<int> fixed;  // size d; entries at dim_a / dim_b are ignored
  int a1 = 0, a2 = 1;
  int b1 = 0, b2 = 1;
};

struct ExchangeProposal {
  ExchangeSite site;
  double epsilon = 0.0;
};

struct EpsilonInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Flat indices of the four cells of a site, in the order
// (a1,b1), (a1,b2), (a2,b1), (a2,b2). Validates the site.
std::array<std::size_t, 4> site_cells(const Grid& g, const ExchangeSite& s);

// Valid epsilon range: lo = max{-m(a1,b2), -m(a2,b1)}, hi = min{m(a1,b1),
// m(a2,b2)}. Always contains 0.
EpsilonInterval epsilon_interval(const GridCopula& c, const ExchangeSite& s);

// Masses shifted by (-e, +e, +e, -e); throws EpsilonOutOfRange if epsilon
// leaves the valid interval.
GridCopula apply_exchange(const GridCopula& c, const ExchangeProposal& p);
void apply_exchange_in_place(GridCopula& c, const ExchangeProposal& p);

// Random rectangle exchange: plane, fixed coordinates and index pairs drawn
// uniformly, epsilon uniform on its valid interval. The induced proposal
// density is symmetric. Throws DegenerateGrid if fewer than two dimensions
// have two or more intervals.
ExchangeProposal random_exchange(const GridCopula& c, Rng& rng);

// Finite exchange sequence transforming `from` into `to` on a shared 2-d
// grid (test oracle for the reachability property). Applying the returned
// proposals to `from` in order reproduces `to` to ~1e-12 per cell, and every
// intermediate state is a valid grid copula.
std::vector<ExchangeProposal> exchange_sequence_to(const GridCopula& from, const GridCopula& to);

}  // namespace gridcop
