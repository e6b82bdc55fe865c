#pragma once

#include "gridcop/copula.hpp"

namespace gridcop {

// Spearman's rho for a 2-d grid copula: 12 int uv c(u,v) du dv - 3, exact.
double spearman_rho(const GridCopula& c);

// Kendall's tau for a 2-d grid copula: 4 int C(u,v) c(u,v) du dv - 1,
// evaluated exactly per cell using the bilinearity of the CDF inside cells.
double kendall_tau(const GridCopula& c);

// Hellinger distance sqrt(1 - int sqrt(c1 c2)), exact on the common grid
// refinement. Grids may differ; dimensions must match.
double hellinger(const GridCopula& c1, const GridCopula& c2);

// Integrated squared density error int (c1 - c2)^2, exact on the common
// refinement.
double integrated_squared_error(const GridCopula& c1, const GridCopula& c2);

}  // namespace gridcop
