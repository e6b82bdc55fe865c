#include "gridcop/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gridcop {

std::array<std::size_t, 4> site_cells(const Grid& g, const ExchangeSite& s) {
  const int d = g.dims();
  if (s.dim_a < 0 || s.dim_b >= d || s.dim_a >= s.dim_b) {
    throw IndexError("exchange site: need 0 <= dim_a < dim_b < dims");
  }
  if (static_cast<int>(s.fixed.size()) != d) {
    throw IndexError("exchange site: fixed coordinate vector must have one entry per dimension");
  }
  if (s.a1 == s.a2 || s.b1 == s.b2) {
    throw IndexError("exchange site: interval pairs must be distinct");
  }
  CellIndex idx = s.fixed;
  auto flat_at = [&](int a, int b) {
    idx[s.dim_a] = a;
    idx[s.dim_b] = b;
    return g.flat_index(idx);
  };
  return {flat_at(s.a1, s.b1), flat_at(s.a1, s.b2), flat_at(s.a2, s.b1), flat_at(s.a2, s.b2)};
}

EpsilonInterval epsilon_interval(const GridCopula& c, const ExchangeSite& s) {
  const auto cells = site_cells(c.grid(), s);
  const double m11 = c.mass_at(cells[0]);
  const double m12 = c.mass_at(cells[1]);
  const double m21 = c.mass_at(cells[2]);
  const double m22 = c.mass_at(cells[3]);
  EpsilonInterval iv;
  iv.lo = std::min(0.0, std::max(-m12, -m21));
  iv.hi = std::max(0.0, std::min(m11, m22));
  return iv;
}

void apply_exchange_in_place(GridCopula& c, const ExchangeProposal& p) {
  const auto iv = epsilon_interval(c, p.site);
  if (!(p.epsilon >= iv.lo && p.epsilon <= iv.hi)) {
    throw EpsilonOutOfRange("exchange epsilon " + std::to_string(p.epsilon) +
                            " outside [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                            "]");
  }
  c.shift4(site_cells(c.grid(), p.site), p.epsilon);
}

GridCopula apply_exchange(const GridCopula& c, const ExchangeProposal& p) {
  GridCopula out = c;
  apply_exchange_in_place(out, p);
  return out;
}

ExchangeProposal random_exchange(const GridCopula& c, Rng& rng) {
  const Grid& g = c.grid();
  const int d = g.dims();
  std::vector<int> eligible;
  for (int i = 0; i < d; ++i) {
    if (g.intervals(i) >= 2) eligible.push_back(i);
  }
  if (eligible.size() < 2) {
    throw DegenerateGrid("random_exchange: need at least two dimensions with two or more "
                         "intervals");
  }

  ExchangeProposal p;
  // Unordered pair of eligible dimensions, uniform.
  const std::size_t ne = eligible.size();
  const std::size_t ia = rng.uniform_int(ne);
  std::size_t ib = rng.uniform_int(ne - 1);
  if (ib >= ia) ++ib;
  p.site.dim_a = eligible[std::min(ia, ib)];
  p.site.dim_b = eligible[std::max(ia, ib)];

  p.site.fixed.resize(d);
  for (int i = 0; i < d; ++i) {
    p.site.fixed[i] = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(g.intervals(i))));
  }

  auto draw_pair = [&](int m, int& lo, int& hi) {
    const int x = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m)));
    int y = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m - 1)));
    if (y >= x) ++y;
    lo = std::min(x, y);
    hi = std::max(x, y);
  };
  draw_pair(g.intervals(p.site.dim_a), p.site.a1, p.site.a2);
  draw_pair(g.intervals(p.site.dim_b), p.site.b1, p.site.b2);

  const auto iv = epsilon_interval(c, p.site);
  p.epsilon = iv.width() > 0.0 ? std::clamp(rng.uniform(iv.lo, iv.hi), iv.lo, iv.hi) : 0.0;
  return p;
}

std::vector<ExchangeProposal> exchange_sequence_to(const GridCopula& from, const GridCopula& to) {
  const Grid& g = from.grid();
  if (!(g == to.grid())) throw GridMismatch("exchange_sequence_to: copulas on different grids");
  if (g.dims() != 2) {
    throw DimensionMismatch("exchange_sequence_to: implemented for 2-d grids only");
  }
  const int rows = g.intervals(0);
  const int cols = g.intervals(1);
  auto flat = [&](int r, int c) {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(c);
  };

  std::vector<double> cur(from.mass().begin(), from.mass().end());
  std::span<const double> tgt = to.mass();
  std::vector<ExchangeProposal> seq;
  constexpr double kFixed = 1e-15;

  // Fix columns left to right; marginal uniformity settles the last column
  // automatically. Each move exchanges mass between a surplus row and a
  // deficit row of the working column, borrowing capacity from a column to
  // the right of the deficit row.
  const std::size_t step_budget =
      4 * g.cell_count() * static_cast<std::size_t>(cols) + 64;
  std::size_t steps = 0;
  for (int col = 0; col + 1 < cols; ++col) {
    while (true) {
      int hi_row = -1, lo_row = -1;
      double hi_gap = kFixed, lo_gap = kFixed;
      for (int r = 0; r < rows; ++r) {
        const double gap = cur[flat(r, col)] - tgt[flat(r, col)];
        if (gap > hi_gap) {
          hi_gap = gap;
          hi_row = r;
        }
        if (-gap > lo_gap) {
          lo_gap = -gap;
          lo_row = r;
        }
      }
      if (hi_row < 0 || lo_row < 0) break;

      // Donor column: any column right of `col` where the deficit row still
      // holds mass; one always exists while the deficit persists.
      int donor = -1;
      double donor_mass = 0.0;
      for (int c2 = col + 1; c2 < cols; ++c2) {
        if (cur[flat(lo_row, c2)] > donor_mass) {
          donor_mass = cur[flat(lo_row, c2)];
          donor = c2;
        }
      }
      if (donor < 0) {
        throw NumericalError("exchange_sequence_to: deficit row has no remaining mass to move");
      }

      ExchangeProposal p;
      p.site.dim_a = 0;
      p.site.dim_b = 1;
      p.site.fixed.assign(2, 0);
      p.site.a1 = hi_row;
      p.site.a2 = lo_row;
      p.site.b1 = col;
      p.site.b2 = donor;
      p.epsilon = std::min({hi_gap, lo_gap, donor_mass});

      cur[flat(hi_row, col)] -= p.epsilon;
      cur[flat(hi_row, donor)] += p.epsilon;
      cur[flat(lo_row, col)] += p.epsilon;
      cur[flat(lo_row, donor)] -= p.epsilon;
      seq.push_back(std::move(p));

      if (++steps > step_budget) {
        throw NumericalError("exchange_sequence_to: step budget exceeded");
      }
    }
  }
  return seq;
}

}  // namespace gridcop
