#include <doctest.h>

#include <cmath>
#include <limits>

#include "gridcop/likelihood.hpp"
#include "gridcop/normal.hpp"
#include "helpers.hpp"

using namespace gridcop;
using gridcop::testing::checkerboard;
using gridcop::testing::random_copula;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

MarginalSpec known(MarginalSpec::Kind k) {
  MarginalSpec m;
  m.kind = k;
  return m;
}
}  // namespace

TEST_CASE("pseudo observations") {
  Dataset data;
  data.n = 2;
  data.d = 2;
  data.y = {0.0, 0.0, 1.0, -1.0};

  const std::vector<MarginalSpec> normals(2, known(MarginalSpec::Kind::known_std_normal));
  const auto u = pseudo_observations(data, normals, {{}, {}});
  CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u[2] == doctest::Approx(norm_cdf(1.0)).epsilon(1e-14));
  CHECK(u[3] == doctest::Approx(norm_cdf(-1.0)).epsilon(1e-14));

  // Uniform marginals are the identity on [0,1].
  Dataset unit;
  unit.n = 1;
  unit.d = 2;
  unit.y = {0.42, 0.87};
  const std::vector<MarginalSpec> uniforms(2, known(MarginalSpec::Kind::known_uniform));
  const auto v = pseudo_observations(unit, uniforms, {{}, {}});
  CHECK(v[0] == 0.42);
  CHECK(v[1] == 0.87);

  // Mixture marginal at zero is 1/2 by symmetry.
  MarginalSpec mix = known(MarginalSpec::Kind::known_gauss_mixture);
  CHECK(mix.cdf(0.0, {}) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("known_table marginal") {
  MarginalSpec t = known(MarginalSpec::Kind::known_table);
  t.table = {{0.0, 0.0}, {1.0, 0.25}, {2.0, 1.0}};
  CHECK(t.cdf(0.5, {}) == doctest::Approx(0.125));
  CHECK(t.cdf(1.5, {}) == doctest::Approx(0.625));
  CHECK(t.cdf(-3.0, {}) == 0.0);
  CHECK(t.cdf(9.0, {}) == 1.0);
  CHECK(t.log_pdf(0.5, {}) == doctest::Approx(std::log(0.25)));
}

TEST_CASE("cell counts") {
  const Grid g = Grid::uniform(2, 2);
  const std::vector<double> u{0.1, 0.1, 0.2, 0.2, 0.3, 0.4, 0.1, 0.05};
  const auto counts = cell_counts(u, 4, g);
  CHECK(counts[0] == 4);
  CHECK(counts[1] + counts[2] + counts[3] == 0);

  const auto empty = cell_counts(std::vector<double>{}, 0, g);
  CHECK(empty.size() == 4);
  CHECK(empty[0] == 0);
}

TEST_CASE("cell counts of uniform points pass a chi-square sanity check") {
  const Grid g = Grid::uniform(2, 10);
  Rng rng(3);
  const std::size_t n = 10000;
  std::vector<double> u(2 * n);
  for (auto& x : u) x = rng.uniform();
  const auto counts = cell_counts(u, n, g);
  std::int64_t total = 0;
  const double expect = 100.0;
  const double sigma = std::sqrt(n * 0.01 * 0.99);
  for (auto c : counts) {
    total += c;
    CHECK(std::abs(c - expect) < 5.0 * sigma);
  }
  CHECK(total == static_cast<std::int64_t>(n));
}

TEST_CASE("copula log likelihood") {
  const Grid g = Grid::uniform(2, 2);
  const GridCopula ind = GridCopula::independence(g);
  std::vector<std::int64_t> counts{3, 1, 4, 1};
  CHECK(copula_log_likelihood(ind, counts) == 0.0);  // density is 1 everywhere

  const GridCopula cb = checkerboard();
  std::vector<std::int64_t> diag{2, 0, 0, 2};
  CHECK(copula_log_likelihood(cb, diag) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-13));

  std::vector<std::int64_t> off{2, 1, 0, 2};
  CHECK(copula_log_likelihood(cb, off) == -kInf);
}

TEST_CASE("delta log likelihood equals full recomputation") {
  const Grid g = Grid::uniform(2, 10);
  GridCopula c = random_copula(g, 2000, 19);
  Rng rng(29);
  // Counts from copula-distributed points.
  const auto pts = gridcop::testing::sample_grid_copula(c, 500, rng);
  const auto counts = cell_counts(pts, 500, g);

  for (int t = 0; t < 2500; ++t) {
    const auto p = random_exchange(c, rng);
    const double delta = delta_log_likelihood(counts, c, p);
    const GridCopula after = apply_exchange(c, p);
    const double full = copula_log_likelihood(after, counts) - copula_log_likelihood(c, counts);
    if (std::isinf(delta)) {
      CHECK(std::isinf(full));
    } else {
      CHECK(std::abs(delta - full) < 1e-10);
    }
    c = after;
  }
}

TEST_CASE("exchanges that empty an occupied cell are vetoed by -inf") {
  const GridCopula cb = checkerboard();
  std::vector<std::int64_t> diag{2, 0, 0, 2};
  ExchangeProposal p;
  p.site.dim_a = 0;
  p.site.dim_b = 1;
  p.site.fixed = {0, 0};
  p.site.a1 = 0;
  p.site.a2 = 1;
  p.site.b1 = 0;
  p.site.b2 = 1;
  p.epsilon = 0.5;  // drains both occupied diagonal cells
  CHECK(delta_log_likelihood(diag, cb, p) == -kInf);
  // Any positive epsilon moves mass off the occupied diagonal: strictly worse.
  p.epsilon = 0.2;
  CHECK(delta_log_likelihood(diag, cb, p) < 0.0);
  p.epsilon = 0.0;
  CHECK(delta_log_likelihood(diag, cb, p) == 0.0);
}

TEST_CASE("likelihood is invariant under grid division") {
  const Grid g = Grid::uniform(2, 4);
  const GridCopula c = random_copula(g, 300, 77);
  Rng rng(31);
  const std::size_t n = 400;
  const auto pts = gridcop::testing::sample_grid_copula(c, n, rng);
  const auto counts = cell_counts(pts, n, g);
  const double base = copula_log_likelihood(c, counts);

  const GridCopula divided = grid_division(c, 0, 0.37);
  const auto counts2 = cell_counts(pts, n, divided.grid());
  CHECK(copula_log_likelihood(divided, counts2) == doctest::Approx(base).epsilon(1e-11));
}

TEST_CASE("total likelihood separates into copula and marginal parts") {
  Dataset data;
  data.n = 50;
  data.d = 2;
  Rng rng(41);
  for (std::size_t i = 0; i < 100; ++i) data.y.push_back(rng.normal());

  MarginalSpec gauss = known(MarginalSpec::Kind::gaussian);
  gauss.kind = MarginalSpec::Kind::gaussian;
  const std::vector<double> params{0.0, 0.0};  // mu = 0, log sigma = 0
  const double marg = marginal_log_likelihood(data, gauss, params, 0);
  double direct = 0.0;
  for (std::size_t i = 0; i < data.n; ++i) {
    direct += -0.5 * data.at(i, 0) * data.at(i, 0) - 0.9189385332046727;
  }
  CHECK(marg == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("domain errors") {
  Dataset data;
  data.n = 1;
  data.d = 2;
  data.y = {2.0, 0.5};  // outside [0,1] for uniform marginals
  const std::vector<MarginalSpec> uniforms(2, known(MarginalSpec::Kind::known_uniform));
  // Uniform cdf clamps, so this is fine.
  CHECK_NOTHROW(pseudo_observations(data, uniforms, {{}, {}}));

  const Grid g = Grid::uniform(2, 2);
  CHECK_THROWS_AS(cell_counts(std::vector<double>{0.5, 1.5}, 1, g), DomainError);
  CHECK_THROWS_AS(
      copula_log_likelihood(GridCopula::independence(g), std::vector<std::int64_t>{1, 2, 3}),
      GridMismatch);
}
