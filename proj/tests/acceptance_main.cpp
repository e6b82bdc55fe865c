// Acceptance suite: every release-gating property of the library, one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridcop/exchange.hpp"
#include "gridcop/experiments.hpp"
#include "gridcop/io.hpp"
#include "gridcop/linalg.hpp"
#include "gridcop/mcmc.hpp"
#include "gridcop/measures.hpp"
#include "gridcop/reference.hpp"

using namespace gridcop;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, double seconds) {
  std::printf("%s  criterion %2d: %s  [%.1f s]\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

MarginalSpec known(MarginalSpec::Kind k) {
  MarginalSpec m;
  m.kind = k;
  return m;
}

std::filesystem::path work_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gridcop_acceptance" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Closure of rectangle exchanges: 1e6 random exchanges on a 10x10 grid
//    keep all copula constraints to 1e-9.
void criterion_1() {
  Timer t;
  const Grid g = Grid::uniform(2, 10);
  GridCopula c = GridCopula::independence(g);
  Rng rng(20260808);
  for (int i = 0; i < 1000000; ++i) {
    apply_exchange_in_place(c, random_exchange(c, rng));
  }
  const double violation = c.max_invariant_violation();
  const bool pass = violation < 1e-9 && t.seconds() < 30.0;
  report(1, pass,
         "closure after 1e6 exchanges on 10x10: max constraint violation " + fmt(violation) +
             " < 1e-9",
         t.seconds());
}

// 2. Dependence-measure oracles: exact checkerboard values and the Gaussian
//    closed-form relations on a fine projection.
void criterion_2() {
  Timer t;
  const GridCopula cb(Grid::uniform(2, 2), {0.5, 0.0, 0.0, 0.5});
  const double tau_err = std::abs(kendall_tau(cb) - 0.5);
  const double rho_err = std::abs(spearman_rho(cb) - 0.75);

  const GridCopula gp = project(ReferenceCopula::gaussian2(0.5), Grid::uniform(2, 100));
  const double tau_gauss = std::abs(kendall_tau(gp) - 1.0 / 3.0);
  const double beta_expect = (6.0 / 3.141592653589793) * std::asin(0.25);
  const double rho_gauss = std::abs(spearman_rho(gp) - beta_expect);

  const bool pass = tau_err < 1e-12 && rho_err < 1e-12 && tau_gauss < 0.01 && rho_gauss < 0.01 &&
                    t.seconds() < 10.0;
  report(2, pass,
         "measure oracles: checkerboard errors (" + fmt(tau_err) + ", " + fmt(rho_err) +
             ") < 1e-12; Gaussian-projection errors (" + fmt(tau_gauss) + ", " + fmt(rho_gauss) +
             ") < 0.01",
         t.seconds());
}

// 3. Sampler exactness on the one-parameter 2x2 system against quadrature.
void criterion_3() {
  Timer t;
  const Grid g = Grid::uniform(2, 2);

  // Synthetic counts (6,2,2,6) as points at the cell centers.
  Dataset data;
  data.n = 16;
  data.d = 2;
  auto push = [&](double x, double y, int copies) {
    for (int i = 0; i < copies; ++i) {
      data.y.push_back(x);
      data.y.push_back(y);
    }
  };
  push(0.25, 0.25, 6);
  push(0.25, 0.75, 2);
  push(0.75, 0.25, 2);
  push(0.75, 0.75, 6);

  PriorSpec prior;
  prior.variant = PriorSpec::Variant::squared_l2;
  prior.alpha_star = 2.0;
  prior.centering = ReferenceCopula::independence(2);

  SamplerConfig cfg;
  cfg.iterations = 120000;
  cfg.burn_in = 20000;
  cfg.thinning = 1;
  cfg.seed = 31337;
  const std::vector<MarginalSpec> marginals(2, known(MarginalSpec::Kind::known_uniform));
  const ChainOutput out = run_chain(data, g, prior, marginals, cfg);

  // Free mass t = mass of cell (0,0) in [0, 0.5]. Unnormalized posterior:
  // exp(-4 (4t-1)^2) * (4t)^12 * (2-4t)^4 from the squared-L2 kernel
  // (alpha = 8) and the cell counts above.
  const auto kernel = [](double x) {
    if (x <= 0.0 || x >= 0.5) return 0.0;
    return std::exp(-4.0 * (4.0 * x - 1.0) * (4.0 * x - 1.0)) * std::pow(4.0 * x, 12.0) *
           std::pow(2.0 - 4.0 * x, 4.0);
  };
  const int bins = 25;
  std::vector<double> expected(bins, 0.0);
  double norm = 0.0;
  const int sub = 1024;
  for (int b = 0; b < bins; ++b) {
    const double lo = 0.5 * b / bins, hi = 0.5 * (b + 1) / bins;
    double s = kernel(lo) + kernel(hi);
    const double h = (hi - lo) / sub;
    for (int i = 1; i < sub; ++i) s += kernel(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    expected[b] = s * h / 3.0;
    norm += expected[b];
  }
  for (auto& e : expected) e /= norm;

  std::vector<double> observed(bins, 0.0);
  for (const auto& s : out.samples) {
    int b = static_cast<int>(s[0] / 0.5 * bins);
    if (b == bins) b = bins - 1;
    observed[static_cast<std::size_t>(b)] += 1.0;
  }
  for (auto& o : observed) o /= static_cast<double>(out.samples.size());

  double tv = 0.0;
  for (int b = 0; b < bins; ++b) tv += std::abs(observed[b] - expected[b]);
  tv *= 0.5;

  const bool pass = tv < 0.02 && out.samples.size() == 100000 && t.seconds() < 60.0;
  report(3, pass,
         "2x2 posterior vs quadrature: total variation " + fmt(tv) + " < 0.02 at " +
             std::to_string(out.samples.size()) + " kept samples",
         t.seconds());
}

// 4. Desk-scale Table 1 direction: the hierarchical ICAR prior beats the
//    flat prior in mean ISE at tau = 0.5, N = 30 on a 6x6 grid.
void criterion_4() {
  Timer t;
  ComparisonStudySpec spec;
  spec.families = {ReferenceCopula::Family::gaussian};
  spec.taus = {0.5};
  spec.sample_sizes = {30};
  spec.replicates = 20;
  spec.grid_m = 6;
  spec.alpha_star = 40.0;
  spec.truth_refine = 1;
  spec.seed = 1234;
  spec.chain = {200000, 20000, 1000};
  spec.output_dir = work_dir("criterion4");
  const auto result = run_comparison_study(spec);
  const double ratio = result.cells.at(0).ratio;
  const bool pass = ratio < 0.8 && t.seconds() < 900.0;
  report(4, pass,
         "comparison study (gaussian, tau=0.5, N=30, 20 replicates): MISE ratio proposal/flat " +
             fmt(ratio) + " < 0.8 (proposal " + fmt(result.cells.at(0).mise_proposal * 1e3) +
             "e-3, flat " + fmt(result.cells.at(0).mise_flat * 1e3) + "e-3)",
         t.seconds());
}

// 5. Posterior concentration: mean Hellinger distance to the truth strictly
//    decreases with the sample size.
void criterion_5() {
  Timer t;
  ModelStudySpec spec;
  spec.models = {{"model2_gaussian", ReferenceCopula::gaussian2(0.5)}};
  spec.sample_sizes = {250, 1000, 4000};
  spec.grid_m = 10;
  spec.alpha_star = 400.0;
  spec.truth_refine = 4;
  spec.seed = 777;
  spec.chain = {300000, 30000, 270};
  spec.output_dir = work_dir("criterion5");
  const auto result = run_model_study(spec);
  const double h250 = result.rows.at(0).hellinger_post_mean;
  const double h1000 = result.rows.at(1).hellinger_post_mean;
  const double h4000 = result.rows.at(2).hellinger_post_mean;
  const bool pass = h250 > h1000 && h1000 > h4000 && t.seconds() < 1200.0;
  report(5, pass,
         "posterior concentration (Gaussian 0.5, 10x10): mean Hellinger " + fmt(h250) + " > " +
             fmt(h1000) + " > " + fmt(h4000) + " over N in {250, 1000, 4000}",
         t.seconds());
}

// 6. Copula-move acceptance rate lands in the healthy band on a standard
//    hierarchical run.
void criterion_6() {
  Timer t;
  const Grid g = Grid::uniform(2, 10);
  const Dataset data = generate_dataset(ReferenceCopula::gaussian2(0.5), 1000,
                                        MarginalSpec::Kind::known_std_normal, 4242);
  PriorSpec prior;
  prior.variant = PriorSpec::Variant::icar;
  prior.alpha_star = 400.0;
  prior.centering = ReferenceCopula::gaussian2(0.0);
  prior.hierarchical = true;
  SamplerConfig cfg;
  cfg.iterations = 200000;
  cfg.burn_in = 20000;
  cfg.thinning = 1000;
  cfg.seed = 606;
  cfg.store_samples = false;
  const std::vector<MarginalSpec> marginals(2, known(MarginalSpec::Kind::known_std_normal));
  const ChainOutput out = run_chain(data, g, prior, marginals, cfg);
  const double rate = out.copula_moves.rate();
  const bool pass = rate >= 0.10 && rate <= 0.40;
  report(6, pass, "copula-move acceptance rate " + fmt(rate) + " within [0.10, 0.40]",
         t.seconds());
}

// 7. Hit-and-run proposals are always valid correlation matrices.
void criterion_7() {
  Timer t;
  Rng rng(99);
  std::size_t checked = 0, valid = 0;
  for (int d : {2, 3, 4}) {
    for (int rep = 0; rep < 3334; ++rep) {
      // Random correlation matrix from a normalized Gaussian Gram matrix.
      const int cols = d + 2;
      std::vector<double> a(static_cast<std::size_t>(d) * cols);
      for (auto& v : a) v = rng.normal();
      CorrelationMatrix r = CorrelationMatrix::identity(d);
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          double sij = 0, sii = 0, sjj = 0;
          for (int k = 0; k < cols; ++k) {
            sij += a[i * cols + k] * a[j * cols + k];
            sii += a[i * cols + k] * a[i * cols + k];
            sjj += a[j * cols + k] * a[j * cols + k];
          }
          r.set(i, j, sij / std::sqrt(sii * sjj));
        }
      }
      if (!(r.min_eigenvalue() > 0.0)) continue;
      const auto prop = hit_and_run_propose(r, 0.5, rng);
      ++checked;
      bool ok = prop.r_new.min_eigenvalue() > 0.0;
      for (int i = 0; i < d; ++i) ok = ok && prop.r_new.at(i, i) == 1.0;
      if (ok) ++valid;
    }
  }
  const bool pass = checked >= 10000 && valid == checked;
  report(7, pass,
         "hit-and-run validity: " + std::to_string(valid) + "/" + std::to_string(checked) +
             " proposals kept unit diagonal and positive definiteness",
         t.seconds());
}

// 8. Constructive reachability: the exchange-sequence builder reconstructs
//    arbitrary same-grid targets through valid intermediate states.
void criterion_8() {
  Timer t;
  const Grid g = Grid::uniform(2, 5);
  Rng rng(1010);
  int ok = 0;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    GridCopula from = GridCopula::independence(g);
    GridCopula to = GridCopula::independence(g);
    for (int i = 0; i < 400; ++i) {
      apply_exchange_in_place(from, random_exchange(from, rng));
      apply_exchange_in_place(to, random_exchange(to, rng));
    }
    const auto seq = exchange_sequence_to(from, to);
    GridCopula state = from;
    bool valid = true;
    for (const auto& p : seq) {
      apply_exchange_in_place(state, p);
      if (state.max_invariant_violation() > 1e-10) valid = false;
    }
    double err = 0.0;
    for (std::size_t f = 0; f < g.cell_count(); ++f) {
      err = std::max(err, std::abs(state.mass_at(f) - to.mass_at(f)));
    }
    worst = std::max(worst, err);
    if (valid && err < 1e-12) ++ok;
  }
  const bool pass = ok == 100;
  report(8, pass,
         "reachability: " + std::to_string(ok) +
             "/100 random 5x5 pairs reconstructed (worst cell error " + fmt(worst) + " < 1e-12)",
         t.seconds());
}

// 9. Empirical refinement convergence of projections.
void criterion_9() {
  Timer t;
  const ReferenceCopula ref = ReferenceCopula::gaussian2(0.5);
  const GridCopula fine = project(ref, Grid::uniform(2, 200));
  std::vector<double> h;
  for (int m : {5, 10, 25, 50}) {
    h.push_back(hellinger(project(ref, Grid::uniform(2, m)), fine));
  }
  const bool decreasing = h[0] > h[1] && h[1] > h[2] && h[2] > h[3];
  const bool pass = decreasing && h[3] < 0.05;
  report(9, pass,
         "refinement convergence: Hellinger to the 200x200 projection (" + fmt(h[0]) + ", " +
             fmt(h[1]) + ", " + fmt(h[2]) + ", " + fmt(h[3]) + ") decreasing, final < 0.05",
         t.seconds());
}

// 10. Study determinism: identical master seed reproduces summary CSVs byte
//     for byte.
void criterion_10() {
  Timer t;
  ComparisonStudySpec spec;
  spec.families = {ReferenceCopula::Family::clayton};
  spec.taus = {0.35};
  spec.sample_sizes = {50};
  spec.replicates = 4;
  spec.grid_m = 4;
  spec.alpha_star = 40.0;
  spec.seed = 2024;
  spec.chain = {20000, 4000, 800};
  spec.output_dir = work_dir("criterion10_a");
  run_comparison_study(spec);
  const auto table = slurp(spec.output_dir / "comparison_table.csv");
  const auto reps = slurp(spec.output_dir / "comparison_replicates.csv");

  spec.output_dir = work_dir("criterion10_b");
  run_comparison_study(spec);
  const bool pass = slurp(spec.output_dir / "comparison_table.csv") == table &&
                    slurp(spec.output_dir / "comparison_replicates.csv") == reps &&
                    !table.empty();
  report(10, pass, "determinism: rerun with the same master seed is byte-identical",
         t.seconds());
}

}  // namespace

int main() {
  std::printf("gridcop acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0) {
    std::printf("all 10 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
