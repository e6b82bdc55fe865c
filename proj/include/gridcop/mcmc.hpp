#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gridcop/copula.hpp"
#include "gridcop/exchange.hpp"
#include "gridcop/grid.hpp"
#include "gridcop/likelihood.hpp"
#include "gridcop/linalg.hpp"
#include "gridcop/prior.hpp"
#include "gridcop/reference.hpp"
#include "gridcop/rng.hpp"

namespace gridcop {

// Run-length quantities count elementary rectangle-exchange proposals. One
// sweep bundles (cell count) proposals; centering and marginal moves run
// once per sweep.
struct SamplerConfig {
  std::uint64_t iterations = 200000;  // total exchange proposals
  std::uint64_t burn_in = 20000;
  std::uint64_t thinning = 100;
  std::uint64_t seed = 1;
  double hit_and_run_r = 0.5;         // centering-move tuning scale, 0.3 - 1.0
  double marginal_step_scale = 0.25;  // initial random-walk scale, adapted in burn-in
  bool store_samples = true;          // keep thinned mass vectors in memory
  bool verify = false;                // recompute caches and assert coherence
  // Optional per-sample functionals (d = 2): Kendall/Spearman and Hellinger
  // distance to a reference projected on the fit grid refined by
  // `hellinger_refine` per axis.
  bool record_dependence = false;
  std::optional<ReferenceCopula> hellinger_to;
  int hellinger_refine = 1;

  void check() const;
  std::uint64_t kept_samples() const {
    return thinning == 0 ? 0 : (iterations - burn_in) / thinning;
  }
};

struct ChainState {
  ChainState(GridCopula c, GridCopula c0)
      : copula(std::move(c)), c0_on_grid(std::move(c0)) {}

  GridCopula copula;
  GridCopula c0_on_grid;
  std::optional<CorrelationMatrix> r;           // hierarchical centering
  std::vector<std::vector<double>> marginal_params;
  std::vector<std::int64_t> counts;
  std::vector<double> pseudo_obs;
  double log_like = 0.0;    // copula part
  double log_prior = 0.0;   // prior kernel
};

struct MoveCounters {
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;
  double rate() const {
    return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

struct ChainOutput {
  Grid grid;
  std::uint64_t iterations = 0;
  std::uint64_t sweeps = 0;
  std::vector<std::vector<double>> samples;      // thinned mass vectors
  std::vector<double> mean_mass;                 // running mean over kept samples
  std::uint64_t sample_count = 0;
  std::vector<double> r_samples;                 // rho draws (d = 2 hierarchical)
  std::vector<std::vector<double>> marginal_samples;
  std::vector<double> tau_samples;
  std::vector<double> spearman_samples;
  std::vector<double> hellinger_samples;
  MoveCounters copula_moves;
  MoveCounters centering_moves;
  MoveCounters marginal_moves;

  ChainOutput(Grid g) : grid(std::move(g)) {}
};

// One rectangle-exchange Metropolis step. Returns true on acceptance.
bool copula_step(ChainState& state, const PriorModel& prior, Rng& rng);

// Hit-and-run move on the centering correlation matrix: a symmetric
// perturbation scaled so the proposal stays positive definite.
struct HitAndRunProposal {
  CorrelationMatrix r_new;
  double delta = 0.0;
};
HitAndRunProposal hit_and_run_propose(const CorrelationMatrix& r, double tuning_r, Rng& rng);

// Metropolis update of the centering correlation (d = 2 Gaussian centering).
bool correlation_step(ChainState& state, const PriorModel& prior, double tuning_r, Rng& rng,
                      bool verify);

// Adaptive random-walk Metropolis on parametric marginal parameters.
struct MarginalAdaptation {
  std::vector<double> log_scale;
  std::uint64_t updates = 0;
};
bool marginal_step(ChainState& state, const Dataset& data,
                   const std::vector<MarginalSpec>& marginals, MarginalAdaptation& adapt,
                   bool adapting, Rng& rng);

// Full Metropolis-within-Gibbs chain. Deterministic given cfg.seed.
ChainOutput run_chain(const Dataset& data, const Grid& g, const PriorSpec& prior_spec,
                      const std::vector<MarginalSpec>& marginals, const SamplerConfig& cfg);

// Cell-wise average of the kept samples; a valid grid copula.
GridCopula posterior_mean(const ChainOutput& out);

// Chain with no data on a d = 2 grid: draws from the implied prior of the
// centering correlation. Returns the kept rho samples.
std::vector<double> prior_simulation_r(const Grid& g, double alpha_star,
                                       const SamplerConfig& cfg);

}  // namespace gridcop
