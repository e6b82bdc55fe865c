#include "gridcop/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridcop/measures.hpp"

namespace gridcop {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

void SamplerConfig::check() const {
  if (iterations == 0) throw ValidationError("sampler: iterations must be positive");
  if (burn_in >= iterations) throw ValidationError("sampler: burn_in must be < iterations");
  if (thinning == 0) throw ValidationError("sampler: thinning must be >= 1");
  if (!(hit_and_run_r > 0.0)) throw ValidationError("sampler: hit_and_run_r must be positive");
  if (!(marginal_step_scale > 0.0)) {
    throw ValidationError("sampler: marginal_step_scale must be positive");
  }
  if (hellinger_refine < 1) throw ValidationError("sampler: hellinger_refine must be >= 1");
}

bool copula_step(ChainState& state, const PriorModel& prior, Rng& rng) {
  const ExchangeProposal prop = random_exchange(state.copula, rng);
  const double d_prior = prior.delta_log_kernel(state.copula, state.c0_on_grid, prop);
  const double d_like = delta_log_likelihood(state.counts, state.copula, prop);
  const double log_r = d_prior + d_like;
  bool accept = log_r >= 0.0;
  if (!accept && log_r > kNegInf) {
    accept = std::log(rng.uniform()) < log_r;
  }
  if (accept) {
    apply_exchange_in_place(state.copula, prop);
    state.log_prior += d_prior;
    state.log_like += d_like;
  }
  return accept;
}

HitAndRunProposal hit_and_run_propose(const CorrelationMatrix& r, double tuning_r, Rng& rng) {
  const int d = r.dim();
  const double xi = r.min_eigenvalue();
  if (!(xi > 0.0)) {
    throw NumericalError("hit_and_run_propose: current matrix is not positive definite");
  }
  const int t = d * (d - 1) / 2;
  std::vector<double> z(t);
  double norm2 = 0.0;
  for (auto& v : z) {
    v = rng.normal();
    norm2 += v * v;
  }
  // Scale the upper-triangle direction to unit Euclidean norm; the step
  // length |delta| < xi / sqrt(2) then bounds the spectral norm of H below
  // xi, so R + H stays positive definite. The bound is shaved by one part in
  // 1e12 so the guarantee survives the clamp at the truncation endpoints.
  const double norm = std::sqrt(norm2);
  const double bound = (xi / kSqrt2) * (1.0 - 1e-12);
  const double delta = rng.truncated_normal(tuning_r, -bound, bound);

  HitAndRunProposal out{r, delta};
  int idx = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j, ++idx) {
      const double h = norm > 0.0 ? delta * z[idx] / norm : 0.0;
      out.r_new.set(i, j, r.at(i, j) + h);
    }
  }
  return out;
}

bool correlation_step(ChainState& state, const PriorModel& prior, double tuning_r, Rng& rng,
                      bool verify) {
  if (!state.r) return false;
  const auto prop = hit_and_run_propose(*state.r, tuning_r, rng);
  if (verify) {
    for (int i = 0; i < prop.r_new.dim(); ++i) {
      if (prop.r_new.at(i, i) != 1.0) {
        throw NumericalError("hit-and-run proposal lost the unit diagonal");
      }
    }
    if (!(prop.r_new.min_eigenvalue() > 0.0)) {
      throw NumericalError("hit-and-run proposal is not positive definite");
    }
  }
  const GridCopula c0_new =
      project(ReferenceCopula::gaussian(prop.r_new), state.copula.grid());
  const double new_log_prior = prior.log_kernel(state.copula, c0_new);
  const double log_r = new_log_prior - state.log_prior;
  bool accept = log_r >= 0.0;
  if (!accept) accept = std::log(rng.uniform()) < log_r;
  if (accept) {
    state.r = prop.r_new;
    state.c0_on_grid = c0_new;
    state.log_prior = new_log_prior;
  }
  return accept;
}

bool marginal_step(ChainState& state, const Dataset& data,
                   const std::vector<MarginalSpec>& marginals, MarginalAdaptation& adapt,
                   bool adapting, Rng& rng) {
  bool any_accept = false;
  int slot = 0;
  for (int j = 0; j < static_cast<int>(marginals.size()); ++j) {
    const MarginalSpec& spec = marginals[j];
    if (!spec.parametric()) continue;
    auto& params = state.marginal_params[j];
    const double scale = std::exp(adapt.log_scale[slot]);

    std::vector<double> proposal = params;
    for (auto& p : proposal) p += scale * rng.normal();

    // Marginal moves shift the pseudo-observations of dimension j, so both
    // the marginal density term and the copula term (with recomputed counts)
    // enter the ratio.
    std::vector<double> u_new = state.pseudo_obs;
    double log_r = kNegInf;
    double new_marg_ll = kNegInf;
    std::vector<std::int64_t> counts_new;
    double new_cop_ll = kNegInf;
    try {
      pseudo_observations_dim(data, spec, proposal, j, u_new);
      counts_new = cell_counts(u_new, data.n, state.copula.grid());
      new_cop_ll = copula_log_likelihood(state.copula, counts_new);
      new_marg_ll = marginal_log_likelihood(data, spec, proposal, j);
      const double old_marg_ll = marginal_log_likelihood(data, spec, params, j);
      log_r = (new_marg_ll + new_cop_ll + spec.log_prior(proposal)) -
              (old_marg_ll + state.log_like + spec.log_prior(params));
    } catch (const DomainError&) {
      log_r = kNegInf;
    }

    bool accept = log_r >= 0.0;
    if (!accept && log_r > kNegInf) accept = std::log(rng.uniform()) < log_r;
    if (accept) {
      params = std::move(proposal);
      state.pseudo_obs = std::move(u_new);
      state.counts = std::move(counts_new);
      state.log_like = new_cop_ll;
      any_accept = true;
    }
    if (adapting) {
      // Robbins-Monro drift toward a 0.3 acceptance rate, frozen after
      // burn-in so the kernel stays Markov.
      ++adapt.updates;
      const double step = 1.0 / std::sqrt(static_cast<double>(adapt.updates));
      adapt.log_scale[slot] += step * ((accept ? 1.0 : 0.0) - 0.3);
    }
    ++slot;
  }
  return any_accept;
}

ChainOutput run_chain(const Dataset& data, const Grid& g, const PriorSpec& prior_spec,
                      const std::vector<MarginalSpec>& marginals, const SamplerConfig& cfg) {
  cfg.check();
  if (data.n > 0 && data.d != g.dims()) {
    throw DimensionMismatch("run_chain: data and grid dimensions differ");
  }
  if (data.n > 0 && static_cast<int>(marginals.size()) != g.dims()) {
    throw DimensionMismatch("run_chain: one marginal per dimension required");
  }
  if (prior_spec.hierarchical) {
    if (prior_spec.centering.family() != ReferenceCopula::Family::gaussian ||
        g.dims() != 2) {
      throw ValidationError(
          "hierarchical centering requires a d = 2 Gaussian centering copula");
    }
  }
  if (prior_spec.centering.dims() != g.dims()) {
    throw DimensionMismatch("run_chain: centering copula dimension mismatch");
  }

  PriorModel prior(prior_spec, g);
  Rng rng(cfg.seed);

  ChainState state{GridCopula::independence(g), GridCopula::independence(g)};
  if (prior_spec.hierarchical) {
    state.r = prior_spec.centering.correlation();
  }
  state.c0_on_grid = project(prior_spec.centering, g);
  state.copula = state.c0_on_grid;

  state.marginal_params.resize(marginals.size());
  bool any_parametric = false;
  int parametric_count = 0;
  for (std::size_t j = 0; j < marginals.size(); ++j) {
    state.marginal_params[j] = marginals[j].init_params();
    if (marginals[j].parametric()) {
      any_parametric = true;
      ++parametric_count;
    }
  }
  if (data.n > 0) {
    state.pseudo_obs = pseudo_observations(data, marginals, state.marginal_params);
    state.counts = cell_counts(state.pseudo_obs, data.n, g);
  } else {
    state.counts.assign(g.cell_count(), 0);
  }
  state.log_like = copula_log_likelihood(state.copula, state.counts);
  state.log_prior = prior.log_kernel(state.copula, state.c0_on_grid);
  if (state.log_like == kNegInf) {
    throw NumericalError("run_chain: initial state has zero likelihood");
  }

  MarginalAdaptation adapt;
  adapt.log_scale.assign(static_cast<std::size_t>(std::max(parametric_count, 1)),
                         std::log(cfg.marginal_step_scale));

  ChainOutput out(g);
  out.iterations = cfg.iterations;
  out.mean_mass.assign(g.cell_count(), 0.0);

  // Precompute the Hellinger reference once per run.
  std::optional<GridCopula> hell_ref;
  if (cfg.hellinger_to) {
    hell_ref = project(*cfg.hellinger_to, refine_uniformly(g, cfg.hellinger_refine));
  }

  const std::uint64_t cells = g.cell_count();
  std::uint64_t next_record = cfg.burn_in + cfg.thinning;
  std::uint64_t verify_at = cells;

  for (std::uint64_t p = 1; p <= cfg.iterations; ++p) {
    ++out.copula_moves.proposed;
    if (copula_step(state, prior, rng)) ++out.copula_moves.accepted;

    if (p % cells == 0) {
      ++out.sweeps;
      if (state.r) {
        ++out.centering_moves.proposed;
        if (correlation_step(state, prior, cfg.hit_and_run_r, rng, cfg.verify)) {
          ++out.centering_moves.accepted;
        }
      }
      if (any_parametric && data.n > 0) {
        ++out.marginal_moves.proposed;
        if (marginal_step(state, data, marginals, adapt, p <= cfg.burn_in, rng)) {
          ++out.marginal_moves.accepted;
        }
      }
    }

    if (cfg.verify && p == verify_at) {
      verify_at += std::max<std::uint64_t>(cells, cfg.iterations / 16);
      const double ll = copula_log_likelihood(state.copula, state.counts);
      const double lp = prior.log_kernel(state.copula, state.c0_on_grid);
      if (std::abs(ll - state.log_like) > 1e-8 || std::abs(lp - state.log_prior) > 1e-8) {
        throw NumericalError("chain caches diverged from full recomputation");
      }
      state.copula.check(kCopulaTolLoose);
    }

    if (p == next_record) {
      next_record += cfg.thinning;
      ++out.sample_count;
      const auto m = state.copula.mass();
      for (std::size_t f = 0; f < cells; ++f) {
        out.mean_mass[f] += (m[f] - out.mean_mass[f]) / static_cast<double>(out.sample_count);
      }
      if (cfg.store_samples) out.samples.emplace_back(m.begin(), m.end());
      if (state.r) out.r_samples.push_back(state.r->at(0, 1));
      if (any_parametric) {
        std::vector<double> flat;
        for (const auto& mp : state.marginal_params) {
          flat.insert(flat.end(), mp.begin(), mp.end());
        }
        out.marginal_samples.push_back(std::move(flat));
      }
      if (cfg.record_dependence && g.dims() == 2) {
        out.tau_samples.push_back(kendall_tau(state.copula));
        out.spearman_samples.push_back(spearman_rho(state.copula));
      }
      if (hell_ref) out.hellinger_samples.push_back(hellinger(state.copula, *hell_ref));
    }
  }

  return out;
}

GridCopula posterior_mean(const ChainOutput& out) {
  if (out.sample_count == 0) throw EmptyChain("posterior_mean: chain kept no samples");
  return GridCopula(out.grid, out.mean_mass, kCopulaTolLoose);
}

std::vector<double> prior_simulation_r(const Grid& g, double alpha_star,
                                       const SamplerConfig& cfg) {
  if (g.dims() != 2) throw DimensionMismatch("prior_simulation_r needs a 2-d grid");
  PriorSpec spec;
  spec.variant = PriorSpec::Variant::icar;
  spec.alpha_star = alpha_star;
  spec.centering = ReferenceCopula::gaussian2(0.0);
  spec.hierarchical = true;
  const Dataset empty{0, 2, {}};
  const auto out = run_chain(empty, g, spec, {}, cfg);
  return out.r_samples;
}

}  // namespace gridcop
