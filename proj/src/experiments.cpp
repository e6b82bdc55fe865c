#include "gridcop/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "gridcop/io.hpp"
#include "gridcop/measures.hpp"
#include "gridcop/normal.hpp"

namespace gridcop {

namespace {

double quantile_of(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void run_parallel(std::size_t tasks, const std::function<void(std::size_t)>& work) {
  const unsigned workers = study_worker_count(tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) work(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto loop = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) break;
      try {
        work(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

unsigned study_worker_count(std::size_t tasks) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GRIDCOP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

std::string family_name(ReferenceCopula::Family f) {
  switch (f) {
    case ReferenceCopula::Family::independence: return "independence";
    case ReferenceCopula::Family::gaussian: return "gaussian";
    case ReferenceCopula::Family::clayton: return "clayton";
    case ReferenceCopula::Family::gumbel: return "gumbel";
    case ReferenceCopula::Family::gauss_mixture: return "gauss_mixture";
  }
  return "?";
}

ReferenceCopula::Family family_from_name(const std::string& name) {
  if (name == "independence") return ReferenceCopula::Family::independence;
  if (name == "gaussian") return ReferenceCopula::Family::gaussian;
  if (name == "clayton") return ReferenceCopula::Family::clayton;
  if (name == "gumbel") return ReferenceCopula::Family::gumbel;
  if (name == "gauss_mixture" || name == "mixture") return ReferenceCopula::Family::gauss_mixture;
  throw ValidationError("unknown copula family '" + name + "'");
}

Dataset generate_dataset(const ReferenceCopula& ref, std::size_t n,
                         MarginalSpec::Kind marginal_kind, std::uint64_t seed) {
  Rng rng(seed);
  Dataset data;
  data.n = n;
  data.d = ref.dims();
  data.y = ref.sample(n, rng);
  switch (marginal_kind) {
    case MarginalSpec::Kind::known_uniform:
      break;
    case MarginalSpec::Kind::known_std_normal:
      for (auto& v : data.y) v = norm_quantile(std::clamp(v, 1e-15, 1.0 - 1e-15));
      break;
    default:
      throw ValidationError("generate_dataset: marginal kind must be known_uniform or "
                            "known_std_normal");
  }
  return data;
}

std::vector<ModelStudySpec::Model> ModelStudySpec::standard_models() {
  return {{"model1_clayton", ReferenceCopula::clayton(3.0)},
          {"model2_gaussian", ReferenceCopula::gaussian2(0.5)},
          {"model3_mixture", ReferenceCopula::gauss_mixture()}};
}

ModelStudyResult run_model_study(const ModelStudySpec& spec) {
  if (spec.models.empty() || spec.sample_sizes.empty()) {
    throw ValidationError("model study: needs at least one model and one sample size");
  }
  std::filesystem::create_directories(spec.output_dir);
  const Grid grid = Grid::uniform(2, spec.grid_m);

  struct Task {
    std::size_t model_idx;
    std::size_t n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < spec.models.size(); ++mi) {
    for (std::size_t n : spec.sample_sizes) {
      tasks.push_back({mi, n, split_seed(spec.seed, tasks.size())});
    }
  }

  ModelStudyResult result;
  result.rows.resize(tasks.size());
  std::vector<std::vector<double>> density_grids(tasks.size());

  run_parallel(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const auto& model = spec.models[task.model_idx];
    const Dataset data =
        generate_dataset(model.copula, task.n, MarginalSpec::Kind::known_std_normal, task.seed);

    PriorSpec prior;
    prior.variant = PriorSpec::Variant::icar;
    prior.alpha_star = spec.alpha_star;
    prior.centering = ReferenceCopula::gaussian2(0.0);
    prior.hierarchical = true;

    SamplerConfig cfg;
    cfg.iterations = spec.chain.iterations;
    cfg.burn_in = spec.chain.burn_in;
    cfg.thinning = spec.chain.thinning;
    cfg.seed = split_seed(task.seed, 0xfee1);
    cfg.hit_and_run_r = spec.hit_and_run_r;
    cfg.store_samples = false;
    cfg.hellinger_to = model.copula;
    cfg.hellinger_refine = spec.truth_refine;

    MarginalSpec normal_marginal;
    normal_marginal.kind = MarginalSpec::Kind::known_std_normal;
    const std::vector<MarginalSpec> marginals(2, normal_marginal);
    const ChainOutput out = run_chain(data, grid, prior, marginals, cfg);
    const GridCopula post_mean = posterior_mean(out);

    ModelStudyRow row;
    row.model = model.name;
    row.n = task.n;
    row.hellinger_post_mean = mean_of(out.hellinger_samples);
    row.hellinger_lo = quantile_of(out.hellinger_samples, 0.025);
    row.hellinger_hi = quantile_of(out.hellinger_samples, 0.975);
    const GridCopula truth_fine = project(model.copula, refine_uniformly(grid, spec.truth_refine));
    row.hellinger_of_mean = hellinger(post_mean, truth_fine);
    row.copula_acceptance = out.copula_moves.rate();
    result.rows[t] = std::move(row);

    // Cell-center density matrix for external plotting.
    std::vector<double> dens(grid.cell_count());
    for (std::size_t f = 0; f < grid.cell_count(); ++f) dens[f] = post_mean.cell_density(f);
    density_grids[t] = std::move(dens);
  });

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& row = result.rows[t];
    const auto path = spec.output_dir /
                      (row.model + "_N" + std::to_string(row.n) + "_density.csv");
    write_csv_matrix(path, density_grids[t], static_cast<std::size_t>(spec.grid_m),
                     static_cast<std::size_t>(spec.grid_m), {});
    result.files.push_back(path);
  }

  const auto summary_path = spec.output_dir / "model_study_summary.csv";
  {
    std::vector<std::string> names = {"model",          "N",           "hellinger_mean",
                                      "hellinger_lo",   "hellinger_hi", "hellinger_of_mean",
                                      "copula_accept"};
    std::ofstream out(summary_path);
    if (!out) throw IoError("cannot open " + summary_path.string());
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    for (const auto& row : result.rows) {
      out << row.model << ',' << row.n << ',' << format_double(row.hellinger_post_mean) << ','
          << format_double(row.hellinger_lo) << ',' << format_double(row.hellinger_hi) << ','
          << format_double(row.hellinger_of_mean) << ',' << format_double(row.copula_acceptance)
          << '\n';
    }
  }
  result.files.push_back(summary_path);
  return result;
}

ComparisonStudyResult run_comparison_study(const ComparisonStudySpec& spec) {
  if (spec.replicates < 1) throw ValidationError("comparison study: replicates must be >= 1");
  std::filesystem::create_directories(spec.output_dir);
  const Grid grid = Grid::uniform(2, spec.grid_m);
  const Grid truth_grid = refine_uniformly(grid, spec.truth_refine);

  struct Cell {
    ReferenceCopula::Family family;
    double tau;
    std::size_t n;
  };
  std::vector<Cell> cells;
  for (auto f : spec.families) {
    for (double tau : spec.taus) {
      for (std::size_t n : spec.sample_sizes) cells.push_back({f, tau, n});
    }
  }

  struct Task {
    std::size_t cell;
    int replicate;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int r = 0; r < spec.replicates; ++r) tasks.push_back({c, r});
  }

  std::vector<double> ise_proposal(tasks.size(), 0.0);
  std::vector<double> ise_flat(tasks.size(), 0.0);

  run_parallel(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    const Cell& cell = cells[task.cell];
    const ReferenceCopula truth = reference_from_tau(cell.family, cell.tau);
    const GridCopula truth_on_grid = project(truth, truth_grid);
    const std::uint64_t data_seed =
        split_seed(spec.seed, task.cell * 1000003ULL + static_cast<std::uint64_t>(task.replicate));
    const Dataset data =
        generate_dataset(truth, cell.n, MarginalSpec::Kind::known_uniform, data_seed);
    MarginalSpec uniform_marginal;
    uniform_marginal.kind = MarginalSpec::Kind::known_uniform;
    const std::vector<MarginalSpec> marginals(2, uniform_marginal);

    auto fit = [&](const PriorSpec& prior, std::uint64_t chain_seed) {
      SamplerConfig cfg;
      cfg.iterations = spec.chain.iterations;
      cfg.burn_in = spec.chain.burn_in;
      cfg.thinning = spec.chain.thinning;
      cfg.seed = chain_seed;
      cfg.hit_and_run_r = spec.hit_and_run_r;
      cfg.store_samples = false;
      const ChainOutput out = run_chain(data, grid, prior, marginals, cfg);
      return integrated_squared_error(posterior_mean(out), truth_on_grid);
    };

    PriorSpec proposal;
    proposal.variant = PriorSpec::Variant::icar;
    proposal.alpha_star = spec.alpha_star;
    proposal.centering = ReferenceCopula::gaussian2(0.0);
    proposal.hierarchical = true;

    ise_proposal[t] = fit(proposal, split_seed(data_seed, 1));
    ise_flat[t] = fit(PriorSpec::flat(2), split_seed(data_seed, 2));
  });

  ComparisonStudyResult result;
  const auto rep_path = spec.output_dir / "comparison_replicates.csv";
  {
    std::ofstream out(rep_path);
    if (!out) throw IoError("cannot open " + rep_path.string());
    out << "family,tau,N,replicate,ise_proposal,ise_flat\n";
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      const Cell& cell = cells[tasks[t].cell];
      out << family_name(cell.family) << ',' << format_double(cell.tau) << ',' << cell.n << ','
          << tasks[t].replicate << ',' << format_double(ise_proposal[t]) << ','
          << format_double(ise_flat[t]) << '\n';
    }
  }
  result.files.push_back(rep_path);

  const auto table_path = spec.output_dir / "comparison_table.csv";
  {
    std::ofstream out(table_path);
    if (!out) throw IoError("cannot open " + table_path.string());
    out << "family,tau,N,mise_proposal_x1000,mise_flat_x1000,ratio\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double sp = 0.0, sf = 0.0;
      int count = 0;
      for (std::size_t t = 0; t < tasks.size(); ++t) {
        if (tasks[t].cell != c) continue;
        sp += ise_proposal[t];
        sf += ise_flat[t];
        ++count;
      }
      ComparisonCell summary;
      summary.family = family_name(cells[c].family);
      summary.tau = cells[c].tau;
      summary.n = cells[c].n;
      summary.mise_proposal = sp / count;
      summary.mise_flat = sf / count;
      summary.ratio = summary.mise_flat > 0.0 ? summary.mise_proposal / summary.mise_flat : 0.0;
      out << summary.family << ',' << format_double(summary.tau) << ',' << summary.n << ','
          << format_double(summary.mise_proposal * 1000.0) << ','
          << format_double(summary.mise_flat * 1000.0) << ',' << format_double(summary.ratio)
          << '\n';
      result.cells.push_back(std::move(summary));
    }
  }
  result.files.push_back(table_path);
  return result;
}

}  // namespace gridcop
