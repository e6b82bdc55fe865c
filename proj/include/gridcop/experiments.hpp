#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gridcop/likelihood.hpp"
#include "gridcop/mcmc.hpp"
#include "gridcop/reference.hpp"

namespace gridcop {

// Chain-length settings shared by study runs, in exchange proposals.
struct StudyChainSettings {
  std::uint64_t iterations = 200000;
  std::uint64_t burn_in = 20000;
  std::uint64_t thinning = 1000;
};

// Copula sample pushed through the marginal quantile functions; deterministic
// per seed. Supported marginals: known_uniform (identity) and
// known_std_normal.
Dataset generate_dataset(const ReferenceCopula& ref, std::size_t n,
                         MarginalSpec::Kind marginal_kind, std::uint64_t seed);

// Fit-quality study: one dataset per (model, N), hierarchically centered
// ICAR prior, known marginals. Reports posterior-mean density grids and the
// posterior distribution of the Hellinger distance to the truth.
struct ModelStudySpec {
  struct Model {
    std::string name;
    ReferenceCopula copula;
  };
  std::vector<Model> models;
  std::vector<std::size_t> sample_sizes;
  int grid_m = 10;
  double alpha_star = 400.0;
  double hit_and_run_r = 0.5;
  int truth_refine = 4;  // truth projected on the fit grid refined this much
  std::uint64_t seed = 1;
  StudyChainSettings chain;
  std::filesystem::path output_dir;

  static std::vector<Model> standard_models();
};

struct ModelStudyRow {
  std::string model;
  std::size_t n = 0;
  double hellinger_post_mean = 0.0;  // posterior mean of H(sample, truth)
  double hellinger_lo = 0.0;         // 2.5% quantile
  double hellinger_hi = 0.0;         // 97.5% quantile
  double hellinger_of_mean = 0.0;    // H(posterior mean, truth)
  double copula_acceptance = 0.0;
};

struct ModelStudyResult {
  std::vector<ModelStudyRow> rows;
  std::vector<std::filesystem::path> files;
};

ModelStudyResult run_model_study(const ModelStudySpec& spec);

// Prior-vs-flat comparison: mean integrated squared error of the posterior
// mean against the true copula, over replicates, for each (family, tau, N).
struct ComparisonStudySpec {
  std::vector<ReferenceCopula::Family> families = {ReferenceCopula::Family::gaussian,
                                                   ReferenceCopula::Family::gumbel,
                                                   ReferenceCopula::Family::clayton};
  std::vector<double> taus = {0.05, 0.35, 0.50, 0.64};
  std::vector<std::size_t> sample_sizes = {30, 100, 400, 800};
  int replicates = 20;
  int grid_m = 6;
  double alpha_star = 40.0;
  double hit_and_run_r = 0.5;
  int truth_refine = 1;
  std::uint64_t seed = 1;
  StudyChainSettings chain;
  std::filesystem::path output_dir;
};

struct ComparisonCell {
  std::string family;
  double tau = 0.0;
  std::size_t n = 0;
  double mise_proposal = 0.0;  // mean ISE over replicates
  double mise_flat = 0.0;
  double ratio = 0.0;
};

struct ComparisonStudyResult {
  std::vector<ComparisonCell> cells;
  std::vector<std::filesystem::path> files;
};

ComparisonStudyResult run_comparison_study(const ComparisonStudySpec& spec);

// Worker count for replicate-parallel studies: GRIDCOP_THREADS when set,
// hardware concurrency otherwise.
unsigned study_worker_count(std::size_t tasks);

std::string family_name(ReferenceCopula::Family f);
ReferenceCopula::Family family_from_name(const std::string& name);

}  // namespace gridcop
