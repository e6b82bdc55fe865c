#include "gridcop/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include "gridcop/experiments.hpp"
#include "gridcop/io.hpp"
#include "gridcop/measures.hpp"
#include "gridcop/mcmc.hpp"

namespace gridcop {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;
constexpr const char* kVersion = "gridcop 1.0.0";

// Config schema check: unknown and missing keys are reported by path.
void check_keys(const json& j, const std::string& where, const std::vector<std::string>& required,
                const std::vector<std::string>& optional) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    const bool known =
        std::find(required.begin(), required.end(), key) != required.end() ||
        std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw ValidationError(where + ": unknown key '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw ValidationError(where + ": missing required key '" + key + "'");
  }
}

ReferenceCopula reference_from_json(const json& j, const std::string& where) {
  check_keys(j, where, {"family"}, {"rho", "theta", "tau", "dims"});
  const std::string fam = j.at("family").get<std::string>();
  const auto family = family_from_name(fam);
  if (j.contains("tau")) {
    return reference_from_tau(family, j.at("tau").get<double>());
  }
  switch (family) {
    case ReferenceCopula::Family::independence:
      return ReferenceCopula::independence(j.value("dims", 2));
    case ReferenceCopula::Family::gaussian:
      if (!j.contains("rho")) throw ValidationError(where + ": gaussian needs 'rho' or 'tau'");
      return ReferenceCopula::gaussian2(j.at("rho").get<double>());
    case ReferenceCopula::Family::clayton:
      if (!j.contains("theta")) throw ValidationError(where + ": clayton needs 'theta' or 'tau'");
      return ReferenceCopula::clayton(j.at("theta").get<double>());
    case ReferenceCopula::Family::gumbel:
      if (!j.contains("theta")) throw ValidationError(where + ": gumbel needs 'theta' or 'tau'");
      return ReferenceCopula::gumbel(j.at("theta").get<double>());
    case ReferenceCopula::Family::gauss_mixture:
      return ReferenceCopula::gauss_mixture();
  }
  throw ValidationError(where + ": unsupported family");
}

MarginalSpec marginal_from_json(const json& j, const std::string& where) {
  check_keys(j, where, {"kind"},
             {"separation", "points", "init_mu", "init_sigma", "prior_mu_mean", "prior_mu_sd",
              "prior_log_sigma_mean", "prior_log_sigma_sd"});
  MarginalSpec m;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "known_uniform") {
    m.kind = MarginalSpec::Kind::known_uniform;
  } else if (kind == "known_std_normal") {
    m.kind = MarginalSpec::Kind::known_std_normal;
  } else if (kind == "known_gauss_mixture") {
    m.kind = MarginalSpec::Kind::known_gauss_mixture;
    m.mix_separation = j.value("separation", 1.0);
  } else if (kind == "known_table") {
    m.kind = MarginalSpec::Kind::known_table;
    if (!j.contains("points")) throw ValidationError(where + ": known_table needs 'points'");
    for (const auto& p : j.at("points")) {
      m.table.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
  } else if (kind == "gaussian") {
    m.kind = MarginalSpec::Kind::gaussian;
    m.init_mu = j.value("init_mu", 0.0);
    m.init_sigma = j.value("init_sigma", 1.0);
    m.prior_mu_mean = j.value("prior_mu_mean", 0.0);
    m.prior_mu_sd = j.value("prior_mu_sd", 100.0);
    m.prior_log_sigma_mean = j.value("prior_log_sigma_mean", 0.0);
    m.prior_log_sigma_sd = j.value("prior_log_sigma_sd", 10.0);
  } else {
    throw ValidationError(where + ": unknown marginal kind '" + kind + "'");
  }
  return m;
}

Grid grid_from_json(const json& j, int dims_hint) {
  check_keys(j, "grid", {}, {"uniform_m", "cuts", "dims"});
  if (j.contains("cuts")) {
    std::vector<std::vector<double>> cuts;
    for (const auto& dim_cuts : j.at("cuts")) {
      cuts.push_back(dim_cuts.get<std::vector<double>>());
    }
    return Grid(std::move(cuts));
  }
  if (!j.contains("uniform_m")) {
    throw ValidationError("grid: needs either 'uniform_m' or 'cuts'");
  }
  return Grid::uniform(j.value("dims", dims_hint), j.at("uniform_m").get<int>());
}

PriorSpec prior_from_json(const json& j, int dims) {
  check_keys(j, "prior", {"variant", "alpha_star"},
             {"gamma", "weights", "centering", "hierarchical"});
  PriorSpec p;
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "squared_l2") {
    p.variant = PriorSpec::Variant::squared_l2;
  } else if (variant == "car") {
    p.variant = PriorSpec::Variant::car;
    if (!j.contains("gamma")) throw ValidationError("prior: car variant needs 'gamma'");
    p.gamma = j.at("gamma").get<double>();
  } else if (variant == "icar") {
    p.variant = PriorSpec::Variant::icar;
  } else if (variant == "flat") {
    p = PriorSpec::flat(dims);
    if (j.value("alpha_star", 0.0) != 0.0) {
      throw ValidationError("prior: flat variant requires alpha_star = 0");
    }
    return p;
  } else {
    throw ValidationError("prior: unknown variant '" + variant + "'");
  }
  p.alpha_star = j.at("alpha_star").get<double>();
  if (!(p.alpha_star > 0.0)) {
    throw ValidationError("prior: alpha_star must be > 0 for a non-flat variant (use variant "
                          "'flat' for the alpha -> 0 limit)");
  }
  if (j.contains("weights")) {
    const std::string w = j.at("weights").get<std::string>();
    if (w == "adjacency") {
      p.weights = WeightSpec::Kind::adjacency;
    } else if (w == "inverse_distance") {
      p.weights = WeightSpec::Kind::inverse_distance;
    } else {
      throw ValidationError("prior: unknown weights kind '" + w + "'");
    }
  }
  p.centering = j.contains("centering")
                    ? reference_from_json(j.at("centering"), "prior.centering")
                    : ReferenceCopula::independence(dims);
  p.hierarchical = j.value("hierarchical", false);
  if (p.hierarchical && !j.contains("centering")) {
    p.centering = ReferenceCopula::gaussian2(0.0);
  }
  return p;
}

SamplerConfig sampler_from_json(const json& j) {
  check_keys(j, "sampler", {"iterations", "burn_in", "thinning", "seed"},
             {"hit_and_run_r", "marginal_step_scale", "store_samples", "verify",
              "record_dependence", "hellinger_to", "hellinger_refine"});
  SamplerConfig cfg;
  cfg.iterations = j.at("iterations").get<std::uint64_t>();
  cfg.burn_in = j.at("burn_in").get<std::uint64_t>();
  cfg.thinning = j.at("thinning").get<std::uint64_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.hit_and_run_r = j.value("hit_and_run_r", 0.5);
  cfg.marginal_step_scale = j.value("marginal_step_scale", 0.25);
  cfg.store_samples = j.value("store_samples", true);
  cfg.verify = j.value("verify", false);
  cfg.record_dependence = j.value("record_dependence", false);
  if (j.contains("hellinger_to")) {
    cfg.hellinger_to = reference_from_json(j.at("hellinger_to"), "sampler.hellinger_to");
    cfg.hellinger_refine = j.value("hellinger_refine", 1);
  }
  cfg.check();
  return cfg;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
}

StudyChainSettings chain_from_json(const json& j) {
  check_keys(j, "chain", {"iterations", "burn_in", "thinning"}, {});
  StudyChainSettings c;
  c.iterations = j.at("iterations").get<std::uint64_t>();
  c.burn_in = j.at("burn_in").get<std::uint64_t>();
  c.thinning = j.at("thinning").get<std::uint64_t>();
  return c;
}

// --- fit ----------------------------------------------------------------------

int cmd_fit(const std::string& config_path) {
  const json cfg = load_json(config_path);
  check_keys(cfg, "config", {"data", "grid", "prior", "marginals", "sampler", "output"}, {});
  const json& jdata = cfg.at("data");
  check_keys(jdata, "data", {"path"}, {"header", "columns"});
  const json& jout = cfg.at("output");
  check_keys(jout, "output", {"directory"}, {"chain_format", "write_chain"});

  const Dataset data = read_csv_dataset(jdata.at("path").get<std::string>(),
                                        jdata.value("header", false),
                                        jdata.value("columns", std::vector<int>{}));
  if (data.n == 0) throw IoError("data file " + jdata.at("path").get<std::string>() + " is empty");

  const Grid grid = grid_from_json(cfg.at("grid"), data.d);
  if (grid.dims() != data.d) {
    throw ValidationError("grid has " + std::to_string(grid.dims()) + " dimensions but data has " +
                          std::to_string(data.d) + " columns");
  }
  const PriorSpec prior = prior_from_json(cfg.at("prior"), grid.dims());
  std::vector<MarginalSpec> marginals;
  for (std::size_t i = 0; i < cfg.at("marginals").size(); ++i) {
    marginals.push_back(marginal_from_json(cfg.at("marginals")[i],
                                           "marginals[" + std::to_string(i) + "]"));
  }
  const SamplerConfig sampler = sampler_from_json(cfg.at("sampler"));

  const std::filesystem::path outdir = jout.at("directory").get<std::string>();
  std::filesystem::create_directories(outdir);

  const ChainOutput out = run_chain(data, grid, prior, marginals, sampler);
  const GridCopula post_mean = posterior_mean(out);

  std::vector<std::string> files;

  if (jout.value("write_chain", true)) {
    const std::string fmt = jout.value("chain_format", std::string("text"));
    if (fmt != "text" && fmt != "binary") {
      throw ValidationError("output.chain_format must be 'text' or 'binary'");
    }
    const auto chain_path = outdir / (fmt == "text" ? "chain.txt" : "chain.bin");
    write_chain(chain_path, grid, out.samples,
                fmt == "text" ? ChainFormat::text : ChainFormat::binary);
    files.push_back(chain_path.filename().string());
  }

  const auto mean_path = outdir / "posterior_mean.copula";
  write_copula(mean_path, post_mean);
  files.push_back(mean_path.filename().string());

  // Per-cell posterior density summary (mean and equal-tail 95% interval).
  {
    const std::size_t cells = grid.cell_count();
    const int d = grid.dims();
    std::vector<double> rows;
    std::vector<std::string> names = {"cell"};
    for (int i = 0; i < d; ++i) names.push_back("center_" + std::to_string(i + 1));
    names.insert(names.end(), {"mean_density", "density_q025", "density_q975"});
    std::vector<int> idx(d);
    std::vector<double> sample_dens;
    for (std::size_t f = 0; f < cells; ++f) {
      grid.cell_at(f, idx);
      rows.push_back(static_cast<double>(f));
      for (int i = 0; i < d; ++i) rows.push_back(grid.interval_center(i, idx[i]));
      const double vol = grid.cell_volume_flat(f);
      rows.push_back(post_mean.mass_at(f) / vol);
      if (!out.samples.empty()) {
        sample_dens.clear();
        for (const auto& s : out.samples) sample_dens.push_back(s[f] / vol);
        std::sort(sample_dens.begin(), sample_dens.end());
        const auto q = [&](double p) {
          const double pos = p * static_cast<double>(sample_dens.size() - 1);
          const std::size_t lo = static_cast<std::size_t>(pos);
          const std::size_t hi = std::min(lo + 1, sample_dens.size() - 1);
          return sample_dens[lo] + (sample_dens[hi] - sample_dens[lo]) *
                                       (pos - static_cast<double>(lo));
        };
        rows.push_back(q(0.025));
        rows.push_back(q(0.975));
      } else {
        rows.push_back(0.0);
        rows.push_back(0.0);
      }
    }
    const auto path = outdir / "density_summary.csv";
    write_csv_matrix(path, rows, cells, names.size(), names);
    files.push_back(path.filename().string());
  }

  // Acceptance-rate report.
  json report;
  report["iterations"] = out.iterations;
  report["sweeps"] = out.sweeps;
  report["kept_samples"] = out.sample_count;
  report["copula_moves"] = {{"proposed", out.copula_moves.proposed},
                            {"accepted", out.copula_moves.accepted},
                            {"rate", out.copula_moves.rate()}};
  report["centering_moves"] = {{"proposed", out.centering_moves.proposed},
                               {"accepted", out.centering_moves.accepted},
                               {"rate", out.centering_moves.rate()}};
  report["marginal_moves"] = {{"proposed", out.marginal_moves.proposed},
                              {"accepted", out.marginal_moves.accepted},
                              {"rate", out.marginal_moves.rate()}};
  if (!out.r_samples.empty()) {
    report["centering_rho_last"] = out.r_samples.back();
  }
  if (!out.tau_samples.empty()) {
    double s = 0.0;
    for (double t : out.tau_samples) s += t;
    report["tau_posterior_mean"] = s / static_cast<double>(out.tau_samples.size());
  }
  if (!out.hellinger_samples.empty()) {
    double s = 0.0;
    for (double h : out.hellinger_samples) s += h;
    report["hellinger_posterior_mean"] = s / static_cast<double>(out.hellinger_samples.size());
  }
  {
    std::ofstream rep(outdir / "report.json");
    rep << report.dump(2) << '\n';
    files.push_back("report.json");
  }

  // Run manifest: config hash + seed + version make reruns checkable.
  {
    json manifest;
    manifest["config_hash"] = fnv1a(cfg.dump());
    manifest["seed"] = sampler.seed;
    manifest["version"] = kVersion;
    manifest["outputs"] = files;
    std::ofstream mf(outdir / "manifest.json");
    mf << manifest.dump(2) << '\n';
  }

  std::cout << "fit: " << out.iterations << " proposals (" << out.sweeps << " sweeps), "
            << out.sample_count << " kept samples, copula acceptance "
            << format_double(out.copula_moves.rate()) << "\n";
  return kExitOk;
}

// --- simulate -------------------------------------------------------------------

struct SimulateArgs {
  std::string family;
  double theta = 0.0;
  double rho = 0.0;
  double tau = 0.0;
  bool has_theta = false, has_rho = false, has_tau = false;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string marginals = "std_normal";
  std::string out;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto family = family_from_name(a.family);
  ReferenceCopula ref = ReferenceCopula::independence(2);
  if (a.has_tau) {
    ref = reference_from_tau(family, a.tau);
  } else {
    switch (family) {
      case ReferenceCopula::Family::independence: break;
      case ReferenceCopula::Family::gaussian:
        if (!a.has_rho) throw ValidationError("simulate: gaussian needs --rho or --tau");
        ref = ReferenceCopula::gaussian2(a.rho);
        break;
      case ReferenceCopula::Family::clayton:
        if (!a.has_theta) throw ValidationError("simulate: clayton needs --theta or --tau");
        ref = ReferenceCopula::clayton(a.theta);
        break;
      case ReferenceCopula::Family::gumbel:
        if (!a.has_theta) throw ValidationError("simulate: gumbel needs --theta or --tau");
        ref = ReferenceCopula::gumbel(a.theta);
        break;
      case ReferenceCopula::Family::gauss_mixture:
        ref = ReferenceCopula::gauss_mixture();
        break;
    }
  }
  const MarginalSpec::Kind kind = a.marginals == "uniform"
                                      ? MarginalSpec::Kind::known_uniform
                                      : MarginalSpec::Kind::known_std_normal;
  if (a.marginals != "uniform" && a.marginals != "std_normal") {
    throw ValidationError("simulate: --marginals must be 'uniform' or 'std_normal'");
  }
  const Dataset data = generate_dataset(ref, a.n, kind, a.seed);
  std::vector<std::string> names;
  for (int j = 0; j < data.d; ++j) names.push_back("y" + std::to_string(j + 1));
  write_csv_matrix(a.out, data.y, data.n, static_cast<std::size_t>(data.d), names);
  std::cout << "simulate: wrote " << data.n << " x " << data.d << " dataset to " << a.out << "\n";
  return kExitOk;
}

// --- measures -------------------------------------------------------------------

int cmd_measures(const std::string& copula_path, const std::string& ref_json, int ref_refine) {
  const GridCopula c = read_copula(copula_path);
  GridCopula c2 = c.grid().dims() == 2 ? c : bivariate_margin(c, 0, 1);
  std::cout << "tau " << format_double(kendall_tau(c2)) << "\n";
  std::cout << "spearman " << format_double(spearman_rho(c2)) << "\n";
  if (!ref_json.empty()) {
    json j;
    try {
      j = json::parse(ref_json);
    } catch (const json::exception& e) {
      throw ValidationError(std::string("measures: bad --ref JSON: ") + e.what());
    }
    const ReferenceCopula ref = reference_from_json(j, "--ref");
    const GridCopula ref_proj = project(ref, refine_uniformly(c.grid(), ref_refine));
    std::cout << "hellinger " << format_double(hellinger(c, ref_proj)) << "\n";
    std::cout << "ise " << format_double(integrated_squared_error(c, ref_proj)) << "\n";
  }
  return kExitOk;
}

// --- project --------------------------------------------------------------------

int cmd_project(const std::string& family, double theta, double rho, double tau, bool has_theta,
                bool has_rho, bool has_tau, int m, const std::string& out) {
  const auto fam = family_from_name(family);
  ReferenceCopula ref = ReferenceCopula::independence(2);
  if (has_tau) {
    ref = reference_from_tau(fam, tau);
  } else if (fam == ReferenceCopula::Family::gaussian && has_rho) {
    ref = ReferenceCopula::gaussian2(rho);
  } else if (fam == ReferenceCopula::Family::clayton && has_theta) {
    ref = ReferenceCopula::clayton(theta);
  } else if (fam == ReferenceCopula::Family::gumbel && has_theta) {
    ref = ReferenceCopula::gumbel(theta);
  } else if (fam == ReferenceCopula::Family::gauss_mixture) {
    ref = ReferenceCopula::gauss_mixture();
  } else if (fam != ReferenceCopula::Family::independence) {
    throw ValidationError("project: family parameters missing (--theta/--rho/--tau)");
  }
  const GridCopula c = project(ref, Grid::uniform(2, m));
  write_copula(out, c);
  std::cout << "project: wrote " << ref.name() << " on " << m << "x" << m << " grid to " << out
            << "\n";
  return kExitOk;
}

// --- studies --------------------------------------------------------------------

int cmd_study_models(const std::string& config_path) {
  const json cfg = load_json(config_path);
  check_keys(cfg, "study config", {"kind", "output_dir", "seed"},
             {"models", "sample_sizes", "grid_m", "alpha_star", "chain", "truth_refine",
              "hit_and_run_r", "paper_scale"});
  if (cfg.at("kind").get<std::string>() != "model-study") {
    throw ValidationError("study config: kind must be 'model-study'");
  }
  ModelStudySpec spec;
  spec.output_dir = cfg.at("output_dir").get<std::string>();
  spec.seed = cfg.at("seed").get<std::uint64_t>();
  const bool paper_scale = cfg.value("paper_scale", false);
  spec.grid_m = cfg.value("grid_m", paper_scale ? 50 : 10);
  spec.alpha_star = cfg.value("alpha_star", 400.0);
  spec.truth_refine = cfg.value("truth_refine", 4);
  spec.hit_and_run_r = cfg.value("hit_and_run_r", 0.5);
  if (paper_scale) {
    spec.chain = {2000000, 20000, 1000};
    spec.sample_sizes = {500, 1000, 5000, 10000};
  } else {
    spec.chain = {200000, 20000, 1000};
    spec.sample_sizes = {250, 1000, 4000};
  }
  if (cfg.contains("chain")) spec.chain = chain_from_json(cfg.at("chain"));
  if (cfg.contains("sample_sizes")) {
    spec.sample_sizes = cfg.at("sample_sizes").get<std::vector<std::size_t>>();
  }
  const auto all = ModelStudySpec::standard_models();
  if (cfg.contains("models")) {
    for (const auto& name : cfg.at("models")) {
      bool found = false;
      for (const auto& model : all) {
        if (model.name == name.get<std::string>()) {
          spec.models.push_back(model);
          found = true;
        }
      }
      if (!found) {
        throw ValidationError("study config: unknown model '" + name.get<std::string>() +
                              "' (expected model1_clayton, model2_gaussian or model3_mixture)");
      }
    }
  } else {
    spec.models = all;
  }

  const auto result = run_model_study(spec);
  for (const auto& row : result.rows) {
    std::cout << row.model << " N=" << row.n << " hellinger "
              << format_double(row.hellinger_post_mean) << " [" << format_double(row.hellinger_lo)
              << ", " << format_double(row.hellinger_hi) << "] accept "
              << format_double(row.copula_acceptance) << "\n";
  }
  return kExitOk;
}

int cmd_study_comparison(const std::string& config_path) {
  const json cfg = load_json(config_path);
  check_keys(cfg, "study config", {"kind", "output_dir", "seed"},
             {"families", "taus", "sample_sizes", "replicates", "grid_m", "alpha_star", "chain",
              "truth_refine", "hit_and_run_r", "paper_scale"});
  if (cfg.at("kind").get<std::string>() != "comparison-study") {
    throw ValidationError("study config: kind must be 'comparison-study'");
  }
  ComparisonStudySpec spec;
  spec.output_dir = cfg.at("output_dir").get<std::string>();
  spec.seed = cfg.at("seed").get<std::uint64_t>();
  const bool paper_scale = cfg.value("paper_scale", false);
  spec.grid_m = cfg.value("grid_m", 6);
  spec.alpha_star = cfg.value("alpha_star", 40.0);
  spec.truth_refine = cfg.value("truth_refine", 1);
  spec.hit_and_run_r = cfg.value("hit_and_run_r", 0.5);
  spec.replicates = cfg.value("replicates", paper_scale ? 100 : 20);
  spec.chain = paper_scale ? StudyChainSettings{2000000, 20000, 1000}
                           : StudyChainSettings{200000, 20000, 1000};
  if (cfg.contains("chain")) spec.chain = chain_from_json(cfg.at("chain"));
  if (cfg.contains("families")) {
    spec.families.clear();
    for (const auto& f : cfg.at("families")) {
      spec.families.push_back(family_from_name(f.get<std::string>()));
    }
  }
  if (cfg.contains("taus")) spec.taus = cfg.at("taus").get<std::vector<double>>();
  if (cfg.contains("sample_sizes")) {
    spec.sample_sizes = cfg.at("sample_sizes").get<std::vector<std::size_t>>();
  }

  const auto result = run_comparison_study(spec);
  for (const auto& cell : result.cells) {
    std::cout << cell.family << " tau=" << format_double(cell.tau) << " N=" << cell.n
              << " mise(x1000) proposal " << format_double(cell.mise_proposal * 1000.0) << " flat "
              << format_double(cell.mise_flat * 1000.0) << " ratio "
              << format_double(cell.ratio) << "\n";
  }
  return kExitOk;
}

int cmd_prior_sim(int m, double alpha_star, std::uint64_t iterations, std::uint64_t burn_in,
                  std::uint64_t thinning, std::uint64_t seed, double tuning_r,
                  const std::string& out) {
  SamplerConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = burn_in;
  cfg.thinning = thinning;
  cfg.seed = seed;
  cfg.hit_and_run_r = tuning_r;
  cfg.store_samples = false;
  const auto draws = prior_simulation_r(Grid::uniform(2, m), alpha_star, cfg);
  write_csv_matrix(out, draws, draws.size(), 1, {"rho"});
  double s = 0.0;
  for (double r : draws) s += r;
  std::cout << "prior-sim: " << draws.size() << " draws, mean rho "
            << format_double(draws.empty() ? 0.0 : s / static_cast<double>(draws.size())) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Grid-uniform copula estimation and simulation studies"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;

  auto* fit = app.add_subcommand("fit", "Fit the model described by a JSON config");
  fit->add_option("--config", config_path, "JSON run configuration")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a dataset from a reference copula");
  simulate->add_option("--family", sim.family, "independence|gaussian|clayton|gumbel|gauss_mixture")
      ->required();
  auto* sim_theta = simulate->add_option("--theta", sim.theta, "Archimedean parameter");
  auto* sim_rho = simulate->add_option("--rho", sim.rho, "Gaussian correlation");
  auto* sim_tau = simulate->add_option("--tau", sim.tau, "Kendall tau (converted per family)");
  simulate->add_option("--n", sim.n, "sample size")->required();
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--marginals", sim.marginals, "uniform|std_normal (default std_normal)");
  simulate->add_option("--out", sim.out, "output CSV path")->required();

  std::string measures_copula, measures_ref;
  int measures_refine = 1;
  auto* measures = app.add_subcommand("measures", "Dependence measures of a stored copula");
  measures->add_option("--copula", measures_copula, "copula file")->required();
  measures->add_option("--ref", measures_ref,
                       "reference copula JSON, e.g. {\"family\":\"gaussian\",\"rho\":0.5}");
  measures->add_option("--ref-refine", measures_refine, "projection refinement of the reference");

  std::string project_family, project_out;
  double project_theta = 0.0, project_rho = 0.0, project_tau = 0.0;
  int project_m = 10;
  auto* proj = app.add_subcommand("project", "Project a reference copula onto a uniform grid");
  proj->add_option("--family", project_family)->required();
  auto* proj_theta = proj->add_option("--theta", project_theta);
  auto* proj_rho = proj->add_option("--rho", project_rho);
  auto* proj_tau = proj->add_option("--tau", project_tau);
  proj->add_option("--m", project_m, "intervals per axis")->required();
  proj->add_option("--out", project_out, "output copula file")->required();

  auto* study_models = app.add_subcommand("study-models", "Fit-quality study (per-model fits)");
  std::string study_models_config;
  study_models->add_option("--config", study_models_config, "JSON study spec")->required();

  auto* study_comp = app.add_subcommand("study-comparison",
                                        "Proposal-vs-flat MISE comparison study");
  std::string study_comp_config;
  study_comp->add_option("--config", study_comp_config, "JSON study spec")->required();

  int psim_m = 10;
  double psim_alpha = 100.0, psim_r = 0.5;
  std::uint64_t psim_iter = 200000, psim_burn = 20000, psim_thin = 100, psim_seed = 1;
  std::string psim_out;
  auto* psim = app.add_subcommand("prior-sim",
                                  "Sample the implied prior of the centering correlation");
  psim->add_option("--m", psim_m, "intervals per axis");
  psim->add_option("--alpha-star", psim_alpha, "prior precision per cell");
  psim->add_option("--iterations", psim_iter);
  psim->add_option("--burn-in", psim_burn);
  psim->add_option("--thinning", psim_thin);
  psim->add_option("--seed", psim_seed);
  psim->add_option("--r", psim_r, "hit-and-run tuning scale");
  psim->add_option("--out", psim_out, "output CSV of rho draws")->required();

  std::vector<const char*> argv;
  argv.push_back("gridcop");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (fit->parsed()) return cmd_fit(config_path);
    if (simulate->parsed()) {
      sim.has_theta = sim_theta->count() > 0;
      sim.has_rho = sim_rho->count() > 0;
      sim.has_tau = sim_tau->count() > 0;
      return cmd_simulate(sim);
    }
    if (measures->parsed()) return cmd_measures(measures_copula, measures_ref, measures_refine);
    if (proj->parsed()) {
      return cmd_project(project_family, project_theta, project_rho, project_tau,
                         proj_theta->count() > 0, proj_rho->count() > 0, proj_tau->count() > 0,
                         project_m, project_out);
    }
    if (study_models->parsed()) return cmd_study_models(study_models_config);
    if (study_comp->parsed()) return cmd_study_comparison(study_comp_config);
    if (psim->parsed()) {
      return cmd_prior_sim(psim_m, psim_alpha, psim_iter, psim_burn, psim_thin, psim_seed, psim_r,
                           psim_out);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace gridcop
