// Command-line front end: simulation, estimation, prediction, and the Monte
// Carlo experiment runners. Exit codes: 0 success, 2 validation error,
// 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>

#include "sir/bench.hpp"
#include "sir/config.hpp"
#include "sir/csv_io.hpp"
#include "sir/edr.hpp"
#include "sir/fieldsim.hpp"
#include "sir/predictor.hpp"
#include "sir/rng.hpp"

namespace {

using nlohmann::json;

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_path;
  std::string format = "json";
};

void add_global_options(CLI::App* cmd, GlobalOptions& global) {
  cmd->add_option("--config", global.config_path, "key = value configuration file");
  cmd->add_option("--seed", global.seed, "master random seed")
      ->each([&global](const std::string&) { global.seed_set = true; });
  cmd->add_option("--out", global.out_path, "output file path (default: stdout)");
  cmd->add_option("--format", global.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

sir::KeyValueConfig load_config(const GlobalOptions& global) {
  if (global.config_path.empty()) return sir::KeyValueConfig::parse_string("", "<empty>");
  return sir::KeyValueConfig::parse_file(global.config_path);
}

std::uint64_t resolve_seed(const GlobalOptions& global, const sir::KeyValueConfig& config) {
  if (global.seed_set) return global.seed;
  return config.get_u64("seed", 0);
}

void emit(const GlobalOptions& global, const std::string& text) {
  if (global.out_path.empty()) {
    std::cout << text;
  } else {
    sir::write_text_file(global.out_path, text);
  }
}

sir::EstimatorSpec estimator_from_config(const sir::KeyValueConfig& config) {
  const std::string kernel_name = config.get_string("kernel.id", "epanechnikov");
  sir::KernelConfig kernel = sir::KernelConfig::make(sir::kernel_id_from_string(kernel_name));
  const std::int64_t order = config.get_int("kernel.order", kernel.order);
  if (order != kernel.order)
    sir::throw_error(sir::ErrorCode::InvalidConfig,
                     "kernel.order does not match the order of kernel '" + kernel_name + "'");
  sir::EstimatorSpec spec{std::move(kernel), std::nullopt,
                          config.get_double("schedule.c1", 0.38),
                          config.get_double("schedule.e_scale", 0.01),
                          config.get_double("schedule.c2", 0.05),
                          sir::floor_variant_from_string(config.get_string("floor.variant", "max"))};
  const std::string h_scale = config.get_string("schedule.h_scale", "auto");
  if (h_scale != "auto") spec.h_scale = sir::parse_double_value(h_scale, "schedule.h_scale");
  return spec;
}

Eigen::VectorXd beta_from_config(const sir::KeyValueConfig& config, int d) {
  const std::string text = config.get_string("model.beta", "e1");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  if (text == "e1") {
    beta[0] = 1.0;
    return beta;
  }
  const std::vector<double> values = sir::parse_double_list(text);
  if (static_cast<int>(values.size()) != d)
    sir::throw_error(sir::ErrorCode::InvalidConfig, "model.beta length must equal model.d");
  for (int j = 0; j < d; ++j) beta[j] = values[static_cast<std::size_t>(j)];
  const double norm = beta.norm();
  if (!(norm > 0.0))
    sir::throw_error(sir::ErrorCode::InvalidConfig, "model.beta must be nonzero");
  return beta / norm;
}

sir::SingleIndexSpec model_from_config(const sir::KeyValueConfig& config, std::uint64_t seed) {
  sir::SingleIndexSpec spec;
  spec.dims = sir::parse_dims(config.get_string("model.dims", "50x50"));
  spec.d = static_cast<int>(config.get_int("model.d", 3));
  spec.beta = beta_from_config(config, spec.d);
  spec.link = sir::link_kind_from_string(config.get_string("model.link", "identity"));
  spec.sigma_eps = config.get_double("model.sigma_eps", 1.0);
  spec.rho = config.get_double("model.rho", 0.0);
  spec.seed = seed;
  sir::validate_single_index_spec(spec);
  return spec;
}

sir::FieldSpec field_from_config(const sir::KeyValueConfig& config, const std::string& kind_name,
                                 const std::vector<std::int64_t>& dims, std::uint64_t seed) {
  const sir::FieldKind kind = sir::field_kind_from_string(kind_name);
  switch (kind) {
    case sir::FieldKind::white_noise:
      return sir::FieldSpec::white_noise(dims, seed);
    case sir::FieldKind::gaussian_decay:
      return sir::FieldSpec::gaussian_decay(dims, config.get_double("gd.range", 1.0), seed);
    case sir::FieldKind::moving_average: {
      const int radius = static_cast<int>(config.get_int("ma.radius", 1));
      const std::string weights = config.get_string("ma.weights", "uniform");
      if (weights == "uniform") return sir::FieldSpec::uniform_ball(dims, radius, seed);
      if (weights.rfind("cross:", 0) == 0) {
        const std::vector<double> cw = sir::parse_double_list(weights.substr(6));
        if (cw.size() != 2)
          sir::throw_error(sir::ErrorCode::InvalidConfig,
                           "ma.weights cross form is cross:<center>,<axial>");
        if (radius != 1)
          sir::throw_error(sir::ErrorCode::InvalidConfig, "cross weights require ma.radius = 1");
        return sir::FieldSpec::axial_cross(dims, cw[0], cw[1], seed);
      }
      return sir::FieldSpec::moving_average(dims, radius, sir::parse_double_list(weights), seed);
    }
  }
  sir::throw_error(sir::ErrorCode::InvalidConfig, "unhandled field kind");
}

sir::DimensionRule rule_from_config(const sir::KeyValueConfig& config) {
  const std::string d_text = config.get_string("edr.d", "auto");
  const double threshold = config.get_double("edr.threshold", 0.9);
  if (d_text == "auto") return sir::DimensionRule::fraction(threshold);
  return sir::DimensionRule::exact(static_cast<int>(sir::parse_int_value(d_text, "edr.d")));
}

sir::NeighborScanConfig scan_from_config(const sir::KeyValueConfig& config) {
  sir::NeighborScanConfig scan;
  scan.delta = config.get_double("scan.delta", 0.1);
  scan.d_max = static_cast<int>(config.get_int("scan.dmax", 8));
  scan.y_grid_size = static_cast<int>(config.get_int("scan.ygrid", 9));
  scan.terminate_exclusive = config.get_bool("scan.terminate_exclusive", false);
  if (const auto y = config.get("scan.y"))
    scan.y_value = sir::parse_double_value(*y, "scan.y");
  if (const auto anchor = config.get("scan.anchor")) {
    sir::Site site;
    site.coords = sir::parse_dims(*anchor);
    scan.anchor = site;
  }
  const std::string bandwidth = config.get_string("scan.bandwidth", "auto");
  if (bandwidth != "auto")
    scan.bandwidth = sir::parse_double_value(bandwidth, "scan.bandwidth");
  return scan;
}

json scan_to_json(const sir::NeighborScanResult& result) {
  json steps = json::array();
  for (const auto& step : result.steps) {
    json s;
    s["k"] = step.k;
    s["statistic"] = step.statistic;
    s["bandwidth"] = step.bandwidth;
    s["eligible"] = step.eligible;
    steps.push_back(std::move(s));
  }
  json j;
  j["report_type"] = "neighbor-scan";
  j["version"] = sir::kVersion;
  j["d"] = result.d;
  j["cap_reached"] = result.cap_reached;
  j["steps"] = std::move(steps);
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void require_json(const GlobalOptions& global, const std::string& what) {
  if (global.format != "json")
    sir::throw_error(sir::ErrorCode::InvalidConfig, what + " supports only --format json");
}

std::string rate_report_csv(const sir::RateReport& report) {
  std::ostringstream out;
  out << "n_hat,replicate,error,median_error,overlay,slope\n";
  for (std::size_t si = 0; si < report.sizes.size(); ++si) {
    for (std::size_t r = 0; r < report.errors[si].size(); ++r) {
      out << report.sizes[si] << "," << r << "," << sir::format_number(report.errors[si][r])
          << "," << sir::format_number(report.median_errors[si]) << ","
          << sir::format_number(report.overlay[si]) << "," << sir::format_number(report.slope)
          << "\n";
    }
  }
  return out.str();
}

std::string clt_summary_csv(const sir::CltSummary& summary) {
  std::ostringstream out;
  out << "row,col,mean_small,std_small,mean_large,std_large,std_ratio\n";
  for (std::int64_t i = 0; i < summary.std_small.rows(); ++i) {
    for (std::int64_t j = 0; j < summary.std_small.cols(); ++j) {
      out << i << "," << j << "," << sir::format_number(summary.mean_small(i, j)) << ","
          << sir::format_number(summary.std_small(i, j)) << ","
          << sir::format_number(summary.mean_large(i, j)) << ","
          << sir::format_number(summary.std_large(i, j)) << ","
          << sir::format_number(summary.std_ratio(i, j)) << "\n";
    }
  }
  return out.str();
}

std::string edr_sweep_csv(const sir::EdrSweepReport& report) {
  std::ostringstream out;
  out << "link,sigma_eps,n_hat,seed,distance,median,iqr\n";
  for (const auto& cell : report.cells) {
    for (std::size_t s = 0; s < cell.distances.size(); ++s) {
      out << sir::link_kind_to_string(cell.link) << "," << sir::format_number(cell.sigma_eps)
          << "," << cell.n_hat << "," << s << "," << sir::format_number(cell.distances[s]) << ","
          << sir::format_number(cell.median) << "," << sir::format_number(cell.iqr) << "\n";
    }
  }
  return out.str();
}

std::string predictor_bench_csv(const sir::PredictorBenchReport& report) {
  std::ostringstream out;
  out << "seed,mse_reduced,mse_baseline,mse_mean,n_train,n_test,dimension\n";
  for (const auto& row : report.rows) {
    out << row.seed_index << "," << sir::format_number(row.mse_reduced) << ","
        << sir::format_number(row.mse_baseline) << "," << sir::format_number(row.mse_mean) << ","
        << row.n_train << "," << row.n_test << "," << row.dimension << "\n";
  }
  return out.str();
}

int run_simulate(const GlobalOptions& global, const std::string& kind_flag,
                 const std::string& dims_flag, const std::string& spec_path) {
  sir::KeyValueConfig config = spec_path.empty() ? load_config(global)
                                                 : sir::KeyValueConfig::parse_file(spec_path);
  const std::string kind = !kind_flag.empty() ? kind_flag : config.get_string("sim.kind", "");
  if (kind.empty())
    sir::throw_error(sir::ErrorCode::InvalidConfig, "simulate needs --kind or sim.kind");
  const std::string dims_text =
      !dims_flag.empty() ? dims_flag : config.get_string("sim.dims", "");
  if (dims_text.empty())
    sir::throw_error(sir::ErrorCode::InvalidConfig, "simulate needs --dims or sim.dims");
  const std::vector<std::int64_t> dims = sir::parse_dims(dims_text);
  const std::uint64_t seed = global.seed_set ? global.seed : config.get_u64("sim.seed", 0);
  if (global.out_path.empty())
    sir::throw_error(sir::ErrorCode::InvalidConfig, "simulate needs --out");
  // simulate always writes CSV; --format is ignored here.

  if (kind == "single-index") {
    config.override_value("model.dims", dims_text);
    const sir::SingleIndexSpec model = model_from_config(config, seed);
    const sir::RegressionDataset data = sir::generate_single_index(model);
    sir::write_dataset_csv(data, global.out_path);
  } else {
    const sir::FieldSpec spec = field_from_config(config, kind, dims, seed);
    const sir::ScalarField field = sir::generate_field(spec);
    sir::write_field_csv(field, global.out_path);
  }
  config.ensure_all_used();
  return 0;
}

int run_sir_fit(const GlobalOptions& global, const std::string& data_path) {
  require_json(global, "sir-fit");
  sir::KeyValueConfig config = load_config(global);
  const sir::EstimatorSpec estimator = estimator_from_config(config);
  const sir::DimensionRule rule = rule_from_config(config);
  config.ensure_all_used();

  const sir::RegressionDataset raw = sir::read_dataset_csv(data_path);
  auto [centered, mean] = sir::center_dataset(raw);
  const sir::EstimatorConfig resolved = estimator.resolve(centered);
  const sir::CovariancePair pair = sir::CovariancePair::make(
      sir::empirical_covariance(centered),
      sir::inverse_regression_covariance(centered, resolved), centered.size());
  const sir::EdrModel model = sir::edr_directions(pair, rule);

  json j;
  j["report_type"] = "sir-fit";
  j["version"] = sir::kVersion;
  j["n_hat"] = centered.size();
  j["eigenvalues"] = std::vector<double>(model.eigenvalues.data(),
                                         model.eigenvalues.data() + model.eigenvalues.size());
  j["D"] = model.dimension;
  std::vector<double> directions;
  for (std::int64_t r = 0; r < model.directions.rows(); ++r)
    for (std::int64_t c = 0; c < model.directions.cols(); ++c)
      directions.push_back(model.directions(r, c));
  j["directions"] = directions;
  j["ridge"] = model.ridge;
  j["row_metric"] =
      model.metric == sir::RowMetric::sigma_inner_product ? "sigma" : "euclidean";
  json echo;
  echo["kernel.id"] = sir::kernel_id_to_string(estimator.kernel.id);
  echo["kernel.order"] = estimator.kernel.order;
  echo["schedule.c1"] = estimator.c1;
  echo["schedule.c2"] = estimator.c2;
  echo["schedule.h_scale"] = resolved.schedule.h_scale();
  echo["schedule.e_scale"] = estimator.e_scale;
  echo["floor.variant"] = sir::floor_variant_to_string(estimator.floor);
  echo["rng.algorithm"] = sir::kRngAlgorithm;
  j["config"] = std::move(echo);
  emit(global, dump_json(j));
  return 0;
}

int run_neighbor_scan(const GlobalOptions& global, const std::string& field_path,
                      std::optional<double> delta_flag, std::optional<int> dmax_flag,
                      std::optional<int> ygrid_flag) {
  require_json(global, "neighbor-scan");
  sir::KeyValueConfig config = load_config(global);
  const sir::EstimatorSpec estimator = estimator_from_config(config);
  sir::NeighborScanConfig scan = scan_from_config(config);
  if (delta_flag) scan.delta = *delta_flag;
  if (dmax_flag) scan.d_max = *dmax_flag;
  if (ygrid_flag) scan.y_grid_size = *ygrid_flag;
  config.ensure_all_used();

  const sir::ScalarField field = sir::read_field_csv(field_path);
  const sir::NeighborScanResult result =
      sir::estimate_neighbor_count(field, field.region, scan, estimator.kernel);
  json j = scan_to_json(result);
  j["config"]["scan.delta"] = scan.delta;
  j["config"]["scan.dmax"] = scan.d_max;
  j["config"]["scan.ygrid"] = scan.y_grid_size;
  j["config"]["kernel.id"] = sir::kernel_id_to_string(estimator.kernel.id);
  emit(global, dump_json(j));
  return 0;
}

int run_predict(const GlobalOptions& global, const std::string& field_path,
                const std::string& targets_path, const std::string& d_text) {
  sir::KeyValueConfig config = load_config(global);
  const sir::EstimatorSpec estimator = estimator_from_config(config);
  const sir::DimensionRule rule = rule_from_config(config);
  const sir::NeighborScanConfig scan = scan_from_config(config);
  const std::string observed_text = config.get_string("predict.observed", "");
  config.ensure_all_used();
  if (global.out_path.empty())
    sir::throw_error(sir::ErrorCode::InvalidConfig, "predict needs --out");

  const sir::ScalarField field = sir::read_field_csv(field_path);
  const sir::LatticeRegion observed =
      observed_text.empty() ? field.region
                            : sir::LatticeRegion(field.region.origin(),
                                                 sir::parse_dims(observed_text));
  std::optional<int> d;
  if (d_text != "auto") d = static_cast<int>(sir::parse_int_value(d_text, "--d"));

  const sir::FittedPredictor model = sir::fit(field, observed, d, estimator, rule, scan);
  const std::vector<sir::Site> targets = sir::read_sites_csv(targets_path);
  const std::vector<double> predictions = sir::predict_sites(model, field, observed, targets);
  sir::write_predictions_csv(targets, predictions, global.out_path);
  return 0;
}

int run_rate_bench(const GlobalOptions& global) {
  sir::KeyValueConfig config = load_config(global);
  const std::uint64_t seed = resolve_seed(global, config);
  const sir::EstimatorSpec estimator = estimator_from_config(config);
  const sir::SingleIndexSpec model = model_from_config(config, seed);
  const auto sizes = sir::parse_dims_list(config.get_string("sizes", "20x20,30x30,40x40,60x60"));
  const int replicates = static_cast<int>(config.get_int("replicates", 10));
  const std::int64_t oracle_replicates = config.get_int("oracle.replicates", 1000000);
  sir::RateSchedule schedule;
  schedule.kernel_order = estimator.kernel.order;
  schedule.c1 = estimator.c1;
  schedule.c2 = estimator.c2;
  schedule.theta = config.get_double("mixing.theta", 10.0);
  schedule.lattice_dim = static_cast<int>(model.dims.size());
  config.ensure_all_used();

  const sir::RateReport report = sir::run_rate_experiment(model, sizes, replicates, estimator,
                                                          schedule, seed, oracle_replicates);
  std::cerr << "rate-bench wall clock: " << report.wall_clock_seconds << " s\n";
  emit(global, global.format == "csv" ? rate_report_csv(report) : dump_json(to_json(report)));
  return 0;
}

int run_clt_check(const GlobalOptions& global) {
  sir::KeyValueConfig config = load_config(global);
  const std::uint64_t seed = resolve_seed(global, config);
  const sir::EstimatorSpec estimator = estimator_from_config(config);
  const sir::SingleIndexSpec model = model_from_config(config, seed);
  const auto dims = sir::parse_dims(config.get_string("sizes", "30x30"));
  const int replicates = static_cast<int>(config.get_int("replicates", 200));
  const std::int64_t oracle_replicates = config.get_int("oracle.replicates", 1000000);
  config.ensure_all_used();

  const sir::CltSummary summary =
      sir::run_clt_check(model, dims, replicates, estimator, seed, oracle_replicates);
  std::cerr << "clt-check wall clock: " << summary.wall_clock_seconds << " s\n";
  emit(global, global.format == "csv" ? clt_summary_csv(summary) : dump_json(to_json(summary)));
  return 0;
}

int run_edr_sweep(const GlobalOptions& global) {
  sir::KeyValueConfig config = load_config(global);
  const std::uint64_t seed = resolve_seed(global, config);
  const sir::EstimatorSpec estimator = estimator_from_config(config);
  const int d = static_cast<int>(config.get_int("model.d", 5));
  const Eigen::VectorXd beta = beta_from_config(config, d);
  const double rho = config.get_double("model.rho", 0.0);
  std::vector<sir::LinkKind> links;
  {
    std::istringstream ss(config.get_string("sweep.links", "identity,cubic"));
    std::string token;
    while (std::getline(ss, token, ',')) links.push_back(sir::link_kind_from_string(token));
  }
  const std::vector<double> sigmas =
      sir::parse_double_list(config.get_string("sweep.sigmas", "0.5"));
  const auto sizes = sir::parse_dims_list(config.get_string("sizes", "50x50"));
  const int seeds = static_cast<int>(config.get_int("bench.seeds", 10));
  config.ensure_all_used();

  const sir::EdrSweepReport report =
      sir::run_edr_recovery(links, sigmas, sizes, seeds, d, beta, rho, estimator, seed);
  std::cerr << "edr-sweep wall clock: " << report.wall_clock_seconds << " s\n";
  emit(global, global.format == "csv" ? edr_sweep_csv(report) : dump_json(to_json(report)));
  return 0;
}

int run_predictor_bench(const GlobalOptions& global) {
  sir::KeyValueConfig config = load_config(global);
  const std::uint64_t seed = resolve_seed(global, config);
  const sir::EstimatorSpec estimator = estimator_from_config(config);
  const sir::DimensionRule rule = rule_from_config(config);
  const sir::NeighborScanConfig scan = scan_from_config(config);
  const std::string kind = config.get_string("sim.kind", "moving-average");
  const auto dims = sir::parse_dims(config.get_string("sim.dims", "50x50"));
  const sir::FieldSpec field_spec = field_from_config(config, kind, dims, seed);
  const std::string d_text = config.get_string("d", "auto");
  const int seeds = static_cast<int>(config.get_int("bench.seeds", 10));
  config.ensure_all_used();

  std::optional<int> d;
  if (d_text != "auto") d = static_cast<int>(sir::parse_int_value(d_text, "d"));
  const sir::PredictorBenchReport report =
      sir::run_predictor_benchmark(field_spec, d, estimator, rule, seeds, seed, scan);
  std::cerr << "predictor-bench wall clock: " << report.wall_clock_seconds << " s\n";
  emit(global,
       global.format == "csv" ? predictor_bench_csv(report) : dump_json(to_json(report)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel inverse regression for lattice random fields"};
  app.require_subcommand(1);

  GlobalOptions global;

  std::string sim_kind, sim_dims, sim_spec;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a field or dataset CSV");
  add_global_options(simulate, global);
  simulate->add_option("--kind", sim_kind,
                       "white-noise | moving-average | gaussian-decay | single-index");
  simulate->add_option("--dims", sim_dims, "lattice dims, e.g. 40x40");
  simulate->add_option("--spec", sim_spec, "field spec file (key = value)");

  std::string fit_data;
  CLI::App* fit_cmd = app.add_subcommand("sir-fit", "estimate the projection from a dataset CSV");
  add_global_options(fit_cmd, global);
  fit_cmd->add_option("--data", fit_data, "dataset CSV (x1..xd,y)")->required();

  std::string scan_field;
  std::optional<double> scan_delta;
  std::optional<int> scan_dmax, scan_ygrid;
  CLI::App* scan_cmd = app.add_subcommand("neighbor-scan", "estimate the relevant neighbor count");
  add_global_options(scan_cmd, global);
  scan_cmd->add_option("--field", scan_field, "field CSV")->required();
  scan_cmd->add_option("--delta", scan_delta, "termination threshold");
  scan_cmd->add_option("--dmax", scan_dmax, "neighbor cap");
  scan_cmd->add_option("--ygrid", scan_ygrid, "evaluation grid size (<=1 for single point)");

  std::string predict_field, predict_targets, predict_d = "auto";
  CLI::App* predict_cmd = app.add_subcommand("predict", "predict field values at target sites");
  add_global_options(predict_cmd, global);
  predict_cmd->add_option("--field", predict_field, "field CSV")->required();
  predict_cmd->add_option("--targets", predict_targets, "target site CSV (i1..iN)")->required();
  predict_cmd->add_option("--d", predict_d, "neighbor count or 'auto'");

  CLI::App* rate_cmd = app.add_subcommand("rate-bench", "covariance convergence-rate experiment");
  add_global_options(rate_cmd, global);
  CLI::App* clt_cmd = app.add_subcommand("clt-check", "fluctuation scaling experiment");
  add_global_options(clt_cmd, global);
  CLI::App* sweep_cmd = app.add_subcommand("edr-sweep", "direction recovery sweep");
  add_global_options(sweep_cmd, global);
  CLI::App* pbench_cmd = app.add_subcommand("predictor-bench", "held-out predictor comparison");
  add_global_options(pbench_cmd, global);

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return run_simulate(global, sim_kind, sim_dims, sim_spec);
    if (fit_cmd->parsed()) return run_sir_fit(global, fit_data);
    if (scan_cmd->parsed())
      return run_neighbor_scan(global, scan_field, scan_delta, scan_dmax, scan_ygrid);
    if (predict_cmd->parsed()) return run_predict(global, predict_field, predict_targets, predict_d);
    if (rate_cmd->parsed()) return run_rate_bench(global);
    if (clt_cmd->parsed()) return run_clt_check(global);
    if (sweep_cmd->parsed()) return run_edr_sweep(global);
    if (pbench_cmd->parsed()) return run_predictor_bench(global);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sir::SirError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sir::is_numerical_error(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
