#include "sir/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sir/config.hpp"
#include "sir/rng.hpp"

namespace sir {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t volume(const std::vector<std::int64_t>& dims) {
  std::int64_t n = 1;
  for (std::int64_t d : dims) n *= d;
  return n;
}

Eigen::MatrixXd sigma_e_of(const SingleIndexSpec& spec, const EstimatorSpec& estimator) {
  const RegressionDataset data = generate_single_index(spec);
  auto [centered, mean] = center_dataset(data);
  const EstimatorConfig config = estimator.resolve(centered);
  return inverse_regression_covariance(centered, config);
}

Eigen::MatrixXd oracle_target(const SingleIndexSpec& model, std::uint64_t master_seed,
                              std::int64_t oracle_replicates) {
  SingleIndexSpec oracle_spec = model;
  oracle_spec.seed = master_seed;
  const SigmaEOracle oracle = ground_truth_sigma_e(oracle_spec, oracle_replicates);
  return oracle.closed_form ? *oracle.closed_form : oracle.monte_carlo;
}

void echo_model(std::map<std::string, std::string>& echo, const SingleIndexSpec& model) {
  echo["model.link"] = link_kind_to_string(model.link);
  echo["model.d"] = std::to_string(model.d);
  echo["model.sigma_eps"] = std::to_string(model.sigma_eps);
  echo["model.rho"] = std::to_string(model.rho);
  std::string beta;
  for (int j = 0; j < model.beta.size(); ++j) {
    if (j) beta += ",";
    beta += std::to_string(model.beta[j]);
  }
  echo["model.beta"] = beta;
}

void echo_estimator(std::map<std::string, std::string>& echo, const EstimatorSpec& estimator) {
  echo["kernel.id"] = kernel_id_to_string(estimator.kernel.id);
  echo["kernel.order"] = std::to_string(estimator.kernel.order);
  echo["schedule.c1"] = std::to_string(estimator.c1);
  echo["schedule.c2"] = std::to_string(estimator.c2);
  echo["schedule.h_scale"] =
      estimator.h_scale ? std::to_string(*estimator.h_scale) : std::string("auto");
  echo["schedule.e_scale"] = std::to_string(estimator.e_scale);
  echo["floor.variant"] = floor_variant_to_string(estimator.floor);
  echo["rng.algorithm"] = kRngAlgorithm;
}

}  // namespace

double RateSchedule::theta1() const {
  return (4.0 * lattice_dim + theta) / (theta - 2.0 * lattice_dim);
}

double RateSchedule::h(std::int64_t n, double h_scale) const {
  return h_scale * std::pow(static_cast<double>(n), -c1);
}

double RateSchedule::e(std::int64_t n, double e_scale) const {
  return e_scale * std::pow(static_cast<double>(n), -c2);
}

double RateSchedule::psi(std::int64_t n, double h_scale) const {
  const double hn = h(n, h_scale);
  const double nd = static_cast<double>(n);
  return std::pow(hn, kernel_order) + std::sqrt(std::log(nd) / (nd * hn));
}

double RateSchedule::overlay(std::int64_t n, double h_scale, double e_scale) const {
  const double p = psi(n, h_scale);
  const double en = e(n, e_scale);
  return std::pow(h(n, h_scale), kernel_order) + p * p / (en * en);
}

void RateSchedule::validate() const {
  if (!(theta > 2.0 * lattice_dim))
    throw_error(ErrorCode::InvalidSchedule, "mixing exponent must exceed twice the lattice dim");
  if (!(theta1() > 0.0)) throw_error(ErrorCode::InvalidSchedule, "derived exponent must be positive");
  double prev = psi(64, 1.0);
  for (std::int64_t n = 128; n <= (std::int64_t(1) << 26); n *= 2) {
    const double cur = psi(n, 1.0);
    if (cur > prev)
      throw_error(ErrorCode::InvalidSchedule, "psi is not decreasing for this schedule");
    prev = cur;
  }
}

RateReport run_rate_experiment(const SingleIndexSpec& model,
                               const std::vector<std::vector<std::int64_t>>& size_dims,
                               int replicates, const EstimatorSpec& estimator,
                               const RateSchedule& schedule, std::uint64_t master_seed,
                               std::int64_t oracle_replicates) {
  const auto start = Clock::now();
  if (size_dims.size() < 3)
    throw_error(ErrorCode::InsufficientSizes, "need at least 3 sizes for a slope fit");
  if (replicates < 5)
    throw_error(ErrorCode::InsufficientReplicates, "need at least 5 replicates per size");
  schedule.validate();

  RateReport report;
  report.master_seed = master_seed;
  for (const auto& dims : size_dims) report.sizes.push_back(volume(dims));
  for (std::size_t i = 1; i < report.sizes.size(); ++i) {
    if (report.sizes[i] <= report.sizes[i - 1])
      throw_error(ErrorCode::InvalidConfig, "sizes must be strictly increasing");
  }

  const Eigen::MatrixXd target = oracle_target(model, master_seed, oracle_replicates);

  report.errors.resize(size_dims.size());
  for (std::size_t si = 0; si < size_dims.size(); ++si) {
    report.errors[si].resize(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r) {
      SingleIndexSpec spec = model;
      spec.dims = size_dims[si];
      spec.seed = derive_seed(master_seed,
                              static_cast<std::uint64_t>(si) * 1000003ull +
                                  static_cast<std::uint64_t>(r));
      const Eigen::MatrixXd estimate = sigma_e_of(spec, estimator);
      report.errors[si][static_cast<std::size_t>(r)] = (estimate - target).norm();
    }
  }

  std::vector<double> log_sizes, log_medians;
  for (std::size_t si = 0; si < report.sizes.size(); ++si) {
    report.median_errors.push_back(median_of(report.errors[si]));
    report.overlay.push_back(schedule.overlay(report.sizes[si], 1.0, estimator.e_scale));
    log_sizes.push_back(std::log(static_cast<double>(report.sizes[si])));
    log_medians.push_back(std::log(report.median_errors.back()));
  }
  const auto [slope, intercept] = ols_fit(log_sizes, log_medians);
  report.slope = slope;
  report.intercept = intercept;
  if (!std::isfinite(report.slope))
    throw_error(ErrorCode::NoSignal, "slope fit did not produce a finite value");

  echo_model(report.config_echo, model);
  echo_estimator(report.config_echo, estimator);
  report.config_echo["replicates"] = std::to_string(replicates);
  report.config_echo["oracle.replicates"] = std::to_string(oracle_replicates);
  report.config_echo["mixing.theta"] = std::to_string(schedule.theta);
  report.config_echo["seed"] = std::to_string(master_seed);
  {
    std::string sizes_text;
    for (std::size_t si = 0; si < size_dims.size(); ++si) {
      if (si) sizes_text += ",";
      sizes_text += dims_to_string(size_dims[si]);
    }
    report.config_echo["sizes"] = sizes_text;
  }
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

CltSummary run_clt_check(const SingleIndexSpec& model, const std::vector<std::int64_t>& dims,
                         int replicates, const EstimatorSpec& estimator,
                         std::uint64_t master_seed, std::int64_t oracle_replicates) {
  const auto start = Clock::now();
  if (replicates < 100)
    throw_error(ErrorCode::InsufficientReplicates, "need at least 100 replicates");

  std::vector<std::int64_t> dims_large = dims;
  for (auto& d : dims_large) d *= 2;

  const Eigen::MatrixXd target = oracle_target(model, master_seed, oracle_replicates);
  const int d = model.d;

  CltSummary summary;
  summary.master_seed = master_seed;
  summary.replicates = replicates;
  summary.size_small = volume(dims);
  summary.size_large = volume(dims_large);

  const auto run_block = [&](const std::vector<std::int64_t>& block_dims, std::uint64_t tag,
                             Eigen::MatrixXd& mean_out, Eigen::MatrixXd& std_out) {
    const double root_n = std::sqrt(static_cast<double>(volume(block_dims)));
    std::vector<Eigen::MatrixXd> scaled(static_cast<std::size_t>(replicates));
    for (int r = 0; r < replicates; ++r) {
      SingleIndexSpec spec = model;
      spec.dims = block_dims;
      spec.seed = derive_seed(master_seed, tag * 1000003ull + static_cast<std::uint64_t>(r));
      scaled[static_cast<std::size_t>(r)] = root_n * (sigma_e_of(spec, estimator) - target);
    }
    mean_out = Eigen::MatrixXd::Zero(d, d);
    for (const auto& m : scaled) mean_out += m;
    mean_out /= static_cast<double>(replicates);
    std_out = Eigen::MatrixXd::Zero(d, d);
    for (const auto& m : scaled) std_out += (m - mean_out).cwiseProduct(m - mean_out);
    std_out = (std_out / static_cast<double>(replicates - 1)).cwiseSqrt();
  };

  run_block(dims, 1, summary.mean_small, summary.std_small);
  run_block(dims_large, 2, summary.mean_large, summary.std_large);
  summary.std_ratio = summary.std_small.cwiseQuotient(summary.std_large);

  echo_model(summary.config_echo, model);
  echo_estimator(summary.config_echo, estimator);
  summary.config_echo["replicates"] = std::to_string(replicates);
  summary.config_echo["oracle.replicates"] = std::to_string(oracle_replicates);
  summary.config_echo["seed"] = std::to_string(master_seed);
  summary.config_echo["sizes"] = dims_to_string(dims) + "," + dims_to_string(dims_large);
  summary.wall_clock_seconds = seconds_since(start);
  return summary;
}

EdrSweepReport run_edr_recovery(const std::vector<LinkKind>& links,
                                const std::vector<double>& sigma_eps_values,
                                const std::vector<std::vector<std::int64_t>>& size_dims,
                                int seeds, int d, const Eigen::VectorXd& beta, double rho,
                                const EstimatorSpec& estimator, std::uint64_t master_seed) {
  const auto start = Clock::now();
  if (seeds < 1) throw_error(ErrorCode::InvalidConfig, "need at least one seed");
  if (links.empty() || sigma_eps_values.empty() || size_dims.empty())
    throw_error(ErrorCode::InvalidConfig, "sweep grid is empty");

  EdrSweepReport report;
  report.master_seed = master_seed;
  report.seeds = seeds;
  const Eigen::MatrixXd truth = beta.transpose();

  std::uint64_t cell_tag = 0;
  for (LinkKind link : links) {
    for (double sigma_eps : sigma_eps_values) {
      for (const auto& dims : size_dims) {
        EdrSweepCell cell;
        cell.link = link;
        cell.sigma_eps = sigma_eps;
        cell.n_hat = volume(dims);
        for (int s = 0; s < seeds; ++s) {
          SingleIndexSpec spec;
          spec.dims = dims;
          spec.d = d;
          spec.beta = beta;
          spec.link = link;
          spec.sigma_eps = sigma_eps;
          spec.rho = rho;
          spec.seed = derive_seed(master_seed, cell_tag * 1000003ull +
                                                   static_cast<std::uint64_t>(s));
          const RegressionDataset data = generate_single_index(spec);
          auto [centered, mean] = center_dataset(data);
          const EstimatorConfig config = estimator.resolve(centered);
          const CovariancePair pair =
              CovariancePair::make(empirical_covariance(centered),
                                   inverse_regression_covariance(centered, config),
                                   centered.size());
          const EdrModel model = edr_directions(pair, DimensionRule::exact(1));
          cell.distances.push_back(subspace_distance(model.directions, truth));
        }
        cell.median = median_of(cell.distances);
        cell.iqr = quantile_of(cell.distances, 0.75) - quantile_of(cell.distances, 0.25);
        report.cells.push_back(std::move(cell));
        ++cell_tag;
      }
    }
  }

  echo_estimator(report.config_echo, estimator);
  report.config_echo["model.d"] = std::to_string(d);
  report.config_echo["model.rho"] = std::to_string(rho);
  report.config_echo["bench.seeds"] = std::to_string(seeds);
  report.config_echo["seed"] = std::to_string(master_seed);
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

std::pair<RegressionDataset, RegressionDataset> checkerboard_split(const RegressionDataset& data) {
  if (data.site_tags.empty())
    throw_error(ErrorCode::InvalidConfig, "checkerboard split needs site tags");
  std::vector<std::int64_t> train_rows, test_rows;
  for (std::int64_t i = 0; i < data.size(); ++i) {
    std::int64_t coord_sum = 0;
    for (std::int64_t c : data.site_tags[static_cast<std::size_t>(i)].coords) coord_sum += c;
    if (((coord_sum % 2) + 2) % 2 == 0) train_rows.push_back(i);
    else test_rows.push_back(i);
  }
  if (train_rows.size() < 2 || test_rows.empty())
    throw_error(ErrorCode::InsufficientRegion, "checkerboard split left too few samples");

  const auto take = [&](const std::vector<std::int64_t>& rows) {
    Eigen::MatrixXd x(static_cast<std::int64_t>(rows.size()), data.dim());
    Eigen::VectorXd y(static_cast<std::int64_t>(rows.size()));
    std::vector<Site> tags;
    tags.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x.row(static_cast<std::int64_t>(i)) = data.x.row(rows[i]);
      y[static_cast<std::int64_t>(i)] = data.y[rows[i]];
      tags.push_back(data.site_tags[static_cast<std::size_t>(rows[i])]);
    }
    return make_dataset(std::move(x), std::move(y), std::move(tags));
  };
  return {take(train_rows), take(test_rows)};
}

PredictorBenchReport run_predictor_benchmark(const FieldSpec& field_template,
                                             std::optional<int> d, const EstimatorSpec& estimator,
                                             const DimensionRule& rule, int seeds,
                                             std::uint64_t master_seed,
                                             const NeighborScanConfig& scan) {
  const auto start = Clock::now();
  if (seeds < 1) throw_error(ErrorCode::InvalidConfig, "need at least one seed");

  PredictorBenchReport report;
  report.master_seed = master_seed;
  double variance_sum = 0.0;

  for (int s = 0; s < seeds; ++s) {
    FieldSpec spec = field_template;
    spec.seed = derive_seed(master_seed, static_cast<std::uint64_t>(s));
    const ScalarField field = generate_field(spec);
    const LatticeRegion& observed = field.region;

    int neighbor_count;
    if (d) {
      neighbor_count = *d;
    } else {
      neighbor_count = estimate_neighbor_count(field, observed, scan, estimator.kernel).d;
      if (neighbor_count < 1)
        throw_error(ErrorCode::NoSignal, "neighbor scan selected no neighbors");
    }

    const RegressionDataset all = build_associated_process(field, neighbor_count, observed);
    auto [train, test] = checkerboard_split(all);
    const FittedPredictor fitted = fit_dataset(train, estimator, rule);

    double sse_reduced = 0.0, sse_baseline = 0.0, sse_mean = 0.0;
    const double train_mean = train.y.mean();
    for (std::int64_t i = 0; i < test.size(); ++i) {
      const Eigen::VectorXd x_raw = test.x.row(i).transpose();
      const double truth = test.y[i];
      const double pred_reduced = predict_vector(fitted, x_raw);
      const double pred_baseline = baseline_predict_dataset(train, estimator, x_raw);
      sse_reduced += (pred_reduced - truth) * (pred_reduced - truth);
      sse_baseline += (pred_baseline - truth) * (pred_baseline - truth);
      sse_mean += (train_mean - truth) * (train_mean - truth);
    }
    const double n_test = static_cast<double>(test.size());
    PredictorBenchRow row;
    row.seed_index = s;
    row.mse_reduced = sse_reduced / n_test;
    row.mse_baseline = sse_baseline / n_test;
    row.mse_mean = sse_mean / n_test;
    row.n_train = train.size();
    row.n_test = test.size();
    row.dimension = fitted.edr.dimension;
    report.rows.push_back(row);
    report.d = neighbor_count;

    const double field_mean = all.y.mean();
    variance_sum += (all.y.array() - field_mean).square().sum() / static_cast<double>(all.size());
  }
  report.field_variance = variance_sum / seeds;

  echo_estimator(report.config_echo, estimator);
  report.config_echo["sim.kind"] = field_kind_to_string(field_template.kind);
  report.config_echo["sim.dims"] = dims_to_string(field_template.dims);
  report.config_echo["bench.seeds"] = std::to_string(seeds);
  report.config_echo["seed"] = std::to_string(master_seed);
  report.config_echo["d"] = d ? std::to_string(*d) : std::string("auto");
  report.wall_clock_seconds = seconds_since(start);
  return report;
}

double median_of(std::vector<double> values) { return quantile_of(std::move(values), 0.5); }

double quantile_of(std::vector<double> values, double q) {
  if (values.empty()) throw_error(ErrorCode::InvalidConfig, "quantile of empty list");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::pair<double, double> ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw_error(ErrorCode::InsufficientSizes, "slope fit needs at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw_error(ErrorCode::InsufficientSizes, "slope fit needs distinct sizes");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::int64_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

nlohmann::json to_json(const RateReport& report) {
  nlohmann::json j;
  j["report_type"] = "rate-bench";
  j["version"] = report.version;
  j["master_seed"] = report.master_seed;
  j["sizes"] = report.sizes;
  j["errors"] = report.errors;
  j["median_errors"] = report.median_errors;
  j["slope"] = report.slope;
  j["intercept"] = report.intercept;
  j["overlay"] = report.overlay;
  j["config"] = report.config_echo;
  return j;
}

nlohmann::json to_json(const CltSummary& summary) {
  nlohmann::json j;
  j["report_type"] = "clt-check";
  j["version"] = summary.version;
  j["master_seed"] = summary.master_seed;
  j["replicates"] = summary.replicates;
  j["size_small"] = summary.size_small;
  j["size_large"] = summary.size_large;
  j["mean_small"] = matrix_json(summary.mean_small);
  j["std_small"] = matrix_json(summary.std_small);
  j["mean_large"] = matrix_json(summary.mean_large);
  j["std_large"] = matrix_json(summary.std_large);
  j["std_ratio"] = matrix_json(summary.std_ratio);
  j["config"] = summary.config_echo;
  return j;
}

nlohmann::json to_json(const EdrSweepReport& report) {
  nlohmann::json j;
  j["report_type"] = "edr-sweep";
  j["version"] = report.version;
  j["master_seed"] = report.master_seed;
  j["seeds"] = report.seeds;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    nlohmann::json c;
    c["link"] = link_kind_to_string(cell.link);
    c["sigma_eps"] = cell.sigma_eps;
    c["n_hat"] = cell.n_hat;
    c["distances"] = cell.distances;
    c["median"] = cell.median;
    c["iqr"] = cell.iqr;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  j["config"] = report.config_echo;
  return j;
}

nlohmann::json to_json(const PredictorBenchReport& report) {
  nlohmann::json j;
  j["report_type"] = "predictor-bench";
  j["version"] = report.version;
  j["master_seed"] = report.master_seed;
  j["d"] = report.d;
  j["field_variance"] = report.field_variance;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["seed_index"] = row.seed_index;
    r["mse_reduced"] = row.mse_reduced;
    r["mse_baseline"] = row.mse_baseline;
    r["mse_mean"] = row.mse_mean;
    r["n_train"] = row.n_train;
    r["n_test"] = row.n_test;
    r["dimension"] = row.dimension;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["config"] = report.config_echo;
  return j;
}

}  // namespace sir
