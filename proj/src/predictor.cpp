#include "sir/predictor.hpp"

#include <algorithm>
#include <cmath>

namespace sir {

namespace {

std::vector<double> quantile_grid(std::vector<double> values, int grid_size) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, m - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  const double lo = quantile(0.1);
  const double hi = quantile(0.9);
  std::vector<double> grid(static_cast<std::size_t>(grid_size));
  for (int g = 0; g < grid_size; ++g) {
    const double t = grid_size == 1 ? 0.5 : static_cast<double>(g) / (grid_size - 1);
    grid[static_cast<std::size_t>(g)] = lo + t * (hi - lo);
  }
  return grid;
}

// Worst-case standard error of the Nadaraya-Watson estimate over the grid,
// with sigma_z as the response scale: sigma_z * sqrt(sum w^2) / sum w.
double max_standard_error(const std::vector<double>& inputs, double sigma_z, const Kernel& kernel,
                          double bandwidth, const std::vector<double>& grid) {
  double worst = 0.0;
  for (double y : grid) {
    double sum_w = 0.0, sum_w2 = 0.0;
    for (double v : inputs) {
      const double w = kernel((y - v) / bandwidth);
      sum_w += w;
      sum_w2 += w * w;
    }
    if (sum_w <= 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, sigma_z * std::sqrt(sum_w2) / sum_w);
  }
  return worst;
}

double nadaraya_watson_1d(const std::vector<double>& inputs, const std::vector<double>& outputs,
                          const Kernel& kernel, double bandwidth, double y) {
  double sum_w = 0.0, sum_wy = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const double w = kernel((y - inputs[i]) / bandwidth);
    sum_w += w;
    sum_wy += w * outputs[i];
  }
  if (sum_w == 0.0) {
    double mean = 0.0;
    for (double v : outputs) mean += v;
    return mean / static_cast<double>(outputs.size());
  }
  return sum_wy / sum_w;
}

}  // namespace

NeighborScanResult estimate_neighbor_count(const ScalarField& field,
                                           const LatticeRegion& observed,
                                           const NeighborScanConfig& config,
                                           const KernelConfig& kernel) {
  if (!field.region.contains(observed))
    throw_error(ErrorCode::OutOfRegion, "observed region not contained in field region");
  if (!(config.delta > 0.0)) throw_error(ErrorCode::InvalidConfig, "delta must be positive");
  if (config.d_max < 1) throw_error(ErrorCode::InvalidConfig, "d_max must be >= 1");
  if (config.d_max >= observed.size())
    throw_error(ErrorCode::InsufficientRegion, "d_max must be below the observed size");

  const std::int64_t n_obs = observed.size();
  std::vector<double> values(static_cast<std::size_t>(n_obs));
  for (std::int64_t m = 0; m < n_obs; ++m) values[m] = field.at(observed.site_at(m));
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n_obs);
  for (double& v : values) v -= mean;

  double sigma = 0.0;
  for (double v : values) sigma += v * v;
  sigma = std::sqrt(sigma / static_cast<double>(n_obs));
  if (!(sigma > 0.0)) throw_error(ErrorCode::NoSignal, "field values have zero spread");

  // Vicinity translates once per site; eligibility at step k is a prefix
  // check on how many leading offsets stay inside the observed region.
  const auto offsets = vicinity_offsets(field.region.dim(), config.d_max);
  std::vector<std::vector<std::int64_t>> neighbor_flat(static_cast<std::size_t>(n_obs));
  std::vector<int> prefix_inside(static_cast<std::size_t>(n_obs), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < n_obs; ++m) {
    const Site site = observed.site_at(m);
    Site neighbor = site;
    auto& flat = neighbor_flat[static_cast<std::size_t>(m)];
    flat.reserve(offsets.size());
    int inside = 0;
    bool boundary_hit = false;
    for (const auto& offset : offsets) {
      for (int c = 0; c < field.region.dim(); ++c)
        neighbor.coords[c] = site.coords[c] + offset[static_cast<std::size_t>(c)];
      if (observed.contains(neighbor)) {
        flat.push_back(observed.flat_index(neighbor));
        if (!boundary_hit) ++inside;
      } else {
        flat.push_back(-1);
        boundary_hit = true;
      }
    }
    prefix_inside[static_cast<std::size_t>(m)] = inside;
  }

  std::vector<double> grid;
  if (config.y_grid_size >= 2) {
    grid = quantile_grid(values, config.y_grid_size);
  } else if (config.y_value) {
    grid = {*config.y_value - mean};
  } else if (config.anchor) {
    if (!observed.contains(*config.anchor))
      throw_error(ErrorCode::OutOfRegion, "anchor site outside the observed region");
    grid = {field.at(*config.anchor) - mean};
  } else {
    throw_error(ErrorCode::InvalidConfig,
                "single-point scan needs an evaluation value or an anchor site");
  }

  NeighborScanResult result;
  for (int k = 1; k <= config.d_max; ++k) {
    std::vector<double> inputs, outputs;
    for (std::int64_t m = 0; m < n_obs; ++m) {
      if (prefix_inside[static_cast<std::size_t>(m)] < k) continue;
      inputs.push_back(values[static_cast<std::size_t>(m)]);
      outputs.push_back(values[static_cast<std::size_t>(
          neighbor_flat[static_cast<std::size_t>(m)][static_cast<std::size_t>(k - 1)])]);
    }
    if (inputs.empty())
      throw_error(ErrorCode::InsufficientRegion,
                  "no eligible sites at neighbor index " + std::to_string(k));

    double sigma_z = 0.0;
    {
      double mz = 0.0;
      for (double v : outputs) mz += v;
      mz /= static_cast<double>(outputs.size());
      for (double v : outputs) sigma_z += (v - mz) * (v - mz);
      sigma_z = std::sqrt(sigma_z / static_cast<double>(outputs.size()));
    }

    double bandwidth;
    if (config.bandwidth) {
      bandwidth = *config.bandwidth;
      if (!(bandwidth > 0.0))
        throw_error(ErrorCode::InvalidConfig, "scan bandwidth must be positive");
    } else {
      bandwidth = sigma * 8.0;
      for (int j = -2; j <= 6; ++j) {
        const double candidate = sigma * std::pow(2.0, 0.5 * j);
        if (max_standard_error(inputs, sigma_z, kernel.kernel, candidate, grid) <=
            config.delta / 3.0) {
          bandwidth = candidate;
          break;
        }
      }
    }

    double statistic = 0.0;
    for (double y : grid) {
      statistic =
          std::max(statistic, std::abs(nadaraya_watson_1d(inputs, outputs, kernel.kernel,
                                                          bandwidth, y)));
    }
    result.steps.push_back(
        {k, statistic, bandwidth, static_cast<std::int64_t>(inputs.size())});

    if (statistic <= config.delta) {
      result.d = config.terminate_exclusive ? k - 1 : k;
      result.cap_reached = false;
      return result;
    }
  }
  result.d = config.d_max;
  result.cap_reached = true;
  return result;
}

FittedPredictor fit_dataset(const RegressionDataset& raw, const EstimatorSpec& spec,
                            const DimensionRule& rule) {
  auto [centered, x_mean] = center_dataset(raw);
  const EstimatorConfig config = spec.resolve(centered);

  const Eigen::MatrixXd sigma = empirical_covariance(centered);
  const Eigen::MatrixXd sigma_e = inverse_regression_covariance(centered, config);
  const CovariancePair pair = CovariancePair::make(sigma, sigma_e, centered.size());

  EdrModel model = edr_directions(pair, rule);
  if (model.dimension == 0)
    throw_error(ErrorCode::NoSignal, "dimension selection found no informative direction");
  model = with_euclidean_rows(model);

  const int dimension = model.dimension;
  const double y_mean = raw.y.mean();
  Eigen::MatrixXd projected = centered.x * model.directions.transpose();
  FittedPredictor fitted{
      raw.dim(),
      std::move(model),
      std::move(projected),
      raw.y.array() - y_mean,
      std::move(x_mean),
      y_mean,
      config.schedule.h_scale() *
          std::pow(static_cast<double>(raw.size()), -1.0 / (4.0 + dimension)),
      spec.kernel,
      raw.site_tags};
  return fitted;
}

FittedPredictor fit(const ScalarField& field, const LatticeRegion& observed,
                    std::optional<int> d, const EstimatorSpec& spec, const DimensionRule& rule,
                    const NeighborScanConfig& scan) {
  int neighbor_count;
  if (d) {
    neighbor_count = *d;
  } else {
    neighbor_count = estimate_neighbor_count(field, observed, scan, spec.kernel).d;
    if (neighbor_count < 1)
      throw_error(ErrorCode::NoSignal, "neighbor scan selected no neighbors");
  }
  const RegressionDataset raw = build_associated_process(field, neighbor_count, observed);
  return fit_dataset(raw, spec, rule);
}

double predict_vector(const FittedPredictor& model, const Eigen::VectorXd& x_raw) {
  if (x_raw.size() != model.x_mean.size())
    throw_error(ErrorCode::InvalidConfig, "neighbor vector dimension mismatch");
  const Eigen::VectorXd projected = model.edr.directions * (x_raw - model.x_mean);
  const double g = scalar_kernel_regression(model.projected_x, model.centered_y,
                                            model.kernel.kernel, model.bandwidth, projected);
  return g + model.y_mean;
}

namespace {

// The target's neighbor vector; every vicinity translate must be observed.
Eigen::VectorXd vicinity_values(int d, const ScalarField& field, const LatticeRegion& observed,
                                const Site& target) {
  const auto offsets = vicinity_offsets(field.region.dim(), d);
  Eigen::VectorXd x(d);
  Site neighbor = target;
  for (int k = 0; k < d; ++k) {
    for (int c = 0; c < field.region.dim(); ++c)
      neighbor.coords[c] = target.coords[c] + offsets[static_cast<std::size_t>(k)][c];
    if (!observed.contains(neighbor))
      throw_error(ErrorCode::OutOfRegion, "target neighbor set leaves the observed region");
    x[k] = field.at(neighbor);
  }
  return x;
}

}  // namespace

double predict_site(const FittedPredictor& model, const ScalarField& field,
                    const LatticeRegion& observed, const Site& target) {
  return predict_vector(model, vicinity_values(model.d, field, observed, target));
}

std::vector<double> predict_sites(const FittedPredictor& model, const ScalarField& field,
                                  const LatticeRegion& observed,
                                  const std::vector<Site>& targets) {
  std::vector<double> out(targets.size());
  const std::int64_t count = static_cast<std::int64_t>(targets.size());
  // Exceptions (a target with an unobserved vicinity) must not escape the
  // parallel region; capture the first one and rethrow afterwards.
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          predict_site(model, field, observed, targets[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> predict_sites_serial(const FittedPredictor& model, const ScalarField& field,
                                         const LatticeRegion& observed,
                                         const std::vector<Site>& targets) {
  std::vector<double> out(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i)
    out[i] = predict_site(model, field, observed, targets[i]);
  return out;
}

double baseline_predict_dataset(const RegressionDataset& train, const EstimatorSpec& spec,
                                const Eigen::VectorXd& x_raw) {
  const double y_std = population_std(train.y);
  if (y_std == 0.0 && !spec.h_scale) return train.y.mean();
  const double scale = spec.h_scale.value_or(y_std);
  const double bandwidth =
      scale * std::pow(static_cast<double>(train.size()), -1.0 / (4.0 + train.dim()));
  return scalar_kernel_regression(train.x, train.y, spec.kernel.kernel, bandwidth, x_raw);
}

double baseline_full_kernel_predict(const ScalarField& field, const LatticeRegion& observed,
                                    int d, const EstimatorSpec& spec, const Site& target) {
  const RegressionDataset train = build_associated_process(field, d, observed);
  return baseline_predict_dataset(train, spec, vicinity_values(d, field, observed, target));
}

}  // namespace sir
