#include "sir/kernelest.hpp"

#include <cmath>

namespace sir {

FloorVariant floor_variant_from_string(const std::string& name) {
  if (name == "max") return FloorVariant::max_floor;
  if (name == "add") return FloorVariant::add_floor;
  throw_error(ErrorCode::InvalidConfig, "unknown floor variant '" + name + "'");
}

std::string floor_variant_to_string(FloorVariant v) {
  return v == FloorVariant::max_floor ? "max" : "add";
}

BandwidthSchedule::BandwidthSchedule(double h_scale, double c1, double e_scale, double c2,
                                     int kernel_order)
    : h_scale_(h_scale), c1_(c1), e_scale_(e_scale), c2_(c2) {
  if (!(h_scale > 0.0) || !(e_scale > 0.0))
    throw_error(ErrorCode::InvalidSchedule, "scale constants must be positive");
  if (!(c1 > 0.0 && c1 < 0.5))
    throw_error(ErrorCode::InvalidSchedule, "c1 must lie in (0, 1/2)");
  if (!(c2 > 0.0 && c2 < 0.25))
    throw_error(ErrorCode::InvalidSchedule, "c2 must lie in (0, 1/4)");
  const double k = static_cast<double>(kernel_order);
  const double lower = c2 / k + 1.0 / (4.0 * k);
  const double upper = 0.5 - 2.0 * c2;
  if (!(lower < c1 && c1 < upper))
    throw_error(ErrorCode::InvalidSchedule,
                "c1 must lie in (" + std::to_string(lower) + ", " + std::to_string(upper) +
                    ") for kernel order " + std::to_string(kernel_order));
}

double BandwidthSchedule::h(std::int64_t n) const {
  return h_scale_ * std::pow(static_cast<double>(n), -c1_);
}

double BandwidthSchedule::e(std::int64_t n) const {
  return e_scale_ * std::pow(static_cast<double>(n), -c2_);
}

double population_std(const Eigen::VectorXd& values) {
  if (values.size() == 0) return 0.0;
  const double mean = values.mean();
  return std::sqrt((values.array() - mean).square().sum() / static_cast<double>(values.size()));
}

EstimatorSpec EstimatorSpec::defaults() {
  return EstimatorSpec{KernelConfig::make(KernelId::epanechnikov), std::nullopt, 0.38, 0.01, 0.05,
                       FloorVariant::max_floor};
}

EstimatorConfig EstimatorSpec::resolve(const RegressionDataset& data) const {
  return resolve_scale(population_std(data.y));
}

EstimatorConfig EstimatorSpec::resolve_scale(double y_std) const {
  const double scale = h_scale.value_or(y_std);
  if (!(scale > 0.0))
    throw_error(ErrorCode::NoSignal, "response has zero spread; cannot set a bandwidth scale");
  return EstimatorConfig{kernel, BandwidthSchedule(scale, c1, e_scale, c2, kernel.order), floor};
}

namespace {

void require_samples(const RegressionDataset& data) {
  if (data.size() == 0) throw_error(ErrorCode::EmptyDataset, "no samples");
}

double apply_floor(double f_n, double floor_level, FloorVariant variant) {
  return variant == FloorVariant::max_floor ? std::max(floor_level, f_n) : f_n + floor_level;
}

}  // namespace

double density_at(const RegressionDataset& data, const Kernel& kernel, double bandwidth,
                  double y) {
  require_samples(data);
  if (!(bandwidth > 0.0)) throw_error(ErrorCode::InvalidSchedule, "bandwidth must be positive");
  const std::int64_t n = data.size();
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) acc += kernel((y - data.y[i]) / bandwidth);
  return acc / (static_cast<double>(n) * bandwidth);
}

Eigen::VectorXd numerator_at(const RegressionDataset& data, const Kernel& kernel,
                             double bandwidth, double y) {
  require_samples(data);
  if (!(bandwidth > 0.0)) throw_error(ErrorCode::InvalidSchedule, "bandwidth must be positive");
  const std::int64_t n = data.size();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(data.dim());
  for (std::int64_t i = 0; i < n; ++i) {
    const double w = kernel((y - data.y[i]) / bandwidth);
    if (w != 0.0) acc += w * data.x.row(i).transpose();
  }
  return acc / (static_cast<double>(n) * bandwidth);
}

InverseRegressionEval inverse_regression_at(const RegressionDataset& data, const Kernel& kernel,
                                            double bandwidth, double floor_level,
                                            FloorVariant variant, double y) {
  InverseRegressionEval eval;
  eval.y = y;
  eval.f_n = density_at(data, kernel, bandwidth, y);
  eval.f_en = apply_floor(eval.f_n, floor_level, variant);
  eval.phi_n = numerator_at(data, kernel, bandwidth, y);
  eval.r_en = eval.phi_n / eval.f_en;
  return eval;
}

double density_estimate(const RegressionDataset& data, const EstimatorConfig& config, double y) {
  require_samples(data);
  return density_at(data, config.kernel.kernel, config.schedule.h(data.size()), y);
}

Eigen::VectorXd numerator_estimate(const RegressionDataset& data, const EstimatorConfig& config,
                                   double y) {
  require_samples(data);
  return numerator_at(data, config.kernel.kernel, config.schedule.h(data.size()), y);
}

InverseRegressionEval inverse_regression(const RegressionDataset& data,
                                         const EstimatorConfig& config, double y) {
  require_samples(data);
  const std::int64_t n = data.size();
  return inverse_regression_at(data, config.kernel.kernel, config.schedule.h(n),
                               config.schedule.e(n), config.floor, y);
}

Eigen::VectorXd unfloored_inverse_regression(const RegressionDataset& data,
                                             const EstimatorConfig& config, double y) {
  require_samples(data);
  const double f_n = density_estimate(data, config, y);
  if (f_n != 0.0) return numerator_estimate(data, config, y) / f_n;
  return Eigen::VectorXd::Constant(data.dim(), data.y.mean());
}

std::vector<InverseRegressionEval> evaluate_on_grid(const RegressionDataset& data,
                                                    const EstimatorConfig& config,
                                                    const std::vector<double>& ys) {
  if (ys.empty()) throw_error(ErrorCode::InvalidConfig, "evaluation grid is empty");
  require_samples(data);
  const std::int64_t n = data.size();
  const double h = config.schedule.h(n);
  const double e = config.schedule.e(n);
  std::vector<InverseRegressionEval> out(ys.size());
  const std::int64_t count = static_cast<std::int64_t>(ys.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t g = 0; g < count; ++g) {
    out[g] = inverse_regression_at(data, config.kernel.kernel, h, e, config.floor, ys[g]);
  }
  return out;
}

std::vector<InverseRegressionEval> evaluate_on_grid_serial(const RegressionDataset& data,
                                                           const EstimatorConfig& config,
                                                           const std::vector<double>& ys) {
  if (ys.empty()) throw_error(ErrorCode::InvalidConfig, "evaluation grid is empty");
  require_samples(data);
  const std::int64_t n = data.size();
  const double h = config.schedule.h(n);
  const double e = config.schedule.e(n);
  std::vector<InverseRegressionEval> out(ys.size());
  for (std::size_t g = 0; g < ys.size(); ++g) {
    out[g] = inverse_regression_at(data, config.kernel.kernel, h, e, config.floor, ys[g]);
  }
  return out;
}

double scalar_kernel_regression(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& outputs,
                                const Kernel& kernel, double bandwidth,
                                const Eigen::VectorXd& query) {
  if (inputs.rows() == 0) throw_error(ErrorCode::EmptyDataset, "no samples");
  if (inputs.rows() != outputs.size())
    throw_error(ErrorCode::InvalidConfig, "input/output count mismatch");
  if (inputs.cols() != query.size())
    throw_error(ErrorCode::InvalidConfig, "query dimension mismatch");
  if (!(bandwidth > 0.0)) throw_error(ErrorCode::InvalidSchedule, "bandwidth must be positive");

  double weight_sum = 0.0;
  double value_sum = 0.0;
  for (std::int64_t i = 0; i < inputs.rows(); ++i) {
    double w = 1.0;
    for (std::int64_t j = 0; j < inputs.cols(); ++j) {
      w *= kernel((query[j] - inputs(i, j)) / bandwidth);
      if (w == 0.0) break;
    }
    weight_sum += w;
    value_sum += w * outputs[i];
  }
  if (weight_sum == 0.0) return outputs.mean();
  return value_sum / weight_sum;
}

}  // namespace sir
