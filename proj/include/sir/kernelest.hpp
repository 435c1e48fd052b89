#ifndef SIR_KERNELEST_HPP
#define SIR_KERNELEST_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "sir/kernels.hpp"
#include "sir/lattice.hpp"

namespace sir {

enum class FloorVariant { max_floor, add_floor };

FloorVariant floor_variant_from_string(const std::string& name);
std::string floor_variant_to_string(FloorVariant v);

// Power-law bandwidth and density-floor schedules
//   h(n) = h_scale * n^{-c1},   e(n) = e_scale * n^{-c2}.
// Construction validates the exponent window
//   c2/k + 1/(4k) < c1 < 1/2 - 2*c2
// against the kernel order k, plus c1 in (0, 1/2) and c2 in (0, 1/4).
class BandwidthSchedule {
 public:
  BandwidthSchedule(double h_scale, double c1, double e_scale, double c2, int kernel_order);

  double h(std::int64_t n) const;
  double e(std::int64_t n) const;

  double h_scale() const { return h_scale_; }
  double c1() const { return c1_; }
  double e_scale() const { return e_scale_; }
  double c2() const { return c2_; }

 private:
  double h_scale_, c1_, e_scale_, c2_;
};

// Resolved estimator configuration: kernel, schedules, floor variant.
struct EstimatorConfig {
  KernelConfig kernel;
  BandwidthSchedule schedule;
  FloorVariant floor = FloorVariant::max_floor;
};

// Estimator configuration before the data-dependent scale is known. A missing
// h_scale resolves to the population standard deviation of the responses.
struct EstimatorSpec {
  KernelConfig kernel;
  std::optional<double> h_scale;
  double c1 = 0.38;
  double e_scale = 0.01;
  double c2 = 0.05;
  FloorVariant floor = FloorVariant::max_floor;

  static EstimatorSpec defaults();
  EstimatorConfig resolve(const RegressionDataset& data) const;
  EstimatorConfig resolve_scale(double y_std) const;
};

double population_std(const Eigen::VectorXd& values);

// One evaluation of the inverse-regression machinery at a point y.
struct InverseRegressionEval {
  double y = 0.0;
  double f_n = 0.0;           // kernel density estimate
  double f_en = 0.0;          // floored density
  Eigen::VectorXd phi_n;      // kernel numerator estimate
  Eigen::VectorXd r_en;       // phi_n / f_en
};

// Fixed-bandwidth building blocks (exact sums over samples in index order).
double density_at(const RegressionDataset& data, const Kernel& kernel, double bandwidth,
                  double y);
Eigen::VectorXd numerator_at(const RegressionDataset& data, const Kernel& kernel,
                             double bandwidth, double y);
InverseRegressionEval inverse_regression_at(const RegressionDataset& data, const Kernel& kernel,
                                            double bandwidth, double floor_level,
                                            FloorVariant variant, double y);

// Schedule-resolved estimators; n is the sample count of `data`.
double density_estimate(const RegressionDataset& data, const EstimatorConfig& config, double y);
Eigen::VectorXd numerator_estimate(const RegressionDataset& data, const EstimatorConfig& config,
                                   double y);
InverseRegressionEval inverse_regression(const RegressionDataset& data,
                                         const EstimatorConfig& config, double y);

// Unfloored variant: phi_n/f_n where f_n(y) != 0, and a vector filled with
// the sample mean of Y where f_n(y) == 0. Kept for completeness; the floored
// estimate is what the rest of the pipeline consumes.
Eigen::VectorXd unfloored_inverse_regression(const RegressionDataset& data,
                                             const EstimatorConfig& config, double y);

// Batched evaluation; identical pointwise to inverse_regression. The default
// entry point fans out across threads and writes results by index, so output
// is bitwise independent of scheduling. The serial variant is the reference
// path kept for testing and benchmarking.
std::vector<InverseRegressionEval> evaluate_on_grid(const RegressionDataset& data,
                                                    const EstimatorConfig& config,
                                                    const std::vector<double>& ys);
std::vector<InverseRegressionEval> evaluate_on_grid_serial(const RegressionDataset& data,
                                                           const EstimatorConfig& config,
                                                           const std::vector<double>& ys);

// Multivariate Nadaraya-Watson with a product kernel and one shared
// bandwidth. Returns the mean of `outputs` when every weight vanishes.
double scalar_kernel_regression(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& outputs,
                                const Kernel& kernel, double bandwidth,
                                const Eigen::VectorXd& query);

}  // namespace sir

#endif  // SIR_KERNELEST_HPP
