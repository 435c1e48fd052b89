#ifndef SIR_PREDICTOR_HPP
#define SIR_PREDICTOR_HPP

#include <optional>
#include <vector>

#include "sir/edr.hpp"
#include "sir/fieldsim.hpp"
#include "sir/kernelest.hpp"

namespace sir {

// Configuration of the neighbor-count scan. By default the test statistic is
// the max of |r^(k)| over a y-grid spanning the central 80% of the observed
// values; set y_grid_size <= 1 with y_value or anchor for the single-point
// rule. The scan bandwidth, unless fixed, is calibrated per step: the
// smallest candidate whose worst grid-point standard error stays below
// delta/3, which keeps the false-trigger rate under control.
struct NeighborScanConfig {
  double delta = 0.1;
  int d_max = 8;
  int y_grid_size = 9;
  std::optional<double> y_value;
  std::optional<Site> anchor;
  bool terminate_exclusive = false;  // report k-1 instead of k at termination
  std::optional<double> bandwidth;
};

struct ScanStep {
  int k = 0;
  double statistic = 0.0;
  double bandwidth = 0.0;
  std::int64_t eligible = 0;
};

struct NeighborScanResult {
  int d = 0;
  bool cap_reached = false;
  std::vector<ScanStep> steps;
};

NeighborScanResult estimate_neighbor_count(const ScalarField& field,
                                           const LatticeRegion& observed,
                                           const NeighborScanConfig& config,
                                           const KernelConfig& kernel);

// Dimension-reduction predictor: neighbor vectors are centered with the
// training mean, projected onto the estimated directions (Euclidean-
// orthonormal rows), and smoothed with a product-kernel regression whose
// bandwidth is h_scale * n^{-1/(4+D)}. Predictions add the training response
// mean back.
struct FittedPredictor {
  int d = 0;
  EdrModel edr;
  Eigen::MatrixXd projected_x;  // n x D
  Eigen::VectorXd centered_y;
  Eigen::VectorXd x_mean;
  double y_mean = 0.0;
  double bandwidth = 0.0;
  KernelConfig kernel;
  std::vector<Site> training_sites;
};

FittedPredictor fit_dataset(const RegressionDataset& raw, const EstimatorSpec& spec,
                            const DimensionRule& rule);

// Full pipeline from a field: optional scan for d, associated process,
// centering, covariance pair, direction extraction.
FittedPredictor fit(const ScalarField& field, const LatticeRegion& observed,
                    std::optional<int> d, const EstimatorSpec& spec, const DimensionRule& rule,
                    const NeighborScanConfig& scan = {});

double predict_vector(const FittedPredictor& model, const Eigen::VectorXd& x_raw);
double predict_site(const FittedPredictor& model, const ScalarField& field,
                    const LatticeRegion& observed, const Site& target);

// Batch prediction; the default fans out across threads writing by index.
std::vector<double> predict_sites(const FittedPredictor& model, const ScalarField& field,
                                  const LatticeRegion& observed,
                                  const std::vector<Site>& targets);
std::vector<double> predict_sites_serial(const FittedPredictor& model, const ScalarField& field,
                                         const LatticeRegion& observed,
                                         const std::vector<Site>& targets);

// Kernel regression on the raw d-dimensional neighbor vector, bandwidth
// h_scale * n^{-1/(4+d)}; the comparison baseline for the reduced predictor.
double baseline_full_kernel_predict(const ScalarField& field, const LatticeRegion& observed,
                                    int d, const EstimatorSpec& spec, const Site& target);
double baseline_predict_dataset(const RegressionDataset& train, const EstimatorSpec& spec,
                                const Eigen::VectorXd& x_raw);

}  // namespace sir

#endif  // SIR_PREDICTOR_HPP
