#ifndef SIR_EDR_HPP
#define SIR_EDR_HPP

#include <Eigen/Dense>
#include <optional>

#include "sir/kernelest.hpp"
#include "sir/lattice.hpp"

namespace sir {

// Covariance matrix of the covariates paired with the covariance of the
// estimated inverse regression. Both are symmetrized on construction;
// validation rejects asymmetric input and a negative-definite first matrix.
struct CovariancePair {
  Eigen::MatrixXd sigma;    // var(X)
  Eigen::MatrixXd sigma_e;  // var of the estimated inverse regression
  std::int64_t n_hat = 0;

  static CovariancePair make(Eigen::MatrixXd sigma, Eigen::MatrixXd sigma_e, std::int64_t n_hat);
};

enum class RowMetric { sigma_inner_product, euclidean };

// Estimated projection onto the informative directions. `directions` is D x d
// with rows orthonormal under the recorded metric; eigenvalues are the full
// non-increasing spectrum of sigma^{-1} sigma_e; `ridge` is the diagonal
// regularization that was actually added to sigma (0 when none).
struct EdrModel {
  Eigen::MatrixXd directions;
  Eigen::VectorXd eigenvalues;
  int dimension = 0;
  double ridge = 0.0;
  RowMetric metric = RowMetric::sigma_inner_product;
};

// Explicit target dimension, or the cumulative-eigenvalue-fraction rule.
struct DimensionRule {
  std::optional<int> explicit_dimension;
  double threshold = 0.9;

  static DimensionRule exact(int d) { return DimensionRule{d, 0.0}; }
  static DimensionRule fraction(double threshold) { return DimensionRule{std::nullopt, threshold}; }
};

// (1/n) sum (X_i - mean)(X_i - mean)^T.
Eigen::MatrixXd empirical_covariance(const RegressionDataset& data);

// (1/n) sum r_en(Y_i) r_en(Y_i)^T - mean_x mean_x^T, symmetrized. The default
// entry point evaluates the per-sample inverse regression across threads
// (written by sample index) and accumulates in index order, so the result is
// bitwise identical to the serial reference.
Eigen::MatrixXd inverse_regression_covariance(const RegressionDataset& data,
                                              const EstimatorConfig& config);
Eigen::MatrixXd inverse_regression_covariance_serial(const RegressionDataset& data,
                                                     const EstimatorConfig& config);

// Fixed-bandwidth variant used where the schedule must not rescale with n.
Eigen::MatrixXd inverse_regression_covariance_at(const RegressionDataset& data,
                                                 const Kernel& kernel, double bandwidth,
                                                 double floor_level, FloorVariant variant,
                                                 bool parallel = true);

// Solves sigma_e v = lambda sigma v through the whitening transform
// sigma^{-1/2} sigma_e sigma^{-1/2}; returns the top-D eigenvectors mapped
// back (rows orthonormal in the sigma inner product), eigenvalues sorted
// non-increasing, each direction sign-normalized so its largest-magnitude
// entry is positive. A ridge is applied when sigma is ill-conditioned.
EdrModel edr_directions(const CovariancePair& cov, const DimensionRule& rule);

// Smallest D whose leading eigenvalue mass reaches `threshold`; 0 when the
// spectrum is all zero. Negative inputs are clamped to zero.
int select_dimension(const Eigen::VectorXd& eigenvalues, double threshold);

// Normalized projector distance between row spaces:
// ||P_A - P_B||_F / sqrt(D + D').
double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Re-expresses the span with Euclidean-orthonormal rows (sign-normalized).
EdrModel with_euclidean_rows(const EdrModel& model);

}  // namespace sir

#endif  // SIR_EDR_HPP
