#include "sir/edr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace sir {

namespace {

constexpr double kConditionLimit = 1e10;
constexpr double kRidgeFactor = 1e-8;

void check_symmetric(const Eigen::MatrixXd& m, const char* name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw_error(ErrorCode::InvalidConfig, std::string(name) + " is not symmetric");
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

CovariancePair CovariancePair::make(Eigen::MatrixXd sigma, Eigen::MatrixXd sigma_e,
                                    std::int64_t n_hat) {
  if (sigma.rows() != sigma.cols() || sigma_e.rows() != sigma_e.cols() ||
      sigma.rows() != sigma_e.rows())
    throw_error(ErrorCode::InvalidConfig, "covariance matrices must be square and same size");
  check_symmetric(sigma, "sigma");
  check_symmetric(sigma_e, "sigma_e");
  CovariancePair pair;
  pair.sigma = symmetrize(sigma);
  pair.sigma_e = symmetrize(sigma_e);
  pair.n_hat = n_hat;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pair.sigma, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, pair.sigma.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-10 * scale)
    throw_error(ErrorCode::InvalidConfig, "sigma is not positive semi-definite");
  return pair;
}

Eigen::MatrixXd empirical_covariance(const RegressionDataset& data) {
  if (data.size() < 2) throw_error(ErrorCode::DegenerateDataset, "need at least 2 samples");
  const Eigen::MatrixXd centered = data.x.rowwise() - data.mean_x.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(data.size());
  return symmetrize(cov);
}

Eigen::MatrixXd inverse_regression_covariance_at(const RegressionDataset& data,
                                                 const Kernel& kernel, double bandwidth,
                                                 double floor_level, FloorVariant variant,
                                                 bool parallel) {
  if (data.size() < 2) throw_error(ErrorCode::DegenerateDataset, "need at least 2 samples");
  const std::int64_t n = data.size();
  const int d = data.dim();

  // The O(n^2) part: the inverse regression at every sample response. Each
  // entry depends only on its own index, so the parallel fill is bitwise
  // reproducible; accumulation below stays in index order.
  Eigen::MatrixXd r_values(n, d);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      r_values.row(i) =
          inverse_regression_at(data, kernel, bandwidth, floor_level, variant, data.y[i])
              .r_en.transpose();
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      r_values.row(i) =
          inverse_regression_at(data, kernel, bandwidth, floor_level, variant, data.y[i])
              .r_en.transpose();
    }
  }

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (std::int64_t i = 0; i < n; ++i) {
    const Eigen::VectorXd r = r_values.row(i).transpose();
    acc.noalias() += r * r.transpose();
  }
  acc /= static_cast<double>(n);
  acc.noalias() -= data.mean_x * data.mean_x.transpose();
  return symmetrize(acc);
}

Eigen::MatrixXd inverse_regression_covariance(const RegressionDataset& data,
                                              const EstimatorConfig& config) {
  const std::int64_t n = data.size();
  return inverse_regression_covariance_at(data, config.kernel.kernel, config.schedule.h(n),
                                          config.schedule.e(n), config.floor, true);
}

Eigen::MatrixXd inverse_regression_covariance_serial(const RegressionDataset& data,
                                                     const EstimatorConfig& config) {
  const std::int64_t n = data.size();
  return inverse_regression_covariance_at(data, config.kernel.kernel, config.schedule.h(n),
                                          config.schedule.e(n), config.floor, false);
}

namespace {

void sign_normalize_rows(Eigen::MatrixXd& rows) {
  for (std::int64_t r = 0; r < rows.rows(); ++r) {
    std::int64_t best = 0;
    double best_abs = 0.0;
    for (std::int64_t c = 0; c < rows.cols(); ++c) {
      const double a = std::abs(rows(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = c;
      }
    }
    if (rows(r, best) < 0.0) rows.row(r) = -rows.row(r);
  }
}

}  // namespace

EdrModel edr_directions(const CovariancePair& cov, const DimensionRule& rule) {
  const int d = static_cast<int>(cov.sigma.rows());
  if (rule.explicit_dimension && (*rule.explicit_dimension < 1 || *rule.explicit_dimension > d))
    throw_error(ErrorCode::InvalidConfig, "explicit dimension must lie in [1, d]");

  Eigen::MatrixXd sigma = cov.sigma;
  double ridge = 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sigma_eig(sigma);
  double lambda_min = sigma_eig.eigenvalues().minCoeff();
  double lambda_max = sigma_eig.eigenvalues().maxCoeff();
  if (!(lambda_max > 0.0))
    throw_error(ErrorCode::SingularCovariance, "sigma has no positive eigenvalue");
  if (lambda_min <= 0.0 || lambda_max / lambda_min > kConditionLimit) {
    ridge = kRidgeFactor * sigma.trace() / d;
    sigma += ridge * Eigen::MatrixXd::Identity(d, d);
    sigma_eig.compute(sigma);
    lambda_min = sigma_eig.eigenvalues().minCoeff();
    lambda_max = sigma_eig.eigenvalues().maxCoeff();
    if (lambda_min <= 0.0 || lambda_max / lambda_min > kConditionLimit)
      throw_error(ErrorCode::SingularCovariance, "sigma remains singular after ridge repair");
  }

  const Eigen::VectorXd inv_sqrt = sigma_eig.eigenvalues().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd whitener =
      sigma_eig.eigenvectors() * inv_sqrt.asDiagonal() * sigma_eig.eigenvectors().transpose();
  const Eigen::MatrixXd whitened = 0.5 * (whitener * cov.sigma_e * whitener +
                                          (whitener * cov.sigma_e * whitener).transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(whitened);
  // Ascending from the solver; stable descending re-index keeps the solver's
  // order among ties.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return es.eigenvalues()[a] > es.eigenvalues()[b];
  });

  EdrModel model;
  model.ridge = ridge;
  model.metric = RowMetric::sigma_inner_product;
  model.eigenvalues.resize(d);
  for (int j = 0; j < d; ++j) model.eigenvalues[j] = es.eigenvalues()[order[j]];

  const int dimension = rule.explicit_dimension
                            ? *rule.explicit_dimension
                            : select_dimension(model.eigenvalues, rule.threshold);
  model.dimension = dimension;
  model.directions.resize(dimension, d);
  for (int j = 0; j < dimension; ++j) {
    model.directions.row(j) = (whitener * es.eigenvectors().col(order[j])).transpose();
  }
  sign_normalize_rows(model.directions);
  return model;
}

int select_dimension(const Eigen::VectorXd& eigenvalues, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw_error(ErrorCode::InvalidThreshold, "threshold must lie in (0, 1]");
  for (std::int64_t j = 1; j < eigenvalues.size(); ++j) {
    if (eigenvalues[j] > eigenvalues[j - 1] + 1e-12)
      throw_error(ErrorCode::InvalidConfig, "eigenvalues must be non-increasing");
  }
  const Eigen::VectorXd clamped = eigenvalues.cwiseMax(0.0);
  const double total = clamped.sum();
  if (total == 0.0) return 0;
  double cumulative = 0.0;
  for (std::int64_t j = 0; j < clamped.size(); ++j) {
    cumulative += clamped[j];
    if (cumulative >= (threshold - 1e-9) * total) return static_cast<int>(j) + 1;
  }
  return static_cast<int>(clamped.size());
}

namespace {

// Orthonormal basis of the row space via thin SVD with a rank cutoff.
Eigen::MatrixXd row_space_basis(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0 || m.cwiseAbs().maxCoeff() == 0.0)
    throw_error(ErrorCode::UndefinedSubspace, "zero matrix spans no subspace");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
  const double tol = 1e-12 * svd.singularValues()[0];
  int rank = 0;
  for (std::int64_t j = 0; j < svd.singularValues().size(); ++j) {
    if (svd.singularValues()[j] > tol) ++rank;
  }
  if (rank == 0) throw_error(ErrorCode::UndefinedSubspace, "rows do not span a subspace");
  return svd.matrixV().leftCols(rank);
}

}  // namespace

double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols())
    throw_error(ErrorCode::InvalidConfig, "subspaces must live in the same ambient space");
  const Eigen::MatrixXd qa = row_space_basis(a);
  const Eigen::MatrixXd qb = row_space_basis(b);
  const Eigen::MatrixXd pa = qa * qa.transpose();
  const Eigen::MatrixXd pb = qb * qb.transpose();
  const double denom = std::sqrt(static_cast<double>(qa.cols() + qb.cols()));
  return (pa - pb).norm() / denom;
}

EdrModel with_euclidean_rows(const EdrModel& model) {
  EdrModel out = model;
  out.metric = RowMetric::euclidean;
  if (model.dimension == 0) return out;
  // Gram-Schmidt in row order so the leading k rows still span the top-k
  // eigendirections for every k.
  Eigen::MatrixXd rows = model.directions;
  std::int64_t kept = 0;
  for (std::int64_t r = 0; r < rows.rows(); ++r) {
    Eigen::VectorXd v = rows.row(r).transpose();
    for (std::int64_t q = 0; q < kept; ++q) v -= rows.row(q).transpose().dot(v) * rows.row(q).transpose();
    const double norm = v.norm();
    if (norm <= 1e-12 * model.directions.norm())
      throw_error(ErrorCode::UndefinedSubspace, "direction rows are numerically dependent");
    rows.row(kept) = (v / norm).transpose();
    ++kept;
  }
  out.directions = rows.topRows(kept);
  sign_normalize_rows(out.directions);
  return out;
}

}  // namespace sir
