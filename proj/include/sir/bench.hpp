#ifndef SIR_BENCH_HPP
#define SIR_BENCH_HPP

#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "sir/fieldsim.hpp"
#include "sir/predictor.hpp"

namespace sir {

inline constexpr const char* kVersion = "0.1.0";

// Theoretical rate bookkeeping: the uniform kernel rate
//   psi(n) = h(n)^k + sqrt(log n / (n h(n)))
// and the covariance-error overlay h(n)^k + psi(n)^2 / e(n)^2, with h and e
// following the power schedules. theta documents the assumed polynomial
// mixing decay; theta1 = (4N + theta) / (theta - 2N).
struct RateSchedule {
  int kernel_order = 2;
  double c1 = 0.38;
  double c2 = 0.05;
  double theta = 10.0;
  int lattice_dim = 2;

  double theta1() const;
  double h(std::int64_t n, double h_scale) const;
  double e(std::int64_t n, double e_scale) const;
  double psi(std::int64_t n, double h_scale) const;
  double overlay(std::int64_t n, double h_scale, double e_scale) const;
  void validate() const;
};

struct RateReport {
  std::vector<std::int64_t> sizes;
  std::vector<std::vector<double>> errors;  // one list per size
  std::vector<double> median_errors;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> overlay;
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> config_echo;
  std::string version = kVersion;
  double wall_clock_seconds = 0.0;  // kept off serialized reports
};

RateReport run_rate_experiment(const SingleIndexSpec& model,
                               const std::vector<std::vector<std::int64_t>>& size_dims,
                               int replicates, const EstimatorSpec& estimator,
                               const RateSchedule& schedule, std::uint64_t master_seed,
                               std::int64_t oracle_replicates);

struct CltSummary {
  std::int64_t size_small = 0;
  std::int64_t size_large = 0;
  int replicates = 0;
  Eigen::MatrixXd mean_small, std_small;
  Eigen::MatrixXd mean_large, std_large;
  Eigen::MatrixXd std_ratio;  // std_small ./ std_large, entrywise
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> config_echo;
  std::string version = kVersion;
  double wall_clock_seconds = 0.0;
};

// Scaled fluctuations sqrt(n) * (estimate - target) at the given lattice and
// at the lattice with every axis doubled.
CltSummary run_clt_check(const SingleIndexSpec& model, const std::vector<std::int64_t>& dims,
                         int replicates, const EstimatorSpec& estimator,
                         std::uint64_t master_seed, std::int64_t oracle_replicates);

struct EdrSweepCell {
  LinkKind link = LinkKind::identity;
  double sigma_eps = 0.0;
  std::int64_t n_hat = 0;
  std::vector<double> distances;  // per seed
  double median = 0.0;
  double iqr = 0.0;
};

struct EdrSweepReport {
  std::vector<EdrSweepCell> cells;
  int seeds = 0;
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> config_echo;
  std::string version = kVersion;
  double wall_clock_seconds = 0.0;
};

EdrSweepReport run_edr_recovery(const std::vector<LinkKind>& links,
                                const std::vector<double>& sigma_eps_values,
                                const std::vector<std::vector<std::int64_t>>& size_dims,
                                int seeds, int d, const Eigen::VectorXd& beta, double rho,
                                const EstimatorSpec& estimator, std::uint64_t master_seed);

struct PredictorBenchRow {
  int seed_index = 0;
  double mse_reduced = 0.0;
  double mse_baseline = 0.0;
  double mse_mean = 0.0;
  std::int64_t n_train = 0;
  std::int64_t n_test = 0;
  int dimension = 0;
};

struct PredictorBenchReport {
  std::vector<PredictorBenchRow> rows;
  int d = 0;
  double field_variance = 0.0;  // averaged over seeds
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> config_echo;
  std::string version = kVersion;
  double wall_clock_seconds = 0.0;
};

// Held-out comparison on a checkerboard split of the eligible sites: the
// dimension-reduction predictor, the full-dimensional kernel baseline, and
// the training-mean predictor.
PredictorBenchReport run_predictor_benchmark(const FieldSpec& field_template,
                                             std::optional<int> d, const EstimatorSpec& estimator,
                                             const DimensionRule& rule, int seeds,
                                             std::uint64_t master_seed,
                                             const NeighborScanConfig& scan = {});

// Splits samples by the parity of the coordinate sum of their site tags.
std::pair<RegressionDataset, RegressionDataset> checkerboard_split(const RegressionDataset& data);

double median_of(std::vector<double> values);
double quantile_of(std::vector<double> values, double q);

// OLS slope/intercept of y on x.
std::pair<double, double> ols_fit(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const CltSummary& summary);
nlohmann::json to_json(const EdrSweepReport& report);
nlohmann::json to_json(const PredictorBenchReport& report);

}  // namespace sir

#endif  // SIR_BENCH_HPP
