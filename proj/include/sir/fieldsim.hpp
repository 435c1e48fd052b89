#ifndef SIR_FIELDSIM_HPP
#define SIR_FIELDSIM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sir/lattice.hpp"

namespace sir {

enum class FieldKind { white_noise, moving_average, gaussian_decay };

FieldKind field_kind_from_string(const std::string& name);
std::string field_kind_to_string(FieldKind kind);

// Seeded lattice field generator. Moving-average fields convolve an i.i.d.
// standard-normal base field with a finite window (max-norm ball of the given
// radius, weights in lexicographic offset order); the base field is generated
// on a padded region so every in-region site sees a full window. The finite
// window makes the output m-dependent, so mixing holds by construction.
struct FieldSpec {
  FieldKind kind = FieldKind::white_noise;
  std::vector<std::int64_t> dims;
  std::uint64_t seed = 0;
  int radius = 0;               // moving-average window radius
  std::vector<double> weights;  // (2*radius+1)^N values, lexicographic offsets
  double range = 1.0;           // gaussian-decay correlation range

  static FieldSpec white_noise(std::vector<std::int64_t> dims, std::uint64_t seed);
  static FieldSpec moving_average(std::vector<std::int64_t> dims, int radius,
                                  std::vector<double> weights, std::uint64_t seed);
  // Uniform weights over the full window, normalized to unit variance.
  static FieldSpec uniform_ball(std::vector<std::int64_t> dims, int radius, std::uint64_t seed);
  // Radius-1 window supported on the center and the 2N axis neighbors,
  // normalized to unit variance.
  static FieldSpec axial_cross(std::vector<std::int64_t> dims, double center_weight,
                               double axial_weight, std::uint64_t seed);
  static FieldSpec gaussian_decay(std::vector<std::int64_t> dims, double range,
                                  std::uint64_t seed);
};

ScalarField generate_field(const FieldSpec& spec);
ScalarField generate_field_impl(const FieldSpec& spec, bool parallel);  // reference path

enum class LinkKind { identity, cubic, sine };

LinkKind link_kind_from_string(const std::string& name);
std::string link_kind_to_string(LinkKind link);
double link_eval(LinkKind link, double t);

// Regression data following Y = link(beta . X) + sigma_eps * eps with X
// jointly Gaussian: unit marginal covariance per coordinate, spatial
// correlation rho across sites via a radius-1 moving-average construction.
struct SingleIndexSpec {
  std::vector<std::int64_t> dims;
  int d = 1;
  Eigen::VectorXd beta;  // unit norm
  LinkKind link = LinkKind::identity;
  double sigma_eps = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

void validate_single_index_spec(const SingleIndexSpec& spec);
RegressionDataset generate_single_index(const SingleIndexSpec& spec);

// Brute-force Monte Carlo estimate of var(E(X|Y)) for the single-index
// model, via equal-width binning of Y with floor(replicates^(1/3)) bins.
// For the identity link with rho = 0 the closed form
// beta beta^T / (1 + sigma_eps^2) is returned alongside.
struct SigmaEOracle {
  Eigen::MatrixXd monte_carlo;
  std::optional<Eigen::MatrixXd> closed_form;
};

SigmaEOracle ground_truth_sigma_e(const SingleIndexSpec& spec, std::int64_t replicates);
SigmaEOracle ground_truth_sigma_e_binned(const SingleIndexSpec& spec, std::int64_t replicates,
                                         std::int64_t bins);

}  // namespace sir

#endif  // SIR_FIELDSIM_HPP
