#include "sir/fieldsim.hpp"

#include <algorithm>
#include <cmath>

#include "sir/rng.hpp"

namespace sir {

FieldKind field_kind_from_string(const std::string& name) {
  if (name == "white-noise") return FieldKind::white_noise;
  if (name == "moving-average") return FieldKind::moving_average;
  if (name == "gaussian-decay") return FieldKind::gaussian_decay;
  throw_error(ErrorCode::InvalidConfig, "unknown field kind '" + name + "'");
}

std::string field_kind_to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::white_noise: return "white-noise";
    case FieldKind::moving_average: return "moving-average";
    case FieldKind::gaussian_decay: return "gaussian-decay";
  }
  return "unknown";
}

namespace {

std::int64_t window_size(int n_dims, int radius) {
  std::int64_t s = 1;
  for (int k = 0; k < n_dims; ++k) s *= 2 * radius + 1;
  return s;
}

void validate_field_spec(const FieldSpec& spec) {
  if (spec.dims.empty()) throw_error(ErrorCode::EmptyRegion, "field dims are empty");
  for (std::int64_t d : spec.dims) {
    if (d <= 0) throw_error(ErrorCode::EmptyRegion, "field dims must be positive");
  }
  if (spec.kind == FieldKind::moving_average) {
    if (spec.radius < 0) throw_error(ErrorCode::InvalidConfig, "window radius must be >= 0");
    const std::int64_t expected = window_size(static_cast<int>(spec.dims.size()), spec.radius);
    if (static_cast<std::int64_t>(spec.weights.size()) != expected)
      throw_error(ErrorCode::InvalidConfig, "expected " + std::to_string(expected) +
                                                " window weights, got " +
                                                std::to_string(spec.weights.size()));
    for (double w : spec.weights) {
      if (!std::isfinite(w)) throw_error(ErrorCode::InvalidConfig, "window weights must be finite");
    }
  }
  if (spec.kind == FieldKind::gaussian_decay && !(spec.range > 0.0))
    throw_error(ErrorCode::InvalidConfig, "gaussian-decay range must be positive");
}

std::vector<double> normalized(std::vector<double> w) {
  double sumsq = 0.0;
  for (double v : w) sumsq += v * v;
  if (!(sumsq > 0.0)) throw_error(ErrorCode::InvalidConfig, "window weights are all zero");
  const double inv = 1.0 / std::sqrt(sumsq);
  for (double& v : w) v *= inv;
  return w;
}

// Offsets of the max-norm ball in lexicographic order, matching the weight
// vector layout.
std::vector<std::vector<std::int64_t>> window_offsets(int n_dims, int radius) {
  std::vector<std::vector<std::int64_t>> offsets;
  std::vector<std::int64_t> u(n_dims, -radius);
  while (true) {
    offsets.push_back(u);
    int k = n_dims - 1;
    while (k >= 0 && u[k] == radius) {
      u[k] = -radius;
      --k;
    }
    if (k < 0) break;
    ++u[k];
  }
  return offsets;
}

FieldSpec resolve_gaussian_decay(const FieldSpec& spec) {
  const int n_dims = static_cast<int>(spec.dims.size());
  const int radius = std::max<int>(1, static_cast<int>(std::ceil(3.0 * spec.range)));
  const auto offsets = window_offsets(n_dims, radius);
  std::vector<double> weights(offsets.size());
  for (std::size_t m = 0; m < offsets.size(); ++m) {
    double dist2 = 0.0;
    for (std::int64_t c : offsets[m]) dist2 += static_cast<double>(c * c);
    weights[m] = std::exp(-dist2 / (2.0 * spec.range * spec.range));
  }
  return FieldSpec::moving_average(spec.dims, radius, normalized(std::move(weights)), spec.seed);
}

// Windowed sum of a counter-indexed normal base field over a padded region.
std::vector<double> moving_average_values(const LatticeRegion& region, int radius,
                                          const std::vector<double>& weights, std::uint64_t seed,
                                          bool parallel) {
  const int n_dims = region.dim();
  std::vector<std::int64_t> padded_origin(region.origin());
  std::vector<std::int64_t> padded_dims(region.dims());
  for (int k = 0; k < n_dims; ++k) {
    padded_origin[k] -= radius;
    padded_dims[k] += 2 * radius;
  }
  const LatticeRegion padded(padded_origin, padded_dims);

  std::vector<double> base(static_cast<std::size_t>(padded.size()));
  const std::int64_t padded_count = padded.size();
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < padded_count; ++m)
      base[static_cast<std::size_t>(m)] = normal_at(seed, static_cast<std::uint64_t>(m));
  } else {
    for (std::int64_t m = 0; m < padded_count; ++m)
      base[static_cast<std::size_t>(m)] = normal_at(seed, static_cast<std::uint64_t>(m));
  }

  const auto offsets = window_offsets(n_dims, radius);
  std::vector<double> values(static_cast<std::size_t>(region.size()));
  const std::int64_t count = region.size();
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t m = 0; m < count; ++m) {
    Site site = region.site_at(m);
    double acc = 0.0;
    Site shifted = site;
    for (std::size_t w = 0; w < offsets.size(); ++w) {
      if (weights[w] == 0.0) continue;
      for (int k = 0; k < n_dims; ++k) shifted.coords[k] = site.coords[k] + offsets[w][k];
      acc += weights[w] * base[static_cast<std::size_t>(padded.flat_index(shifted))];
    }
    values[static_cast<std::size_t>(m)] = acc;
  }
  return values;
}

}  // namespace

FieldSpec FieldSpec::white_noise(std::vector<std::int64_t> dims, std::uint64_t seed) {
  FieldSpec spec;
  spec.kind = FieldKind::white_noise;
  spec.dims = std::move(dims);
  spec.seed = seed;
  return spec;
}

FieldSpec FieldSpec::moving_average(std::vector<std::int64_t> dims, int radius,
                                    std::vector<double> weights, std::uint64_t seed) {
  FieldSpec spec;
  spec.kind = FieldKind::moving_average;
  spec.dims = std::move(dims);
  spec.radius = radius;
  spec.weights = std::move(weights);
  spec.seed = seed;
  validate_field_spec(spec);
  return spec;
}

FieldSpec FieldSpec::uniform_ball(std::vector<std::int64_t> dims, int radius,
                                  std::uint64_t seed) {
  const std::int64_t count = window_size(static_cast<int>(dims.size()), radius);
  std::vector<double> weights(static_cast<std::size_t>(count), 1.0);
  return moving_average(std::move(dims), radius, normalized(std::move(weights)), seed);
}

FieldSpec FieldSpec::axial_cross(std::vector<std::int64_t> dims, double center_weight,
                                 double axial_weight, std::uint64_t seed) {
  const int n_dims = static_cast<int>(dims.size());
  const auto offsets = window_offsets(n_dims, 1);
  std::vector<double> weights(offsets.size(), 0.0);
  for (std::size_t m = 0; m < offsets.size(); ++m) {
    std::int64_t dist2 = 0;
    for (std::int64_t c : offsets[m]) dist2 += c * c;
    if (dist2 == 0) weights[m] = center_weight;
    else if (dist2 == 1) weights[m] = axial_weight;
  }
  return moving_average(std::move(dims), 1, normalized(std::move(weights)), seed);
}

FieldSpec FieldSpec::gaussian_decay(std::vector<std::int64_t> dims, double range,
                                    std::uint64_t seed) {
  FieldSpec spec;
  spec.kind = FieldKind::gaussian_decay;
  spec.dims = std::move(dims);
  spec.range = range;
  spec.seed = seed;
  validate_field_spec(spec);
  return spec;
}

ScalarField generate_field_impl(const FieldSpec& spec, bool parallel) {
  validate_field_spec(spec);
  if (spec.kind == FieldKind::gaussian_decay)
    return generate_field_impl(resolve_gaussian_decay(spec), parallel);

  LatticeRegion region(spec.dims);
  if (spec.kind == FieldKind::white_noise) {
    std::vector<double> values(static_cast<std::size_t>(region.size()));
    const std::int64_t count = region.size();
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t m = 0; m < count; ++m)
      values[static_cast<std::size_t>(m)] = normal_at(spec.seed, static_cast<std::uint64_t>(m));
    return ScalarField(std::move(region), std::move(values));
  }
  std::vector<double> values =
      moving_average_values(region, spec.radius, spec.weights, spec.seed, parallel);
  return ScalarField(std::move(region), std::move(values));
}

ScalarField generate_field(const FieldSpec& spec) { return generate_field_impl(spec, true); }

LinkKind link_kind_from_string(const std::string& name) {
  if (name == "identity") return LinkKind::identity;
  if (name == "cubic") return LinkKind::cubic;
  if (name == "sine") return LinkKind::sine;
  throw_error(ErrorCode::InvalidConfig, "unknown link '" + name + "'");
}

std::string link_kind_to_string(LinkKind link) {
  switch (link) {
    case LinkKind::identity: return "identity";
    case LinkKind::cubic: return "cubic";
    case LinkKind::sine: return "sine";
  }
  return "unknown";
}

double link_eval(LinkKind link, double t) {
  switch (link) {
    case LinkKind::identity: return t;
    case LinkKind::cubic: return t * t * t;
    case LinkKind::sine: return std::sin(t);
  }
  return t;
}

void validate_single_index_spec(const SingleIndexSpec& spec) {
  if (spec.dims.empty()) throw_error(ErrorCode::EmptyRegion, "dims are empty");
  for (std::int64_t d : spec.dims) {
    if (d <= 0) throw_error(ErrorCode::EmptyRegion, "dims must be positive");
  }
  if (spec.d < 1) throw_error(ErrorCode::InvalidConfig, "covariate dimension must be >= 1");
  if (spec.beta.size() != spec.d)
    throw_error(ErrorCode::InvalidConfig, "beta length must equal the covariate dimension");
  if (std::abs(spec.beta.norm() - 1.0) > 1e-12)
    throw_error(ErrorCode::InvalidConfig, "beta must have unit norm");
  if (!(spec.sigma_eps >= 0.0))
    throw_error(ErrorCode::InvalidConfig, "noise level must be non-negative");
  if (!(spec.rho >= 0.0 && spec.rho < 1.0))
    throw_error(ErrorCode::InvalidConfig, "rho must lie in [0, 1)");
}

RegressionDataset generate_single_index(const SingleIndexSpec& spec) {
  validate_single_index_spec(spec);
  const LatticeRegion region(spec.dims);
  const std::int64_t n = region.size();

  // Coordinate fields: independent radius-1 axial-cross moving averages with
  // center weight 1 and axial weight rho, normalized to unit variance. Each
  // coordinate draws from its own derived substream; the noise uses one more.
  Eigen::MatrixXd x(n, spec.d);
  for (int j = 0; j < spec.d; ++j) {
    FieldSpec coord =
        spec.rho == 0.0
            ? FieldSpec::white_noise(spec.dims, derive_seed(spec.seed, static_cast<std::uint64_t>(j)))
            : FieldSpec::axial_cross(spec.dims, 1.0, spec.rho,
                                     derive_seed(spec.seed, static_cast<std::uint64_t>(j)));
    const ScalarField field = generate_field(coord);
    for (std::int64_t i = 0; i < n; ++i) x(i, j) = field.values[static_cast<std::size_t>(i)];
  }

  const std::uint64_t noise_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(spec.d));
  Eigen::VectorXd y(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double index_value = spec.beta.dot(x.row(i));
    const double eps =
        spec.sigma_eps > 0.0 ? spec.sigma_eps * normal_at(noise_seed, static_cast<std::uint64_t>(i))
                             : 0.0;
    y[i] = link_eval(spec.link, index_value) + eps;
  }

  std::vector<Site> tags;
  tags.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) tags.push_back(region.site_at(i));
  return make_dataset(std::move(x), std::move(y), std::move(tags));
}

SigmaEOracle ground_truth_sigma_e_binned(const SingleIndexSpec& spec, std::int64_t replicates,
                                         std::int64_t bins) {
  validate_single_index_spec(spec);
  if (replicates < 1000)
    throw_error(ErrorCode::InsufficientReplicates, "need at least 1e3 oracle replicates");
  if (bins < 2) throw_error(ErrorCode::InvalidConfig, "need at least 2 bins");

  // The per-site law of (X, Y) does not depend on rho, so the oracle draws
  // i.i.d. pairs.
  const std::uint64_t seed = derive_seed(spec.seed, 0x6f7261636c65ull);  // oracle substream
  const int d = spec.d;
  Eigen::MatrixXd x(replicates, d);
  Eigen::VectorXd y(replicates);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < replicates; ++r) {
    const std::uint64_t base = static_cast<std::uint64_t>(r) * (d + 1);
    double index_value = 0.0;
    for (int j = 0; j < d; ++j) {
      const double v = normal_at(seed, base + j);
      x(r, j) = v;
      index_value += spec.beta[j] * v;
    }
    y[r] = link_eval(spec.link, index_value) + spec.sigma_eps * normal_at(seed, base + d);
  }

  // Equal-count bins over the sorted responses. Quantile bins keep every bin
  // populated under heavy-tailed links, where equal-width bins would lump
  // nearly all the mass into a few cells and underestimate var(E(X|Y)).
  std::vector<std::int64_t> order(static_cast<std::size_t>(replicates));
  for (std::int64_t r = 0; r < replicates; ++r) order[static_cast<std::size_t>(r)] = r;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t a, std::int64_t b) { return y[a] < y[b]; });
  Eigen::MatrixXd bin_sums = Eigen::MatrixXd::Zero(bins, d);
  Eigen::VectorXd bin_counts = Eigen::VectorXd::Zero(bins);
  for (std::int64_t rank = 0; rank < replicates; ++rank) {
    const std::int64_t b = rank * bins / replicates;
    bin_sums.row(b) += x.row(order[static_cast<std::size_t>(rank)]);
    bin_counts[b] += 1.0;
  }

  Eigen::VectorXd grand_mean = Eigen::VectorXd::Zero(d);
  for (std::int64_t b = 0; b < bins; ++b) {
    if (bin_counts[b] > 0.0) grand_mean += bin_sums.row(b).transpose();
  }
  grand_mean /= static_cast<double>(replicates);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (std::int64_t b = 0; b < bins; ++b) {
    if (bin_counts[b] == 0.0) continue;
    const Eigen::VectorXd mean_b = bin_sums.row(b).transpose() / bin_counts[b];
    const Eigen::VectorXd dev = mean_b - grand_mean;
    cov.noalias() += (bin_counts[b] / static_cast<double>(replicates)) * dev * dev.transpose();
  }

  SigmaEOracle oracle;
  oracle.monte_carlo = 0.5 * (cov + cov.transpose());
  if (spec.link == LinkKind::identity && spec.rho == 0.0) {
    oracle.closed_form =
        spec.beta * spec.beta.transpose() / (1.0 + spec.sigma_eps * spec.sigma_eps);
  }
  return oracle;
}

SigmaEOracle ground_truth_sigma_e(const SingleIndexSpec& spec, std::int64_t replicates) {
  const std::int64_t bins =
      static_cast<std::int64_t>(std::floor(std::cbrt(static_cast<double>(replicates))));
  return ground_truth_sigma_e_binned(spec, replicates, std::max<std::int64_t>(2, bins));
}

}  // namespace sir
