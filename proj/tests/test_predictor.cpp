#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sir/predictor.hpp"
#include "test_helpers.hpp"

using namespace sir;

namespace {

EstimatorSpec default_spec() { return EstimatorSpec::defaults(); }

// Lag correlation of a moving-average window with itself shifted by `shift`,
// from the window weights alone.
double window_overlap_correlation(const FieldSpec& spec,
                                  const std::vector<std::int64_t>& shift) {
  const int r = spec.radius;
  const int side = 2 * r + 1;
  auto weight_at = [&](std::int64_t u0, std::int64_t u1) -> double {
    if (std::abs(u0) > r || std::abs(u1) > r) return 0.0;
    return spec.weights[static_cast<std::size_t>((u0 + r) * side + (u1 + r))];
  };
  double overlap = 0.0, total = 0.0;
  for (std::int64_t u0 = -r; u0 <= r; ++u0) {
    for (std::int64_t u1 = -r; u1 <= r; ++u1) {
      total += weight_at(u0, u1) * weight_at(u0, u1);
      overlap += weight_at(u0, u1) * weight_at(u0 - shift[0], u1 - shift[1]);
    }
  }
  return overlap / total;
}

FittedPredictor manual_predictor(int d, const Eigen::MatrixXd& directions,
                                 const Eigen::MatrixXd& projected,
                                 const Eigen::VectorXd& centered_y,
                                 const Eigen::VectorXd& x_mean, double y_mean,
                                 double bandwidth) {
  EdrModel model;
  model.directions = directions;
  model.eigenvalues = Eigen::VectorXd::Zero(d);
  model.dimension = static_cast<int>(directions.rows());
  model.metric = RowMetric::euclidean;
  return FittedPredictor{d,      model,  projected,
                         centered_y, x_mean, y_mean,
                         bandwidth,  KernelConfig::make(KernelId::epanechnikov),
                         {}};
}

}  // namespace

TEST_CASE("white-noise fields stop the scan at one neighbor") {
  NeighborScanConfig config;
  config.delta = 0.1;
  config.d_max = 6;
  int ones = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScalarField field = generate_field(FieldSpec::white_noise({40, 40}, 100 + seed));
    const NeighborScanResult result =
        estimate_neighbor_count(field, field.region, config, default_spec().kernel);
    if (result.d == 1 && !result.cap_reached) ++ones;
  }
  CHECK(ones >= 9);
}

TEST_CASE("window-overlap correlations keep the scan going") {
  // Uniform weights on the center and the four axis neighbors: every window
  // neighbor within distance sqrt(2) has overlap correlation 0.4, the
  // distance-2 neighbors have 0.2, and the (2,1)-type neighbors have none.
  const FieldSpec base = FieldSpec::axial_cross({50, 50}, 1.0, 1.0, 0);
  CHECK(window_overlap_correlation(base, {0, 1}) == doctest::Approx(0.4));
  CHECK(window_overlap_correlation(base, {1, 1}) == doctest::Approx(0.4));
  CHECK(window_overlap_correlation(base, {0, 2}) == doctest::Approx(0.2));
  CHECK(window_overlap_correlation(base, {1, 2}) == doctest::Approx(0.0));

  NeighborScanConfig config;
  config.delta = 0.1;
  config.d_max = 12;
  int strong_k4 = 0, reaches_diagonals = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FieldSpec spec = base;
    spec.seed = 300 + seed;
    const ScalarField field = generate_field(spec);
    const NeighborScanResult result =
        estimate_neighbor_count(field, field.region, config, default_spec().kernel);
    REQUIRE(result.steps.size() >= 4);
    bool all_over = true;
    for (int k = 0; k < 4; ++k) all_over = all_over && result.steps[k].statistic > config.delta;
    if (all_over) ++strong_k4;
    // The 0.4-correlated diagonals keep the statistic high through k = 8.
    if (result.d >= 9 || result.cap_reached) ++reaches_diagonals;
  }
  CHECK(strong_k4 >= 9);
  CHECK(reaches_diagonals >= 9);
}

TEST_CASE("a threshold above the field range stops immediately") {
  const ScalarField field = generate_field(FieldSpec::white_noise({15, 15}, 3));
  NeighborScanConfig config;
  config.delta = 1000.0;
  config.d_max = 5;
  const NeighborScanResult result =
      estimate_neighbor_count(field, field.region, config, default_spec().kernel);
  CHECK(result.d == 1);
  CHECK(!result.cap_reached);
}

TEST_CASE("exclusive termination reports one less neighbor") {
  const ScalarField field = generate_field(FieldSpec::white_noise({20, 20}, 5));
  NeighborScanConfig config;
  config.delta = 1000.0;
  config.d_max = 5;
  config.terminate_exclusive = true;
  CHECK(estimate_neighbor_count(field, field.region, config, default_spec().kernel).d == 0);
}

TEST_CASE("scan honors a fixed bandwidth override") {
  const ScalarField field = generate_field(FieldSpec::white_noise({20, 20}, 6));
  NeighborScanConfig config;
  config.delta = 0.5;
  config.d_max = 3;
  config.bandwidth = 0.77;
  const NeighborScanResult result =
      estimate_neighbor_count(field, field.region, config, default_spec().kernel);
  for (const auto& step : result.steps) CHECK(step.bandwidth == 0.77);
}

TEST_CASE("single-point scan needs an evaluation point") {
  const ScalarField field = generate_field(FieldSpec::white_noise({20, 20}, 7));
  NeighborScanConfig config;
  config.y_grid_size = 1;
  CHECK_THROWS_AS(estimate_neighbor_count(field, field.region, config, default_spec().kernel),
                  SirError);
  config.anchor = Site({10, 10});
  CHECK_NOTHROW(estimate_neighbor_count(field, field.region, config, default_spec().kernel));
  config.anchor = Site({100, 100});
  CHECK_THROWS_AS(estimate_neighbor_count(field, field.region, config, default_spec().kernel),
                  SirError);
}

TEST_CASE("scan reports InsufficientRegion when eligibility dies out") {
  LatticeRegion region({5, 5});
  std::vector<double> ramp(25);
  for (std::int64_t m = 0; m < 25; ++m)
    ramp[static_cast<std::size_t>(m)] = static_cast<double>(region.site_at(m).coords[0]);
  const ScalarField field(region, ramp);
  const LatticeRegion observed({3, 1});
  NeighborScanConfig config;
  config.delta = 0.01;  // the ramp keeps the statistic high at k=1
  config.d_max = 2;
  try {
    estimate_neighbor_count(field, observed, config, default_spec().kernel);
    FAIL("expected InsufficientRegion");
  } catch (const SirError& e) {
    CHECK(e.code() == ErrorCode::InsufficientRegion);
  }
}

TEST_CASE("fit on a constant field fails with NoSignal") {
  LatticeRegion region({10, 10});
  const ScalarField field(region, std::vector<double>(100, 3.0));
  try {
    fit(field, region, 4, default_spec(), DimensionRule::fraction(0.9));
    FAIL("expected NoSignal");
  } catch (const SirError& e) {
    CHECK(e.code() == ErrorCode::NoSignal);
  }
}

TEST_CASE("fit recovers the symmetric direction of a four-neighbor window field") {
  // Equal window weights make the neighbor/center correlation 0.4, so the
  // inverse-regression covariance concentrates on the symmetric direction.
  Eigen::MatrixXd truth(1, 4);
  truth << 0.5, 0.5, 0.5, 0.5;
  std::vector<double> distances;
  int picked_one = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ScalarField field =
        generate_field(FieldSpec::axial_cross({50, 50}, 1.0, 1.0, 8800 + seed));
    const FittedPredictor model =
        fit(field, field.region, 4, default_spec(), DimensionRule::fraction(0.75));
    if (model.edr.dimension == 1) ++picked_one;
    distances.push_back(subspace_distance(model.edr.directions.topRows(1), truth));
  }
  std::sort(distances.begin(), distances.end());
  CHECK(distances[5] < 0.3);
  CHECK(picked_one >= 8);
}

TEST_CASE("fit is deterministic") {
  const ScalarField field = generate_field(FieldSpec::axial_cross({30, 30}, 0.2, 1.0, 4));
  const FittedPredictor a = fit(field, field.region, 4, default_spec(), DimensionRule::exact(1));
  const FittedPredictor b = fit(field, field.region, 4, default_spec(), DimensionRule::exact(1));
  CHECK((a.edr.directions - b.edr.directions).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.edr.eigenvalues - b.edr.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.projected_x - b.projected_x).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.bandwidth == b.bandwidth);
  CHECK(a.y_mean == b.y_mean);
}

TEST_CASE("prediction returns an isolated training output exactly") {
  Eigen::MatrixXd directions(1, 1);
  directions << 1.0;
  Eigen::MatrixXd projected(2, 1);
  projected << 0.0, 100.0;
  Eigen::VectorXd centered_y(2);
  centered_y << -2.0, 2.0;
  const FittedPredictor model = manual_predictor(
      1, directions, projected, centered_y, Eigen::VectorXd::Zero(1), 10.0, 1.0);
  Eigen::VectorXd query(1);
  query << 100.0;  // only the second pair is inside the kernel support
  CHECK(predict_vector(model, query) == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("prediction on a constant-plus-noise field stays near the constant") {
  LatticeRegion region({30, 30});
  const ScalarField noise = generate_field(FieldSpec::white_noise({30, 30}, 12));
  std::vector<double> values(noise.values.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = 5.0 + 0.1 * noise.values[i];
  const ScalarField field(region, values);
  const FittedPredictor model =
      fit(field, region, 4, default_spec(), DimensionRule::exact(1));
  const double prediction = predict_site(model, field, region, Site({15, 15}));
  CHECK(std::abs(prediction - 5.0) <= 0.3);
}

TEST_CASE("prediction is invariant to training sample order") {
  Rng rng(88);
  const int n = 60;
  Eigen::MatrixXd projected(n, 2);
  Eigen::VectorXd centered_y(n);
  for (int i = 0; i < n; ++i) {
    projected(i, 0) = rng.normal();
    projected(i, 1) = rng.normal();
    centered_y[i] = rng.normal();
  }
  Eigen::MatrixXd directions(2, 3);
  directions << 1, 0, 0, 0, 1, 0;
  const FittedPredictor model = manual_predictor(3, directions, projected, centered_y,
                                                 Eigen::VectorXd::Zero(3), 0.5, 0.9);

  Eigen::MatrixXd reversed_p = projected.colwise().reverse();
  Eigen::VectorXd reversed_y = centered_y.reverse();
  const FittedPredictor shuffled = manual_predictor(3, directions, reversed_p, reversed_y,
                                                    Eigen::VectorXd::Zero(3), 0.5, 0.9);
  Eigen::VectorXd query(3);
  query << 0.2, -0.3, 4.0;
  CHECK(predict_vector(model, query) ==
        doctest::Approx(predict_vector(shuffled, query)).epsilon(1e-12));
}

TEST_CASE("prediction depends only on the vicinity and the observed training data") {
  const ScalarField base = generate_field(FieldSpec::axial_cross({20, 20}, 0.3, 1.0, 71));
  const LatticeRegion observed(base.region.origin(), {20, 18});
  const Site target({10, 9});

  const FittedPredictor model =
      fit(base, observed, 4, default_spec(), DimensionRule::exact(1));
  const double before = predict_site(model, base, observed, target);

  ScalarField tampered = base;
  tampered.at(Site({10, 20})) += 100.0;  // outside the observed region
  const FittedPredictor model2 =
      fit(tampered, observed, 4, default_spec(), DimensionRule::exact(1));
  const double after = predict_site(model2, tampered, observed, target);
  CHECK(before == after);
}

TEST_CASE("predict_site rejects targets whose vicinity leaves the observed region") {
  const ScalarField field = generate_field(FieldSpec::white_noise({10, 10}, 2));
  const FittedPredictor model =
      fit(field, field.region, 4, default_spec(), DimensionRule::exact(1));
  CHECK_THROWS_AS(predict_site(model, field, field.region, Site({1, 1})), SirError);
}

TEST_CASE("batch prediction surfaces vicinity errors as exceptions") {
  const ScalarField field = generate_field(FieldSpec::axial_cross({15, 15}, 1.0, 1.0, 21));
  const FittedPredictor model =
      fit(field, field.region, 4, default_spec(), DimensionRule::exact(1));
  const std::vector<Site> targets = {Site({8, 8}), Site({1, 1})};  // corner vicinity leaves
  CHECK_THROWS_AS(predict_sites(model, field, field.region, targets), SirError);
}

TEST_CASE("batch prediction equals the serial loop bitwise") {
  const ScalarField field = generate_field(FieldSpec::axial_cross({25, 25}, 0.2, 1.0, 44));
  const FittedPredictor model =
      fit(field, field.region, 4, default_spec(), DimensionRule::exact(1));
  std::vector<Site> targets;
  for (std::int64_t a = 5; a <= 20; ++a) targets.push_back(Site({a, 12}));
  const std::vector<double> parallel = predict_sites(model, field, field.region, targets);
  const std::vector<double> serial = predict_sites_serial(model, field, field.region, targets);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < parallel.size(); ++i) CHECK(parallel[i] == serial[i]);
}

TEST_CASE("identity projection reproduces the full kernel baseline") {
  const ScalarField field = generate_field(FieldSpec::axial_cross({25, 25}, 0.3, 1.0, 64));
  const int d = 3;
  const RegressionDataset train = build_associated_process(field, d, field.region);

  EstimatorSpec spec = default_spec();
  spec.h_scale = 1.7;
  const double bandwidth =
      *spec.h_scale * std::pow(static_cast<double>(train.size()), -1.0 / (4.0 + d));

  const auto [centered, mean] = center_dataset(train);
  const double y_mean = train.y.mean();
  const FittedPredictor model =
      manual_predictor(d, Eigen::MatrixXd::Identity(d, d), centered.x,
                       train.y.array() - y_mean, mean, y_mean, bandwidth);

  for (std::int64_t a = 3; a <= 22; a += 4) {
    const Site target({a, 13});
    const double reduced = predict_site(model, field, field.region, target);
    const double baseline = baseline_full_kernel_predict(field, field.region, d, spec, target);
    CHECK(std::abs(reduced - baseline) <= 1e-10);
  }
}

TEST_CASE("baseline on a constant field returns the constant") {
  LatticeRegion region({8, 8});
  const ScalarField field(region, std::vector<double>(64, 4.25));
  EstimatorSpec spec = default_spec();
  const double with_auto =
      baseline_full_kernel_predict(field, region, 4, spec, Site({4, 4}));
  CHECK(with_auto == doctest::Approx(4.25).epsilon(1e-12));
  spec.h_scale = 1.0;
  const double with_scale =
      baseline_full_kernel_predict(field, region, 4, spec, Site({4, 4}));
  CHECK(with_scale == doctest::Approx(4.25).epsilon(1e-12));
}

TEST_CASE("fit with automatic neighbor count uses the scan") {
  const ScalarField field = generate_field(FieldSpec::white_noise({30, 30}, 17));
  NeighborScanConfig scan;
  scan.delta = 0.1;
  scan.d_max = 5;
  const FittedPredictor model =
      fit(field, field.region, std::nullopt, default_spec(), DimensionRule::exact(1), scan);
  CHECK(model.d == estimate_neighbor_count(field, field.region, scan, default_spec().kernel).d);
}
