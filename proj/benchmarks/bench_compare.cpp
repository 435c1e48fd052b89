// Timing comparison between the OpenMP kernels and their serial reference
// paths. Build and run:
//   cmake --build build --target bench_compare && ./build/benchmarks/bench_compare

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <functional>

#include "sir/edr.hpp"
#include "sir/fieldsim.hpp"
#include "sir/predictor.hpp"

using namespace sir;

namespace {

double best_of(int repeats, const std::function<void()>& body) {
  double best = 1e18;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed < best) best = elapsed;
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-38s %10.4f s %10.4f s %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns run the same serial code\n");
#endif
  std::printf("%-38s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  for (std::int64_t side : {30, 50, 60}) {
    SingleIndexSpec spec;
    spec.dims = {side, side};
    spec.d = 3;
    spec.beta = Eigen::VectorXd::Zero(3);
    spec.beta[0] = 1.0;
    spec.sigma_eps = 1.0;
    spec.seed = 7;
    const RegressionDataset data = generate_single_index(spec);
    auto [centered, mean] = center_dataset(data);
    const EstimatorConfig config = EstimatorSpec::defaults().resolve(centered);

    char name[64];
    std::snprintf(name, sizeof(name), "inverse_regression_covariance %lldx%lld",
                  static_cast<long long>(side), static_cast<long long>(side));
    Eigen::MatrixXd sink;
    const double serial =
        best_of(3, [&] { sink = inverse_regression_covariance_serial(centered, config); });
    const double parallel =
        best_of(3, [&] { sink = inverse_regression_covariance(centered, config); });
    row(name, serial, parallel);
  }

  {
    SingleIndexSpec spec;
    spec.dims = {50, 50};
    spec.d = 3;
    spec.beta = Eigen::VectorXd::Zero(3);
    spec.beta[0] = 1.0;
    spec.sigma_eps = 1.0;
    spec.seed = 11;
    const RegressionDataset data = generate_single_index(spec);
    const EstimatorConfig config = EstimatorSpec::defaults().resolve(data);
    std::vector<double> grid;
    for (int g = 0; g < 400; ++g) grid.push_back(-3.0 + 6.0 * g / 399.0);
    std::vector<InverseRegressionEval> sink;
    const double serial = best_of(3, [&] { sink = evaluate_on_grid_serial(data, config, grid); });
    const double parallel = best_of(3, [&] { sink = evaluate_on_grid(data, config, grid); });
    row("evaluate_on_grid 400pts n=2500", serial, parallel);
  }

  {
    const FieldSpec spec = FieldSpec::uniform_ball({400, 400}, 2, 3);
    ScalarField sink = generate_field(spec);
    const double serial = best_of(3, [&] { sink = generate_field_impl(spec, false); });
    const double parallel = best_of(3, [&] { sink = generate_field_impl(spec, true); });
    row("generate_field 400x400 radius 2", serial, parallel);
  }

  {
    const ScalarField field = generate_field(FieldSpec::axial_cross({50, 50}, 1.0, 1.0, 5));
    const FittedPredictor model =
        fit(field, field.region, 4, EstimatorSpec::defaults(), DimensionRule::exact(1));
    std::vector<Site> targets;
    for (std::int64_t a = 3; a <= 48; ++a)
      for (std::int64_t b = 3; b <= 48; b += 3) targets.push_back(Site({a, b}));
    std::vector<double> sink;
    const double serial =
        best_of(3, [&] { sink = predict_sites_serial(model, field, field.region, targets); });
    const double parallel =
        best_of(3, [&] { sink = predict_sites(model, field, field.region, targets); });
    row("predict_sites 736 targets", serial, parallel);
  }

  return 0;
}
