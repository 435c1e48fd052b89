// Acceptance suite: one line per criterion, nonzero exit when any fails.
// argv[1]: path to the CLI binary (for the end-to-end determinism checks)
// argv[2]: source directory (for the committed recovery expectations file)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "sir/bench.hpp"
#include "sir/csv_io.hpp"
#include "sir/edr.hpp"
#include "sir/fieldsim.hpp"
#include "sir/predictor.hpp"
#include "sir/rng.hpp"

using namespace sir;

namespace {

int g_failures = 0;
std::string g_cli;
std::string g_source_dir;
std::string g_work_dir;

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double run_timed(const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SingleIndexSpec acceptance_model(int d, LinkKind link, double sigma_eps,
                                 std::vector<std::int64_t> dims) {
  SingleIndexSpec spec;
  spec.dims = std::move(dims);
  spec.d = d;
  spec.beta = Eigen::VectorXd::Zero(d);
  spec.beta[0] = 1.0;
  spec.link = link;
  spec.sigma_eps = sigma_eps;
  return spec;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// --- C1: kernel estimators agree with naive double-loop summation. ---------
void criterion_1() {
  bool pass = true;
  double worst = 0.0;
  const double elapsed = run_timed([&] {
    Rng rng(1001);
    Eigen::MatrixXd x(1000, 3);
    Eigen::VectorXd y(1000);
    for (int i = 0; i < 1000; ++i) {
      for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
      y[i] = rng.normal();
    }
    const RegressionDataset data = make_dataset(x, y);
    const Kernel& kernel = KernelConfig::make(KernelId::epanechnikov).kernel;
    const double h = 0.3;

    for (int g = 0; g < 50; ++g) {
      const double yq = -2.5 + 5.0 * g / 49.0;
      double naive = 0.0;
      for (std::int64_t i = 0; i < 1000; ++i) naive += kernel((yq - data.y[i]) / h);
      naive /= 1000.0 * h;
      worst = std::max(worst, std::abs(density_at(data, kernel, h, yq) - naive));

      Eigen::VectorXd naive_num = Eigen::VectorXd::Zero(3);
      for (std::int64_t i = 0; i < 1000; ++i)
        naive_num += kernel((yq - data.y[i]) / h) * data.x.row(i).transpose();
      naive_num /= 1000.0 * h;
      worst = std::max(
          worst, (numerator_at(data, kernel, h, yq) - naive_num).cwiseAbs().maxCoeff());
    }

    for (int g = 0; g < 50; ++g) {
      Eigen::VectorXd query(3);
      for (int j = 0; j < 3; ++j) query[j] = rng.normal();
      double sw = 0.0, swy = 0.0;
      for (std::int64_t i = 0; i < 1000; ++i) {
        double w = 1.0;
        for (int j = 0; j < 3; ++j) w *= kernel((query[j] - data.x(i, j)) / 0.8);
        sw += w;
        swy += w * data.y[i];
      }
      const double naive_nw = sw == 0.0 ? data.y.mean() : swy / sw;
      worst = std::max(worst, std::abs(scalar_kernel_regression(data.x, data.y, kernel, 0.8,
                                                                query) -
                                       naive_nw));
    }
    pass = worst <= 1e-12;
  });
  pass = pass && elapsed < 5.0;
  report("C1 kernel-oracle-equivalence", pass,
         "max deviation " + fmt(worst) + " (limit 1e-12), " + fmt(elapsed) + " s");
}

// --- C2: kernel validity by quadrature. -------------------------------------
void criterion_2() {
  bool pass = true;
  std::string detail;
  const double elapsed = run_timed([&] {
    for (KernelId id :
         {KernelId::epanechnikov, KernelId::quartic, KernelId::fourth_order_polynomial}) {
      const KernelConfig config = KernelConfig::make(id);
      const double unit_gap = std::abs(kernel_moment(config.kernel, 0) - 1.0);
      pass = pass && unit_gap <= 1e-8;
      for (int j = 1; j < config.order; ++j)
        pass = pass && std::abs(kernel_moment(config.kernel, j)) <= 1e-8;
      pass = pass && config.kernel(1.0 + 1e-12) == 0.0 && config.kernel(-5.0) == 0.0;
      detail += kernel_id_to_string(id) + " ok; ";
    }
  });
  pass = pass && elapsed < 1.0;
  report("C2 kernel-validity", pass, detail + fmt(elapsed) + " s");
}

// --- C3: covariance estimator hits the closed-form target. ------------------
void criterion_3() {
  std::vector<double> errors;
  const double elapsed = run_timed([&] {
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(3, 3);
    target(0, 0) = 0.5;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      SingleIndexSpec spec = acceptance_model(3, LinkKind::identity, 1.0, {50, 50});
      spec.seed = derive_seed(42, seed);
      const RegressionDataset data = generate_single_index(spec);
      auto [centered, mean] = center_dataset(data);
      const EstimatorConfig config = EstimatorSpec::defaults().resolve(centered);
      errors.push_back((inverse_regression_covariance(centered, config) - target).norm());
    }
  });
  const double median = median_of(errors);
  const bool pass = median <= 0.2 && elapsed < 60.0;
  report("C3 sigma-e-correctness", pass,
         "median Frobenius error " + fmt(median) + " (limit 0.2), " + fmt(elapsed) + " s");
}

// --- C4: convergence-rate slope. --------------------------------------------
void criterion_4() {
  double slope = 0.0;
  const double elapsed = run_timed([&] {
    const SingleIndexSpec model = acceptance_model(3, LinkKind::identity, 1.0, {20, 20});
    RateSchedule schedule;
    const RateReport report_data =
        run_rate_experiment(model, {{20, 20}, {30, 30}, {40, 40}, {60, 60}}, 10,
                            EstimatorSpec::defaults(), schedule, 42, 1000000);
    slope = report_data.slope;
  });
  const bool pass = slope >= -0.75 && slope <= -0.30 && elapsed < 600.0;
  report("C4 rate-slope", pass,
         "slope " + fmt(slope) + " (window [-0.75, -0.30]), " + fmt(elapsed) + " s");
}

// --- C5: CLT fluctuation scaling. --------------------------------------------
void criterion_5() {
  double ratio = 0.0;
  const double elapsed = run_timed([&] {
    const SingleIndexSpec model = acceptance_model(3, LinkKind::identity, 1.0, {30, 30});
    const CltSummary summary =
        run_clt_check(model, {30, 30}, 200, EstimatorSpec::defaults(), 42, 1000000);
    ratio = summary.std_ratio(0, 0);
  });
  const bool pass = ratio >= 0.6 && ratio <= 1.6 && elapsed < 600.0;
  report("C5 clt-scaling", pass,
         "std ratio at (1,1): " + fmt(ratio) + " (window [0.6, 1.6]), " + fmt(elapsed) + " s");
}

// --- C6: direction recovery against the committed pilot. --------------------
void criterion_6() {
  double median_identity = 0.0, median_cubic = 0.0;
  bool pilot_ok = false;
  std::string pilot_note;
  const double elapsed = run_timed([&] {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(5);
    beta[0] = 1.0;
    const EdrSweepReport sweep =
        run_edr_recovery({LinkKind::identity, LinkKind::cubic}, {0.5}, {{50, 50}}, 10, 5, beta,
                         0.0, EstimatorSpec::defaults(), 42);
    for (const auto& cell : sweep.cells) {
      if (cell.link == LinkKind::identity) median_identity = cell.median;
      if (cell.link == LinkKind::cubic) median_cubic = cell.median;
    }
    // Cross-check against the pilot expectations committed with the repo.
    std::ifstream pilot_file(g_source_dir + "/tests/data/edr_pilot.json");
    if (pilot_file.good()) {
      const nlohmann::json pilot = nlohmann::json::parse(pilot_file);
      const double pilot_identity = pilot.at("identity_median");
      const double pilot_cubic = pilot.at("cubic_median");
      pilot_ok = std::abs(pilot_identity - median_identity) <= 0.02 &&
                 std::abs(pilot_cubic - median_cubic) <= 0.02;
      pilot_note = " pilot(" + fmt(pilot_identity) + "," + fmt(pilot_cubic) + ")";
    } else {
      pilot_note = " pilot file missing";
    }
  });
  const bool pass = median_identity <= 0.15 && median_cubic <= 0.25 && pilot_ok && elapsed < 120.0;
  report("C6 edr-recovery", pass,
         "medians identity " + fmt(median_identity) + " (limit 0.15), cubic " + fmt(median_cubic) +
             " (limit 0.25)," + pilot_note + ", " + fmt(elapsed) + " s");
}

// --- C7: affine equivariance of the estimated span. --------------------------
void criterion_7() {
  double worst = 0.0;
  const double elapsed = run_timed([&] {
    SingleIndexSpec spec = acceptance_model(4, LinkKind::identity, 0.5, {50, 50});
    spec.seed = 4242;
    const RegressionDataset data = generate_single_index(spec);

    const auto pipeline = [&](const RegressionDataset& input) {
      auto [centered, mean] = center_dataset(input);
      const EstimatorConfig config = EstimatorSpec::defaults().resolve(centered);
      const CovariancePair pair =
          CovariancePair::make(empirical_covariance(centered),
                               inverse_regression_covariance(centered, config), centered.size());
      return edr_directions(pair, DimensionRule::exact(1));
    };
    const EdrModel base = pipeline(data);

    Rng rng(777);
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::MatrixXd g(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = rng.normal();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Eigen::VectorXd sv(4);
      for (int j = 0; j < 4; ++j) sv[j] = 0.6 + 1.8 * j;  // condition number 10
      const Eigen::MatrixXd transform =
          svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();

      const RegressionDataset mapped = make_dataset(data.x * transform.transpose(), data.y);
      const EdrModel moved = pipeline(mapped);
      const Eigen::MatrixXd expected =
          (transform.inverse().transpose() * base.directions.transpose()).transpose();
      worst = std::max(worst, subspace_distance(moved.directions, expected));
    }
  });
  const bool pass = worst <= 1e-6 && elapsed < 10.0;
  report("C7 affine-equivariance", pass,
         "max span distance " + fmt(worst) + " (limit 1e-6), " + fmt(elapsed) + " s");
}

// --- C8: neighbor-count scan. -------------------------------------------------
void criterion_8() {
  int white_ones = 0, ma_triggers = 0;
  const double elapsed = run_timed([&] {
    NeighborScanConfig config;
    config.delta = 0.1;
    config.d_max = 6;
    const KernelConfig kernel = KernelConfig::make(KernelId::epanechnikov);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ScalarField noise =
          generate_field(FieldSpec::white_noise({40, 40}, derive_seed(8, seed)));
      const NeighborScanResult result =
          estimate_neighbor_count(noise, noise.region, config, kernel);
      if (result.d == 1 && !result.cap_reached) ++white_ones;

      const ScalarField window =
          generate_field(FieldSpec::axial_cross({40, 40}, 1.0, 1.0, derive_seed(9, seed)));
      const NeighborScanResult ma =
          estimate_neighbor_count(window, window.region, config, kernel);
      if (!ma.steps.empty() && ma.steps[0].statistic > config.delta) ++ma_triggers;
    }
  });
  const bool pass = white_ones >= 9 && ma_triggers >= 9 && elapsed < 60.0;
  report("C8 neighbor-scan", pass,
         "white-noise d=1 in " + std::to_string(white_ones) + "/10, window stat>delta at k=1 in " +
             std::to_string(ma_triggers) + "/10, " + fmt(elapsed) + " s");
}

// --- C9: predictor sanity on the equal-weights window field. -----------------
void criterion_9() {
  int beats_mean = 0;
  double worst_gap = 0.0;
  const double elapsed = run_timed([&] {
    const FieldSpec field_template = FieldSpec::axial_cross({50, 50}, 1.0, 1.0, 0);
    const PredictorBenchReport bench = run_predictor_benchmark(
        field_template, 4, EstimatorSpec::defaults(), DimensionRule::exact(1), 10, 4242);
    for (const auto& row : bench.rows) {
      if (row.mse_reduced < row.mse_mean) ++beats_mean;
    }

    // d=1: the reduced predictor and the full-dimensional baseline coincide.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      FieldSpec spec = field_template;
      spec.seed = derive_seed(99, seed);
      const ScalarField field = generate_field(spec);
      const RegressionDataset all = build_associated_process(field, 1, field.region);
      auto [train, test] = checkerboard_split(all);
      const FittedPredictor fitted =
          fit_dataset(train, EstimatorSpec::defaults(), DimensionRule::exact(1));
      for (std::int64_t i = 0; i < test.size(); ++i) {
        const Eigen::VectorXd x_raw = test.x.row(i).transpose();
        const double reduced = predict_vector(fitted, x_raw);
        const double baseline =
            baseline_predict_dataset(train, EstimatorSpec::defaults(), x_raw);
        worst_gap = std::max(worst_gap, std::abs(reduced - baseline));
      }
    }
  });
  const bool pass = beats_mean == 10 && worst_gap <= 1e-10 && elapsed < 120.0;
  report("C9 predictor-sanity", pass,
         "beats mean " + std::to_string(beats_mean) + "/10, max d=1 gap " + fmt(worst_gap) +
             " (limit 1e-10), " + fmt(elapsed) + " s");
}

// --- C10: CLI determinism. -----------------------------------------------------
int run_cli(const std::string& args) {
  const std::string command = g_cli + " " + args + " >/dev/null 2>/dev/null";
  return WEXITSTATUS(std::system(command.c_str()));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return "<unreadable:" + path + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

void criterion_10() {
  int checked = 0, identical = 0;
  std::string failed_cmd;
  const double elapsed = run_timed([&] {
    const std::string dir = g_work_dir;
    write_file(dir + "/rate.cfg",
               "model.d = 2\nsizes = 10x10,15x15,20x20\nreplicates = 5\n"
               "oracle.replicates = 20000\n");
    write_file(dir + "/clt.cfg",
               "model.d = 2\nsizes = 12x12\nreplicates = 100\noracle.replicates = 20000\n");
    write_file(dir + "/sweep.cfg",
               "model.d = 3\nsweep.links = identity\nsweep.sigmas = 0.5\nsizes = 20x20\n"
               "bench.seeds = 3\n");
    write_file(dir + "/pbench.cfg",
               "sim.kind = moving-average\nsim.dims = 20x20\nma.radius = 1\n"
               "ma.weights = cross:1,1\nd = 4\nbench.seeds = 3\nedr.d = 1\n");
    write_file(dir + "/targets.csv", "i1,i2\n10,10\n11,12\n");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"simulate --kind white-noise --dims 15x15 --seed 7 --out OUT", "field.csv"},
        {"simulate --kind single-index --dims 15x15 --seed 7 --out OUT", "data.csv"},
        {"sir-fit --data " + dir + "/data.csv --out OUT", "fit.json"},
        {"neighbor-scan --field " + dir + "/field.csv --delta 0.1 --dmax 4 --out OUT",
         "scan.json"},
        {"predict --field " + dir + "/field.csv --targets " + dir +
             "/targets.csv --d 2 --out OUT",
         "pred.csv"},
        {"rate-bench --config " + dir + "/rate.cfg --seed 5 --out OUT", "rate.json"},
        {"clt-check --config " + dir + "/clt.cfg --seed 5 --out OUT", "clt.json"},
        {"edr-sweep --config " + dir + "/sweep.cfg --seed 5 --out OUT", "sweep.json"},
        {"predictor-bench --config " + dir + "/pbench.cfg --seed 5 --out OUT", "pbench.json"},
    };

    for (const auto& [command_template, out_name] : commands) {
      ++checked;
      const std::string out1 = dir + "/run1_" + out_name;
      const std::string out2 = dir + "/run2_" + out_name;
      std::string cmd1 = command_template, cmd2 = command_template;
      cmd1.replace(cmd1.find("OUT"), 3, out1);
      cmd2.replace(cmd2.find("OUT"), 3, out2);
      // The first simulate outputs feed later commands: keep canonical names.
      if (run_cli(cmd1) != 0 || run_cli(cmd2) != 0) {
        failed_cmd = command_template + " (nonzero exit)";
        continue;
      }
      if (out_name == "field.csv" || out_name == "data.csv") {
        write_file(dir + "/" + out_name, slurp(out1));
      }
      if (slurp(out1) == slurp(out2)) {
        ++identical;
      } else if (failed_cmd.empty()) {
        failed_cmd = command_template;
      }
    }
  });
  const bool pass = checked == 9 && identical == 9;
  report("C10 cli-determinism", pass,
         std::to_string(identical) + "/" + std::to_string(checked) + " subcommands bit-identical" +
             (failed_cmd.empty() ? "" : " (first failure: " + failed_cmd + ")") + ", " +
             fmt(elapsed) + " s");
}

}  // namespace

int main(int argc, char** argv) {
  g_cli = argc > 1 ? argv[1] : "";
  g_source_dir = argc > 2 ? argv[2] : ".";
  g_work_dir = "/tmp/sir_acceptance_" + std::to_string(::getpid());
  const std::string mkdir = "mkdir -p " + g_work_dir;
  if (std::system(mkdir.c_str()) != 0) return 1;

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (!g_cli.empty()) {
    criterion_10();
  } else {
    report("C10 cli-determinism", false, "no CLI path given");
  }

  const std::string cleanup = "rm -rf " + g_work_dir;
  const int cleanup_rc = std::system(cleanup.c_str());
  (void)cleanup_rc;
  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
