#include "sir/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace sir {

KernelId kernel_id_from_string(const std::string& name) {
  if (name == "epanechnikov") return KernelId::epanechnikov;
  if (name == "quartic") return KernelId::quartic;
  if (name == "fourth-order-polynomial") return KernelId::fourth_order_polynomial;
  throw_error(ErrorCode::InvalidConfig, "unknown kernel '" + name + "'");
}

std::string kernel_id_to_string(KernelId id) {
  switch (id) {
    case KernelId::epanechnikov: return "epanechnikov";
    case KernelId::quartic: return "quartic";
    case KernelId::fourth_order_polynomial: return "fourth-order-polynomial";
  }
  return "unknown";
}

namespace {

constexpr int kQuadratureIntervals = 10000;

template <typename F>
double simpson(F f, double lo, double hi, int intervals) {
  const double step = (hi - lo) / intervals;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) acc += f(lo + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * step / 3.0;
}

// Coefficients for the order-4 kernel (1-u^2)(a + b u^2), solved from the
// unit-integral and vanishing-second-moment conditions. Basis moments come
// from the same quadrature used to validate the result.
std::vector<double> solve_fourth_order_coeffs() {
  auto basis0 = [](double u) { return 1.0 - u * u; };
  auto basis1 = [](double u) { return u * u * (1.0 - u * u); };
  Eigen::Matrix2d m;
  m(0, 0) = simpson(basis0, -1.0, 1.0, kQuadratureIntervals);
  m(0, 1) = simpson(basis1, -1.0, 1.0, kQuadratureIntervals);
  m(1, 0) = simpson([&](double u) { return u * u * basis0(u); }, -1.0, 1.0, kQuadratureIntervals);
  m(1, 1) = simpson([&](double u) { return u * u * basis1(u); }, -1.0, 1.0, kQuadratureIntervals);
  const Eigen::Vector2d ab = m.fullPivLu().solve(Eigen::Vector2d(1.0, 0.0));
  // (1-u^2)(a + b u^2) = a + (b-a) u^2 - b u^4
  return {ab[0], ab[1] - ab[0], -ab[1]};
}

}  // namespace

double kernel_moment(const Kernel& kernel, int j) {
  return simpson([&](double u) { return std::pow(u, j) * kernel(u); }, -1.0, 1.0,
                 kQuadratureIntervals);
}

double kernel_lipschitz_bound(const Kernel& kernel) {
  const int points = 10000;
  const double lo = -1.01, hi = 1.01;
  const double step = (hi - lo) / points;
  double bound = 0.0;
  double prev = kernel(lo);
  for (int i = 1; i <= points; ++i) {
    const double cur = kernel(lo + i * step);
    bound = std::max(bound, std::abs(cur - prev) / step);
    prev = cur;
  }
  return bound;
}

KernelConfig KernelConfig::make(KernelId id) {
  int order = 2;
  std::vector<double> coeffs;
  switch (id) {
    case KernelId::epanechnikov:
      coeffs = {0.75, -0.75};
      break;
    case KernelId::quartic:
      coeffs = {15.0 / 16.0, -30.0 / 16.0, 15.0 / 16.0};
      break;
    case KernelId::fourth_order_polynomial:
      order = 4;
      coeffs = solve_fourth_order_coeffs();
      break;
  }
  Kernel kernel(id, order, std::move(coeffs));

  if (std::abs(kernel_moment(kernel, 0) - 1.0) > 1e-8)
    throw_error(ErrorCode::InvalidConfig, "kernel does not integrate to 1");
  for (int j = 1; j < order; ++j) {
    if (std::abs(kernel_moment(kernel, j)) > 1e-8)
      throw_error(ErrorCode::InvalidConfig,
                  "kernel moment " + std::to_string(j) + " does not vanish");
  }
  if (std::abs(kernel_moment(kernel, order)) <= 1e-8)
    throw_error(ErrorCode::InvalidConfig, "kernel order-defining moment vanishes");
  if (kernel_lipschitz_bound(kernel) > 64.0)
    throw_error(ErrorCode::InvalidConfig, "kernel violates the Lipschitz bound");

  return KernelConfig{id, order, kernel};
}

}  // namespace sir
