#ifndef SIR_KERNELS_HPP
#define SIR_KERNELS_HPP

#include <string>
#include <vector>

#include "sir/errors.hpp"

namespace sir {

enum class KernelId { epanechnikov, quartic, fourth_order_polynomial };

KernelId kernel_id_from_string(const std::string& name);
std::string kernel_id_to_string(KernelId id);

// Compactly supported polynomial kernel on [-1, 1]. Evaluation outside the
// support is exactly zero. Stored as coefficients of even powers of u.
class Kernel {
 public:
  double operator()(double u) const {
    const double u2 = u * u;
    if (u2 > 1.0) return 0.0;
    double acc = 0.0;
    for (std::size_t j = even_coeffs_.size(); j > 0; --j) acc = acc * u2 + even_coeffs_[j - 1];
    return acc;
  }

  KernelId id() const { return id_; }
  int order() const { return order_; }
  double support_radius() const { return 1.0; }

 private:
  friend struct KernelConfig;
  Kernel(KernelId id, int order, std::vector<double> even_coeffs)
      : id_(id), order_(order), even_coeffs_(std::move(even_coeffs)) {}

  KernelId id_;
  int order_;
  std::vector<double> even_coeffs_;  // c0 + c1 u^2 + c2 u^4 + ...
};

// Fixed 1e4-interval Simpson quadrature of u^j K(u) over the support.
double kernel_moment(const Kernel& kernel, int j);

// Max finite-difference slope of K over a fine grid on [-1-eps, 1+eps].
double kernel_lipschitz_bound(const Kernel& kernel);

// Validated kernel of a known order. Construction checks unit integral,
// vanishing moments 1..order-1, a nonzero order-th moment, and a finite
// Lipschitz bound; failures throw InvalidConfig.
struct KernelConfig {
  KernelId id;
  int order;
  Kernel kernel;

  static KernelConfig make(KernelId id);
};

}  // namespace sir

#endif  // SIR_KERNELS_HPP
