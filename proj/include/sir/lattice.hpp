#ifndef SIR_LATTICE_HPP
#define SIR_LATTICE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "sir/errors.hpp"

namespace sir {

// A lattice index i = (i_1, ..., i_N).
struct Site {
  std::vector<std::int64_t> coords;

  Site() = default;
  explicit Site(std::vector<std::int64_t> c) : coords(std::move(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }

  bool operator==(const Site& other) const { return coords == other.coords; }
  bool operator!=(const Site& other) const { return coords != other.coords; }
  // Lexicographic order; used for deterministic site enumeration.
  bool operator<(const Site& other) const { return coords < other.coords; }
};

// Rectangular index box: origin_k <= i_k <= origin_k + dims_k - 1 on each
// axis. The default origin is (1, ..., 1). Iteration order is lexicographic
// via site_at(0..size()-1).
class LatticeRegion {
 public:
  explicit LatticeRegion(std::vector<std::int64_t> dims);
  LatticeRegion(std::vector<std::int64_t> origin, std::vector<std::int64_t> dims);

  int dim() const { return static_cast<int>(dims_.size()); }
  std::int64_t size() const { return size_; }
  const std::vector<std::int64_t>& dims() const { return dims_; }
  const std::vector<std::int64_t>& origin() const { return origin_; }

  bool contains(const Site& site) const;
  bool contains(const LatticeRegion& other) const;

  Site site_at(std::int64_t flat) const;
  std::int64_t flat_index(const Site& site) const;  // throws OutOfRegion

 private:
  std::vector<std::int64_t> origin_;
  std::vector<std::int64_t> dims_;
  std::int64_t size_ = 0;
};

// Real-valued observation at every site of a region, stored in lexicographic
// site order.
struct ScalarField {
  LatticeRegion region;
  std::vector<double> values;

  ScalarField(LatticeRegion r, std::vector<double> v);

  double at(const Site& site) const { return values[region.flat_index(site)]; }
  double& at(const Site& site) { return values[region.flat_index(site)]; }
};

// Paired regression samples (X_i in R^d, Y_i in R) with the cached covariate
// mean. site_tags, when non-empty, records the originating site per sample.
struct RegressionDataset {
  Eigen::MatrixXd x;       // one row per sample
  Eigen::VectorXd y;
  Eigen::VectorXd mean_x;  // arithmetic mean of the rows of x
  std::vector<Site> site_tags;

  std::int64_t size() const { return x.rows(); }
  int dim() const { return static_cast<int>(x.cols()); }
};

RegressionDataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y,
                               std::vector<Site> site_tags = {});

// The `count` sites of `region` closest to `site` (excluding `site`), ordered
// by squared Euclidean distance with ties broken by lexicographic order on
// the coordinate offset vector.
std::vector<Site> neighbor_ordering(const Site& site, const LatticeRegion& region,
                                    std::int64_t count);

// The `count` nearest nonzero offsets of the full integer lattice, in the
// same (squared distance, lexicographic) order. This is the translation-
// invariant vicinity shape: site i's vicinity is i + offsets. For a site
// whose whole vicinity lies inside a region, neighbor_ordering over that
// region returns exactly these translates.
std::vector<std::vector<std::int64_t>> vicinity_offsets(int n_dims, std::int64_t count);

// Builds the regression process pairing each site's value with the values at
// its d nearest neighbors. Sites whose neighbor set leaves `observed` are
// dropped. Sample order is lexicographic in the site index.
RegressionDataset build_associated_process(const ScalarField& field, int d,
                                           const LatticeRegion& observed);

// Returns the dataset with the covariate mean removed, and the removed mean.
std::pair<RegressionDataset, Eigen::VectorXd> center_dataset(const RegressionDataset& data);

}  // namespace sir

#endif  // SIR_LATTICE_HPP
