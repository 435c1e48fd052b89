#include "sir/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace sir {

namespace {

std::int64_t checked_volume(const std::vector<std::int64_t>& dims) {
  if (dims.empty()) throw_error(ErrorCode::EmptyRegion, "region needs at least one axis");
  std::int64_t n = 1;
  for (std::int64_t d : dims) {
    if (d <= 0) throw_error(ErrorCode::EmptyRegion, "region dims must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

LatticeRegion::LatticeRegion(std::vector<std::int64_t> dims)
    : origin_(dims.size(), 1), dims_(std::move(dims)) {
  size_ = checked_volume(dims_);
}

LatticeRegion::LatticeRegion(std::vector<std::int64_t> origin, std::vector<std::int64_t> dims)
    : origin_(std::move(origin)), dims_(std::move(dims)) {
  size_ = checked_volume(dims_);
  if (origin_.size() != dims_.size())
    throw_error(ErrorCode::InvalidConfig, "origin/dims dimension mismatch");
}

bool LatticeRegion::contains(const Site& site) const {
  if (site.dim() != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    const std::int64_t c = site.coords[k];
    if (c < origin_[k] || c >= origin_[k] + dims_[k]) return false;
  }
  return true;
}

bool LatticeRegion::contains(const LatticeRegion& other) const {
  if (other.dim() != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    if (other.origin_[k] < origin_[k]) return false;
    if (other.origin_[k] + other.dims_[k] > origin_[k] + dims_[k]) return false;
  }
  return true;
}

Site LatticeRegion::site_at(std::int64_t flat) const {
  Site site;
  site.coords.resize(dim());
  for (int k = dim() - 1; k >= 0; --k) {
    site.coords[k] = origin_[k] + flat % dims_[k];
    flat /= dims_[k];
  }
  return site;
}

std::int64_t LatticeRegion::flat_index(const Site& site) const {
  if (!contains(site)) throw_error(ErrorCode::OutOfRegion, "site outside region");
  std::int64_t flat = 0;
  for (int k = 0; k < dim(); ++k) flat = flat * dims_[k] + (site.coords[k] - origin_[k]);
  return flat;
}

ScalarField::ScalarField(LatticeRegion r, std::vector<double> v)
    : region(std::move(r)), values(std::move(v)) {
  if (static_cast<std::int64_t>(values.size()) != region.size())
    throw_error(ErrorCode::InvalidConfig, "field value count does not match region size");
}

RegressionDataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y,
                               std::vector<Site> site_tags) {
  if (x.rows() != y.size())
    throw_error(ErrorCode::InvalidConfig, "sample count mismatch between x and y");
  if (x.rows() == 0) throw_error(ErrorCode::EmptyDataset, "no samples");
  if (x.cols() < 1) throw_error(ErrorCode::InvalidConfig, "covariate dimension must be >= 1");
  if (!site_tags.empty() && static_cast<std::int64_t>(site_tags.size()) != x.rows())
    throw_error(ErrorCode::InvalidConfig, "site tag count mismatch");
  RegressionDataset data;
  data.mean_x = x.colwise().mean();
  data.x = std::move(x);
  data.y = std::move(y);
  data.site_tags = std::move(site_tags);
  return data;
}

namespace {

struct Offset {
  std::vector<std::int64_t> u;
  std::int64_t dist2;
};

// All nonzero offsets with max-norm <= radius, sorted by (squared distance,
// lexicographic offset). Any offset with Euclidean norm <= radius is inside
// the max-norm ball, so the prefix with dist2 <= radius^2 is complete.
std::vector<Offset> sorted_offsets(int n_dims, std::int64_t radius) {
  std::vector<Offset> offsets;
  std::vector<std::int64_t> u(n_dims, -radius);
  while (true) {
    std::int64_t dist2 = 0;
    bool zero = true;
    for (std::int64_t c : u) {
      dist2 += c * c;
      if (c != 0) zero = false;
    }
    if (!zero) offsets.push_back({u, dist2});
    int k = n_dims - 1;
    while (k >= 0 && u[k] == radius) {
      u[k] = -radius;
      --k;
    }
    if (k < 0) break;
    ++u[k];
  }
  std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.u < b.u;
  });
  return offsets;
}

}  // namespace

std::vector<Site> neighbor_ordering(const Site& site, const LatticeRegion& region,
                                    std::int64_t count) {
  if (!region.contains(site)) throw_error(ErrorCode::OutOfRegion, "site outside region");
  if (count < 1) throw_error(ErrorCode::InvalidConfig, "neighbor count must be positive");
  if (count >= region.size())
    throw_error(ErrorCode::InsufficientRegion, "neighbor count must be below region size");

  const int n_dims = region.dim();
  std::int64_t max_span = 0;
  for (std::int64_t d : region.dims()) max_span = std::max(max_span, d);

  std::int64_t radius = 1;
  while (true) {
    const std::vector<Offset> offsets = sorted_offsets(n_dims, radius);
    const std::int64_t safe_dist2 = radius * radius;
    const bool whole_region = radius >= max_span;
    std::vector<Site> result;
    result.reserve(count);
    for (const Offset& off : offsets) {
      if (!whole_region && off.dist2 > safe_dist2) break;
      Site candidate = site;
      for (int k = 0; k < n_dims; ++k) candidate.coords[k] += off.u[k];
      if (!region.contains(candidate)) continue;
      result.push_back(std::move(candidate));
      if (static_cast<std::int64_t>(result.size()) == count) return result;
    }
    radius *= 2;
  }
}

std::vector<std::vector<std::int64_t>> vicinity_offsets(int n_dims, std::int64_t count) {
  if (n_dims < 1) throw_error(ErrorCode::InvalidConfig, "need at least one dimension");
  if (count < 1) throw_error(ErrorCode::InvalidConfig, "neighbor count must be positive");
  std::int64_t radius = 1;
  while (true) {
    const std::vector<Offset> offsets = sorted_offsets(n_dims, radius);
    const std::int64_t safe_dist2 = radius * radius;
    std::vector<std::vector<std::int64_t>> result;
    result.reserve(count);
    for (const Offset& off : offsets) {
      if (off.dist2 > safe_dist2) break;
      result.push_back(off.u);
      if (static_cast<std::int64_t>(result.size()) == count) return result;
    }
    radius *= 2;
  }
}

RegressionDataset build_associated_process(const ScalarField& field, int d,
                                           const LatticeRegion& observed) {
  if (!field.region.contains(observed))
    throw_error(ErrorCode::OutOfRegion, "observed region not contained in field region");
  if (d < 1) throw_error(ErrorCode::InvalidConfig, "neighbor count must be >= 1");
  if (d >= observed.size())
    throw_error(ErrorCode::InsufficientRegion, "neighbor count must be below observed size");

  const auto offsets = vicinity_offsets(field.region.dim(), d);
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> responses;
  std::vector<Site> tags;
  Site neighbor;
  neighbor.coords.resize(field.region.dim());
  for (std::int64_t m = 0; m < observed.size(); ++m) {
    const Site site = observed.site_at(m);
    Eigen::VectorXd row(d);
    bool inside = true;
    for (int k = 0; k < d && inside; ++k) {
      for (int c = 0; c < field.region.dim(); ++c)
        neighbor.coords[c] = site.coords[c] + offsets[static_cast<std::size_t>(k)][c];
      if (!observed.contains(neighbor)) {
        inside = false;
      } else {
        row[k] = field.at(neighbor);
      }
    }
    if (!inside) continue;
    rows.push_back(std::move(row));
    responses.push_back(field.at(site));
    tags.push_back(site);
  }
  if (rows.empty())
    throw_error(ErrorCode::EmptyDataset, "every neighbor set crosses the observed boundary");

  Eigen::MatrixXd x(static_cast<std::int64_t>(rows.size()), d);
  Eigen::VectorXd y(static_cast<std::int64_t>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x.row(static_cast<std::int64_t>(i)) = rows[i];
    y[static_cast<std::int64_t>(i)] = responses[i];
  }
  return make_dataset(std::move(x), std::move(y), std::move(tags));
}

std::pair<RegressionDataset, Eigen::VectorXd> center_dataset(const RegressionDataset& data) {
  if (data.size() < 2) throw_error(ErrorCode::DegenerateDataset, "need at least 2 samples");
  const Eigen::VectorXd mean = data.mean_x;
  Eigen::MatrixXd x = data.x.rowwise() - mean.transpose();
  RegressionDataset centered = make_dataset(std::move(x), data.y, data.site_tags);
  return {std::move(centered), mean};
}

}  // namespace sir
