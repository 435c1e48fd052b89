#include "sir/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sir {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw_error(ErrorCode::IoError, "bad numeric field '" + s + "' in " + path);
  }
}

std::int64_t parse_int(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw_error(ErrorCode::IoError, "bad integer field '" + s + "' in " + path);
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

int count_coord_columns(const std::vector<std::string>& header, const std::string& last_name,
                        const std::string& path) {
  if (header.size() < 2 || header.back() != last_name)
    throw_error(ErrorCode::IoError, "expected header ending in '" + last_name + "' in " + path);
  for (std::size_t k = 0; k + 1 < header.size(); ++k) {
    if (header[k] != "i" + std::to_string(k + 1))
      throw_error(ErrorCode::IoError, "unexpected header column '" + header[k] + "' in " + path);
  }
  return static_cast<int>(header.size()) - 1;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const ScalarField& field, const std::string& path) {
  std::ostringstream out;
  const int n_dims = field.region.dim();
  for (int k = 1; k <= n_dims; ++k) out << "i" << k << ",";
  out << "value\n";
  for (std::int64_t m = 0; m < field.region.size(); ++m) {
    const Site site = field.region.site_at(m);
    for (int k = 0; k < n_dims; ++k) out << site.coords[k] << ",";
    out << format_number(field.values[m]) << "\n";
  }
  write_text_file(path, out.str());
}

ScalarField read_field_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw_error(ErrorCode::IoError, "empty file " + path);
  const int n_dims = count_coord_columns(split_line(lines[0]), "value", path);

  std::vector<Site> sites;
  std::vector<double> values;
  sites.reserve(lines.size() - 1);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::vector<std::string> fields = split_line(lines[row]);
    if (static_cast<int>(fields.size()) != n_dims + 1)
      throw_error(ErrorCode::IoError, "bad column count in " + path);
    Site site;
    site.coords.resize(n_dims);
    for (int k = 0; k < n_dims; ++k) site.coords[k] = parse_int(fields[k], path);
    sites.push_back(std::move(site));
    values.push_back(parse_double(fields[n_dims], path));
  }
  if (sites.empty()) throw_error(ErrorCode::IoError, "no data rows in " + path);

  std::vector<std::int64_t> lo = sites[0].coords;
  std::vector<std::int64_t> hi = sites[0].coords;
  for (const Site& s : sites) {
    for (int k = 0; k < n_dims; ++k) {
      lo[k] = std::min(lo[k], s.coords[k]);
      hi[k] = std::max(hi[k], s.coords[k]);
    }
  }
  std::vector<std::int64_t> dims(n_dims);
  for (int k = 0; k < n_dims; ++k) dims[k] = hi[k] - lo[k] + 1;
  LatticeRegion region(lo, dims);
  if (region.size() != static_cast<std::int64_t>(sites.size()))
    throw_error(ErrorCode::IoError, "rows do not form a complete rectangular region in " + path);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (region.flat_index(sites[i]) != static_cast<std::int64_t>(i))
      throw_error(ErrorCode::IoError, "rows are not in lexicographic site order in " + path);
  }
  return ScalarField(std::move(region), std::move(values));
}

void write_dataset_csv(const RegressionDataset& data, const std::string& path) {
  std::ostringstream out;
  for (int k = 1; k <= data.dim(); ++k) out << "x" << k << ",";
  out << "y\n";
  for (std::int64_t i = 0; i < data.size(); ++i) {
    for (int k = 0; k < data.dim(); ++k) out << format_number(data.x(i, k)) << ",";
    out << format_number(data.y[i]) << "\n";
  }
  write_text_file(path, out.str());
}

RegressionDataset read_dataset_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw_error(ErrorCode::IoError, "empty file " + path);
  const std::vector<std::string> header = split_line(lines[0]);
  if (header.size() < 2 || header.back() != "y")
    throw_error(ErrorCode::IoError, "expected header ending in 'y' in " + path);
  const int d = static_cast<int>(header.size()) - 1;
  for (int k = 0; k < d; ++k) {
    if (header[k] != "x" + std::to_string(k + 1))
      throw_error(ErrorCode::IoError, "unexpected header column '" + header[k] + "' in " + path);
  }
  const std::int64_t n = static_cast<std::int64_t>(lines.size()) - 1;
  if (n == 0) throw_error(ErrorCode::EmptyDataset, "no data rows in " + path);
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::vector<std::string> fields = split_line(lines[static_cast<std::size_t>(i) + 1]);
    if (static_cast<int>(fields.size()) != d + 1)
      throw_error(ErrorCode::IoError, "bad column count in " + path);
    for (int k = 0; k < d; ++k) x(i, k) = parse_double(fields[k], path);
    y[i] = parse_double(fields[d], path);
  }
  return make_dataset(std::move(x), std::move(y));
}

std::vector<Site> read_sites_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw_error(ErrorCode::IoError, "empty file " + path);
  const std::vector<std::string> header = split_line(lines[0]);
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] != "i" + std::to_string(k + 1))
      throw_error(ErrorCode::IoError, "unexpected header column '" + header[k] + "' in " + path);
  }
  const int n_dims = static_cast<int>(header.size());
  std::vector<Site> sites;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::vector<std::string> fields = split_line(lines[row]);
    if (static_cast<int>(fields.size()) != n_dims)
      throw_error(ErrorCode::IoError, "bad column count in " + path);
    Site site;
    site.coords.resize(n_dims);
    for (int k = 0; k < n_dims; ++k) site.coords[k] = parse_int(fields[k], path);
    sites.push_back(std::move(site));
  }
  return sites;
}

void write_predictions_csv(const std::vector<Site>& sites,
                           const std::vector<double>& predictions,
                           const std::string& path) {
  if (sites.size() != predictions.size())
    throw_error(ErrorCode::InvalidConfig, "site/prediction count mismatch");
  std::ostringstream out;
  const int n_dims = sites.empty() ? 0 : sites[0].dim();
  for (int k = 1; k <= n_dims; ++k) out << "i" << k << ",";
  out << "prediction\n";
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (int k = 0; k < n_dims; ++k) out << sites[i].coords[k] << ",";
    out << format_number(predictions[i]) << "\n";
  }
  write_text_file(path, out.str());
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorCode::IoError, "cannot write " + path);
  out << contents;
  if (!out) throw_error(ErrorCode::IoError, "short write to " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sir
