#ifndef SIR_CSV_IO_HPP
#define SIR_CSV_IO_HPP

#include <string>
#include <vector>

#include "sir/lattice.hpp"

namespace sir {

// All writers emit numbers with %.17g so values round-trip exactly and
// re-runs produce byte-identical files.

std::string format_number(double v);

// Field CSV: header "i1,...,iN,value", one row per site, lexicographic order.
void write_field_csv(const ScalarField& field, const std::string& path);
ScalarField read_field_csv(const std::string& path);

// Dataset CSV: header "x1,...,xd,y".
void write_dataset_csv(const RegressionDataset& data, const std::string& path);
RegressionDataset read_dataset_csv(const std::string& path);

// Site list CSV: header "i1,...,iN".
std::vector<Site> read_sites_csv(const std::string& path);

// Predictions CSV: header "i1,...,iN,prediction".
void write_predictions_csv(const std::vector<Site>& sites,
                           const std::vector<double>& predictions,
                           const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace sir

#endif  // SIR_CSV_IO_HPP
