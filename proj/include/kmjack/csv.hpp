#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kmjack/km.hpp"
#include "kmjack/matrix.hpp"

namespace kmjack {

// A parsed dataset file: observations plus optional covariate columns, in
// file order (not yet sorted).
struct Dataset {
  std::vector<Observation> observations;
  Matrix covariates;  // empty when the file has only time,status
};

// Reads `time,status` or `x1,..,xp,time,status` CSV. Parse failures report
// the offending line number.
Dataset read_dataset_csv(const std::string& path);

// Joint ordering of observations and covariate rows.
std::pair<OrderedSample, Matrix> order_dataset(const Dataset& d);

// Locale-independent shortest-round-trip formatting used for all CSV output.
std::string format_double(double v);

// Generic CSV reader for the emitted tables: returns header + string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace kmjack
