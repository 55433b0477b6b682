#pragma once

#include <string>
#include <vector>

#include "pivotal/types.hpp"

namespace pivotal {

/// Rows are observations, columns are covariates; '.' decimal point.
Matrix read_csv_matrix(const std::string& path, bool header);

Vector read_csv_column(const std::string& path, bool header);

/// Response taken from column `response_col` (0-based), remaining columns
/// form the design.
Dataset dataset_from_csv(const std::string& path, int response_col, bool header);

Dataset dataset_from_csv(const std::string& design_path,
                         const std::string& response_path, bool header);

}  // namespace pivotal
