#include "pivotal/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pivotal {

namespace {

std::vector<std::vector<double>> read_rows(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool skip = header;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (skip) {
      skip = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t begin = cell.find_first_not_of(" \t");
      if (begin == std::string::npos) {
        throw DataError("empty cell in " + path);
      }
      std::size_t end = cell.find_last_not_of(" \t");
      double value = 0.0;
      auto res = std::from_chars(cell.data() + begin, cell.data() + end + 1, value);
      if (res.ec != std::errc() || res.ptr != cell.data() + end + 1) {
        throw DataError("malformed numeric cell '" + cell + "' in " + path);
      }
      row.push_back(value);
    }
    if (row.empty()) continue;
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw DataError("ragged rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("no data rows in " + path);
  return rows;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path, bool header) {
  auto rows = read_rows(path, header);
  Matrix X(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      X(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  return X;
}

Vector read_csv_column(const std::string& path, bool header) {
  auto rows = read_rows(path, header);
  if (rows[0].size() != 1) {
    throw DataError("expected a single-column file: " + path);
  }
  Vector y(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) y[static_cast<int>(i)] = rows[i][0];
  return y;
}

Dataset dataset_from_csv(const std::string& path, int response_col, bool header) {
  Matrix all = read_csv_matrix(path, header);
  const int cols = static_cast<int>(all.cols());
  if (response_col < 0 || response_col >= cols) {
    throw UsageError("response column out of range");
  }
  if (cols < 2) throw DataError("need at least one covariate beside the response");
  Matrix X(all.rows(), cols - 1);
  int out = 0;
  for (int j = 0; j < cols; ++j) {
    if (j == response_col) continue;
    X.col(out++) = all.col(j);
  }
  return Dataset(std::move(X), all.col(response_col));
}

Dataset dataset_from_csv(const std::string& design_path,
                         const std::string& response_path, bool header) {
  Matrix X = read_csv_matrix(design_path, header);
  Vector y = read_csv_column(response_path, header);
  return Dataset(std::move(X), std::move(y));
}

}  // namespace pivotal
