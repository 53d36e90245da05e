#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <system_error>

#include "spectral_transfer/dataio.hpp"

namespace spectral_transfer::dataio {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) {
    return {};
  }
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) {
    return false;
  }
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    rows.push_back(split_line(line));
  }
  return rows;
}

// A fully numeric first row is the wavelength axis only when it is strictly
// increasing and dwarfs every data value below it; absorbance never reaches
// the nm range, so this cannot misfire on real spectra.
bool numeric_row_is_header(const std::vector<double>& first,
                           const std::vector<std::vector<std::string>>& rows) {
  if (rows.size() < 2) {
    return false;
  }
  for (size_t j = 1; j < first.size(); ++j) {
    if (!(first[j] > first[j - 1])) {
      return false;
    }
  }
  const double axis_min = first.front();
  for (size_t i = 1; i < rows.size(); ++i) {
    for (const std::string& cell : rows[i]) {
      double v = 0.0;
      if (parse_double(cell, v) && std::abs(v) >= axis_min) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write " + tmp.string());
    }
    out << content;
    if (!out) {
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw NumericalError("format_double: conversion failed");
  }
  return std::string(buf, ptr);
}

SpectraMatrix load_spectra_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) {
    throw InputError(path.string() + ": no data rows");
  }

  const size_t n_cols = rows.front().size();
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n_cols) {
      throw InputError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " fields, expected " +
                       std::to_string(n_cols));
    }
  }

  // Header detection.
  std::vector<double> first_row(n_cols);
  bool first_numeric = true;
  for (size_t j = 0; j < n_cols; ++j) {
    if (!parse_double(rows[0][j], first_row[j])) {
      first_numeric = false;
      break;
    }
  }
  bool has_header = false;
  bool header_is_axis = false;
  if (!first_numeric) {
    has_header = true;
    header_is_axis = false;
    // Labels like "wl_1100" carry no usable axis; still consume the row.
    double v = 0.0;
    header_is_axis = std::all_of(rows[0].begin(), rows[0].end(),
                                 [&](const std::string& c) { return parse_double(c, v); });
  } else if (numeric_row_is_header(first_row, rows)) {
    has_header = true;
    header_is_axis = true;
  }

  const size_t data_start = has_header ? 1 : 0;
  const size_t n_rows = rows.size() - data_start;
  if (n_rows == 0) {
    throw InputError(path.string() + ": header present but no data rows");
  }

  SpectraMatrix out;
  out.values.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
  for (size_t i = 0; i < n_rows; ++i) {
    for (size_t j = 0; j < n_cols; ++j) {
      double v = 0.0;
      if (!parse_double(rows[data_start + i][j], v)) {
        throw InputError(path.string() + ": cannot parse cell at row " +
                         std::to_string(data_start + i + 1) + ", column " +
                         std::to_string(j + 1) + ": '" + trim(rows[data_start + i][j]) + "'");
      }
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  if (has_header && header_is_axis) {
    Eigen::VectorXd axis(n_cols);
    for (size_t j = 0; j < n_cols; ++j) {
      axis(static_cast<Eigen::Index>(j)) = first_row[j];
    }
    out.wavelengths = std::move(axis);
  }
  out.validate();
  return out;
}

void save_spectra_csv(const std::filesystem::path& path, const SpectraMatrix& spectra) {
  spectra.validate();
  std::string content;
  content.reserve(static_cast<size_t>(spectra.rows() * spectra.cols()) * 12);
  if (spectra.wavelengths) {
    for (Eigen::Index j = 0; j < spectra.cols(); ++j) {
      if (j) content += ',';
      content += format_double((*spectra.wavelengths)(j));
    }
    content += '\n';
  }
  for (Eigen::Index i = 0; i < spectra.rows(); ++i) {
    for (Eigen::Index j = 0; j < spectra.cols(); ++j) {
      if (j) content += ',';
      content += format_double(spectra.values(i, j));
    }
    content += '\n';
  }
  write_text_atomic(path, content);
}

ResponseVector ResponseTable::column(const std::string& name) const {
  for (size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) {
      return values.col(static_cast<Eigen::Index>(j));
    }
  }
  std::string known;
  for (const auto& n : names) {
    known += (known.empty() ? "" : ", ") + n;
  }
  throw InputError("response '" + name + "' not found; available: " + known);
}

bool ResponseTable::has(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

ResponseTable load_response_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path);
  if (rows.size() < 2) {
    throw InputError(path.string() + ": expected a header row plus data rows");
  }
  ResponseTable table;
  for (const std::string& cell : rows[0]) {
    const std::string name = trim(cell);
    if (name.empty()) {
      throw InputError(path.string() + ": empty response name in header");
    }
    table.names.push_back(name);
  }
  const size_t n_cols = table.names.size();
  table.values.resize(static_cast<Eigen::Index>(rows.size() - 1),
                      static_cast<Eigen::Index>(n_cols));
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != n_cols) {
      throw InputError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " fields, expected " +
                       std::to_string(n_cols));
    }
    for (size_t j = 0; j < n_cols; ++j) {
      double v = 0.0;
      if (!parse_double(rows[i][j], v)) {
        throw InputError(path.string() + ": cannot parse cell at row " + std::to_string(i + 1) +
                         ", column " + std::to_string(j + 1));
      }
      table.values(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return table;
}

void save_response_csv(const std::filesystem::path& path, const ResponseTable& table) {
  if (table.names.empty() ||
      static_cast<Eigen::Index>(table.names.size()) != table.values.cols()) {
    throw InputError("save_response_csv: header does not match value columns");
  }
  std::string content;
  for (size_t j = 0; j < table.names.size(); ++j) {
    if (j) content += ',';
    content += table.names[j];
  }
  content += '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      if (j) content += ',';
      content += format_double(table.values(i, j));
    }
    content += '\n';
  }
  write_text_atomic(path, content);
}

}  // namespace spectral_transfer::dataio
