// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltvmor::app {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header row, then one row per call; every value printed with 17
/// significant digits in scientific notation.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

std::string format_number(double v);

/// Creates the directory (and parents) if needed.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace ltvmor::app
