// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "csv.hpp"

#include <fmt/format.h>

namespace ltvmor::app {

std::string format_number(double v) { return fmt::format("{:.16e}", v); }

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) {
    throw IoError(fmt::format("{}: row has {} values, header has {}", path_.string(),
                              values.size(), columns_));
  }
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < values.size(); ++i) {
    fmt::format_to(std::back_inserter(buf), "{}{:.16e}", i ? "," : "", values[i]);
  }
  buf.push_back('\n');
  out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out_) throw IoError("write failed: " + path_.string());
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError("write failed: " + path_.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace ltvmor::app
