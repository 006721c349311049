// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ltvmor {

/// Precondition or argument-range violation (bad grid, out-of-range time,
/// mismatched dimensions, log of a negative number, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical step could not proceed at a specific grid node: rank-deficient
/// balancing factors, an unsolvable projection system, and similar.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, std::size_t node, double time,
                  std::optional<std::size_t> iteration = std::nullopt);

  std::size_t node() const noexcept { return node_; }
  double time() const noexcept { return time_; }
  std::optional<std::size_t> iteration() const noexcept { return iteration_; }

  /// Copy of this error with the iteration index attached.
  DegeneracyError with_iteration(std::size_t iteration) const;

 private:
  std::string base_;
  std::size_t node_;
  double time_;
  std::optional<std::size_t> iteration_;
};

}  // namespace ltvmor
