// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/errors.hpp"

#include <sstream>

namespace ltvmor {
namespace {

std::string describe(const std::string& what, std::size_t node, double time,
                     std::optional<std::size_t> iteration) {
  std::ostringstream os;
  os << what << " (node " << node << ", t = " << time;
  if (iteration) os << ", iteration " << *iteration;
  os << ")";
  return os.str();
}

}  // namespace

DegeneracyError::DegeneracyError(const std::string& what, std::size_t node, double time,
                                 std::optional<std::size_t> iteration)
    : std::runtime_error(describe(what, node, time, iteration)),
      base_(what),
      node_(node),
      time_(time),
      iteration_(iteration) {}

DegeneracyError DegeneracyError::with_iteration(std::size_t iteration) const {
  return DegeneracyError(base_, node_, time_, iteration);
}

}  // namespace ltvmor
