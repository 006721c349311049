// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

// Classical fixed-step RK4 stepping node to node on a uniform grid.

#pragma once

#include <cstddef>
#include <vector>

#include "ltvmor/timegrid.hpp"

namespace ltvmor::detail {

/// Stage positions of one step from node `from` to the adjacent node `to`.
struct StepPoints {
  GridPoint start;
  GridPoint mid;
  GridPoint end;
};

inline StepPoints step_points(std::size_t from, std::size_t to) {
  const std::size_t lo = from < to ? from : to;
  return {GridPoint{from, false}, GridPoint{lo, true}, GridPoint{to, false}};
}

/// Integrates dX/dt = rhs(p, X) from node `from` to node `to` (either
/// direction). `rhs` receives the grid point whose coefficients to use.
/// Returns the states at from, from +/- 1, ..., to in stepping order.
template <class Rhs>
std::vector<Matrix> integrate(const TimeGrid& grid, std::size_t from, std::size_t to,
                              Matrix x0, Rhs&& rhs) {
  std::vector<Matrix> out;
  out.reserve((from < to ? to - from : from - to) + 1);
  const double h = from <= to ? grid.step() : -grid.step();
  out.push_back(std::move(x0));
  std::size_t k = from;
  while (k != to) {
    const std::size_t next = from < to ? k + 1 : k - 1;
    const auto pts = step_points(k, next);
    const Matrix& x = out.back();
    const Matrix k1 = rhs(pts.start, x);
    const Matrix k2 = rhs(pts.mid, x + (0.5 * h) * k1);
    const Matrix k3 = rhs(pts.mid, x + (0.5 * h) * k2);
    const Matrix k4 = rhs(pts.end, x + h * k3);
    out.push_back(x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    k = next;
  }
  return out;
}

}  // namespace ltvmor::detail
