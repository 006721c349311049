// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltvmor/h2norm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ltvmor/dle.hpp"
#include "ltvmor/errors.hpp"

namespace ltvmor {
namespace {

void check_shapes(const LtvSystem& sys, const LtvSystem& red, const MatrixTrajectory& full,
                  const MatrixTrajectory& cross, const MatrixTrajectory& reduced) {
  const Index n = sys.states();
  const Index r = red.states();
  const bool ok = full.rows() == n && full.cols() == n && cross.rows() == n &&
                  cross.cols() == r && reduced.rows() == r && reduced.cols() == r &&
                  sys.inputs() == red.inputs() && sys.outputs() == red.outputs();
  if (!ok) throw DomainError("h2 error: gramian shapes do not match the systems");
  const auto& g = sys.grid();
  if (!(red.grid() == g) || !(full.grid() == g) || !(cross.grid() == g) ||
      !(reduced.grid() == g)) {
    throw DomainError("h2 error: inputs live on different grids");
  }
}

// int Tr(M P M^T - 2 M X Mr^T + Mr Pr Mr^T) dt, where M and Mr are the
// output-side matrices of the two systems.
double reach_form(const MatrixTrajectory& M, const MatrixTrajectory& Mr,
                  const MatrixTrajectory& P, const MatrixTrajectory& X,
                  const MatrixTrajectory& Pr) {
  std::vector<double> integrand(P.size());
  for (std::size_t k = 0; k < P.size(); ++k) {
    const Matrix& m = M.sample(k);
    const Matrix& mr = Mr.sample(k);
    integrand[k] = (m * P.sample(k) * m.transpose()).trace() -
                   2.0 * (m * X.sample(k) * mr.transpose()).trace() +
                   (mr * Pr.sample(k) * mr.transpose()).trace();
  }
  return integrate_trapz(P.grid(), integrand);
}

}  // namespace

double h2_error_sq_reach(const LtvSystem& sys, const LtvSystem& red, const MatrixTrajectory& P,
                         const MatrixTrajectory& X, const MatrixTrajectory& Pr) {
  check_shapes(sys, red, P, X, Pr);
  return reach_form(sys.C(), red.C(), P, X, Pr);
}

double h2_error_sq_obs(const LtvSystem& sys, const LtvSystem& red, const MatrixTrajectory& Q,
                       const MatrixTrajectory& Y, const MatrixTrajectory& Qr) {
  check_shapes(sys, red, Q, Y, Qr);
  // Tr(B^T Q B) = Tr(M Q M^T) with M = B^T.
  return reach_form(transpose(sys.B()), transpose(red.B()), Q, Y, Qr);
}

double h2_error_sq_adjoint(const LtvSystem& sys, const LtvSystem& red,
                           const MatrixTrajectory& Pma, const MatrixTrajectory& Xma,
                           const MatrixTrajectory& Prma) {
  const auto sys_ma = modified_adjoint(sys);
  const auto red_ma = modified_adjoint(red);
  check_shapes(sys_ma, red_ma, Pma, Xma, Prma);
  return reach_form(sys_ma.C(), red_ma.C(), Pma, Xma, Prma);
}

double h2_error_bruteforce(const LtvSystem& sys, const LtvSystem& red, std::size_t tau_stride) {
  if (tau_stride < 1) throw DomainError("h2_error_bruteforce: tau_stride must be >= 1");
  if (!(sys.grid() == red.grid())) throw DomainError("h2_error_bruteforce: grids differ");
  if (sys.inputs() != red.inputs() || sys.outputs() != red.outputs()) {
    throw DomainError("h2_error_bruteforce: input/output dimensions differ");
  }
  const auto& grid = sys.grid();
  const std::size_t last = grid.n_steps();

  std::vector<std::size_t> taus;
  for (std::size_t k = 0; k < last; k += tau_stride) taus.push_back(k);
  taus.push_back(last);

  std::vector<double> inner(taus.size(), 0.0);
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    const std::size_t tau = taus[i];
    const auto h = impulse_response_from_node(sys, tau);
    const auto hr = impulse_response_from_node(red, tau);
    // Trapezoid over t in [tau, tf].
    double sum = 0.0;
    for (std::size_t k = tau; k <= last; ++k) {
      const double w = (k == tau || k == last) ? 0.5 : 1.0;
      sum += w * (h.sample(k) - hr.sample(k)).squaredNorm();
    }
    inner[i] = sum * grid.step();
  }
  // inner at tau = tf is zero.
  double outer = 0.0;
  for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
    const double width = static_cast<double>(taus[i + 1] - taus[i]) * grid.step();
    outer += 0.5 * width * (inner[i] + inner[i + 1]);
  }
  return outer;
}

H2ErrorReport h2_error_report(const LtvSystem& sys, const LtvSystem& red,
                              const H2ReportOptions& options) {
  const auto g = gramians(sys, options.eps, options.eps);
  const auto c = coupling(sys, red, options.eps);
  const auto adj = coupling_via_adjoint(sys, red, options.eps);
  const auto g_ma = gramians(modified_adjoint(sys), options.eps, options.eps);

  H2ErrorReport report;
  report.J_reach = h2_error_sq_reach(sys, red, g.P, c.X, c.Pr);
  report.J_obs = h2_error_sq_obs(sys, red, g.Q, c.Y, c.Qr);
  report.J_adjoint = h2_error_sq_adjoint(sys, red, g_ma.P, adj.Xma, adj.Prma);
  if (options.bruteforce_stride) {
    report.J_bruteforce = h2_error_bruteforce(sys, red, *options.bruteforce_stride);
  }

  std::vector<double> values{report.J_reach, report.J_obs, report.J_adjoint};
  if (report.J_bruteforce) values.push_back(*report.J_bruteforce);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double scale = 1.0 + std::max(std::abs(values[i]), std::abs(values[j]));
      report.agreement = std::max(report.agreement, std::abs(values[i] - values[j]) / scale);
    }
  }
  return report;
}

}  // namespace ltvmor
