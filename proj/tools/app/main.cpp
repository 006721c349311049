// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"

namespace {

using namespace ltvmor::app;

struct Overrides {
  std::string config;
  std::optional<std::size_t> steps;
  std::optional<double> eps;
  std::vector<double> pad;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o, bool config_required, const std::string& out_default) {
  auto* cfg = cmd->add_option("--config", o.config, "YAML system description");
  if (config_required) cfg->required();
  cfg->check(CLI::ExistingFile);
  cmd->add_option("--steps", o.steps, "RK4 intervals on the outer grid")->check(CLI::Range(2, 100000000));
  cmd->add_option("--eps", o.eps, "gramian regularization")->check(CLI::NonNegativeNumber);
  cmd->add_option("--pad", o.pad, "outer interval T0 T1 for gramians")->expected(2);
  o.out = out_default;
  cmd->add_option("--out", o.out, "output directory (simulate: also a .csv file)");
}

SystemConfig resolve(const Overrides& o) {
  SystemConfig c = o.config.empty() ? two_state_config() : load_config(o.config);
  if (o.steps) c.n_steps = *o.steps;
  if (o.eps) c.eps = *o.eps;
  if (o.pad.size() == 2) c.padding = std::make_pair(o.pad[0], o.pad[1]);
  validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model order reduction for linear time-varying systems"};
  app.require_subcommand(1);

  Overrides sim_o, gram_o, hsv_o, red_o, ver_o, rep_o;
  bool with_states = false;
  std::string method = "tsia";
  std::optional<long> order;
  std::string fault = "none";

  auto* sim = app.add_subcommand("simulate", "simulate the full model on the horizon");
  add_common(sim, sim_o, true, "out");
  sim->add_flag("--states", with_states, "also write the state columns");

  auto* gram = app.add_subcommand("gramians", "reachability and observability gramians");
  add_common(gram, gram_o, true, "out");

  auto* hsv = app.add_subcommand("hsv", "Hankel singular values over time");
  add_common(hsv, hsv_o, true, "out");

  auto* red = app.add_subcommand("reduce", "reduce with balanced truncation or TSIA");
  add_common(red, red_o, true, "out");
  red->add_option("--method", method, "bt or tsia")->check(CLI::IsMember({"bt", "tsia"}));
  red->add_option("--order", order, "reduced order r");

  auto* ver = app.add_subcommand("verify", "check internal identities on the configured system");
  add_common(ver, ver_o, true, "out");
  ver->add_option("--inject-fault", fault, "deliberately break one identity")
      ->check(CLI::IsMember({"none", "adjoint-sign"}));

  auto* rep = app.add_subcommand("reproduce-paper", "run the two-state example end to end");
  add_common(rep, rep_o, false, "out/example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*sim) return cmd_simulate(resolve(sim_o), sim_o.out, with_states, std::cout);
    if (*gram) return cmd_gramians(resolve(gram_o), gram_o.out, std::cout);
    if (*hsv) return cmd_hsv(resolve(hsv_o), hsv_o.out, std::cout);
    if (*red) {
      auto c = resolve(red_o);
      if (order) {
        c.order = static_cast<ltvmor::Index>(*order);
        validate(c);
      }
      const auto m = method == "bt" ? ltvmor::ReductionMethod::balanced_truncation
                                    : ltvmor::ReductionMethod::tsia;
      return cmd_reduce(c, m, red_o.out, std::cout);
    }
    if (*ver) {
      return cmd_verify(resolve(ver_o), fault == "adjoint-sign" ? Fault::adjoint_sign : Fault::none,
                        std::cout);
    }
    if (*rep) return cmd_reproduce_example(resolve(rep_o), rep_o.out, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ltvmor::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ltvmor::expr::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ltvmor::DegeneracyError& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kDegeneracy;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
