// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line interface: degradability measurement, diamond distance,
// coherent information, capacity bound assembly, and family sweeps.
// Exit codes: 0 success, 2 invalid input, 3 solver failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdeg/capacity.hpp"
#include "qdeg/channel_json.hpp"
#include "qdeg/degradability.hpp"
#include "qdeg/sweep.hpp"
#include "qdeg/zoo.hpp"

namespace {

using nlohmann::json;
using namespace qdeg;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

// Channel source shared by epsilon / q1 / bounds: a JSON file or a named
// family with its parameters. Exactly one source per invocation.
struct SourceFlags {
  std::string channel_path;
  std::string family;
  double p = 0.0;
  double p_x = 0.0;
  double p_z = 0.0;
  double gamma = 0.0;
  int dim_a = 2;
  int dim_b = 2;
  std::uint64_t seed = 0;
};

void add_source_flags(CLI::App* cmd, SourceFlags& src) {
  cmd->add_option("--channel", src.channel_path,
                  "channel JSON file (kraus or choi form)");
  cmd->add_option("--family", src.family,
                  "family name: depolarizing, bb84, amplitude_damping, "
                  "erasure, random_unitary_complement");
  cmd->add_option("--p", src.p, "depolarizing / erasure probability");
  cmd->add_option("--px", src.p_x, "bb84 X-flip probability");
  cmd->add_option("--pz", src.p_z, "bb84 Z-flip probability");
  cmd->add_option("--gamma", src.gamma, "amplitude damping parameter");
  cmd->add_option("--dim-a", src.dim_a, "random family input dimension");
  cmd->add_option("--dim-b", src.dim_b, "random family output dimension");
  cmd->add_option("--seed", src.seed, "random family seed");
}

QuantumChannel resolve_channel(const SourceFlags& src) {
  const bool has_file = !src.channel_path.empty();
  const bool has_family = !src.family.empty();
  if (has_file == has_family)
    throw DomainError("exactly one of --channel or --family is required");
  if (has_file) return load_channel(src.channel_path);
  ChannelFamilySpec spec;
  if (src.family == "depolarizing") {
    spec.family = ChannelFamily::kDepolarizing;
    spec.p = src.p;
  } else if (src.family == "bb84") {
    spec.family = ChannelFamily::kBb84;
    spec.p_x = src.p_x;
    spec.p_z = src.p_z;
  } else if (src.family == "amplitude_damping") {
    spec.family = ChannelFamily::kAmplitudeDamping;
    spec.gamma = src.gamma;
  } else if (src.family == "erasure") {
    spec.family = ChannelFamily::kErasure;
    spec.p = src.p;
  } else if (src.family == "random_unitary_complement") {
    spec.family = ChannelFamily::kRandomUnitaryComplement;
    spec.dim_a = src.dim_a;
    spec.dim_b = src.dim_b;
    spec.seed = src.seed;
  } else {
    throw DomainError("unknown family: " + src.family);
  }
  return make_channel(spec);
}

SdpOptions solver_options(double tol) {
  if (!(tol > 0.0) || tol > 1e-2)
    throw DomainError("--tol must lie in (0, 1e-2]");
  SdpOptions opt;
  opt.gap_tol = tol;
  opt.feas_tol = tol;
  return opt;
}

json matrix_json(const Mat& m) { return json::parse(matrix_to_json(m)); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// Maps library failures to the documented exit codes; no stack traces.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const NumericalFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const InfeasibleProblem& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitSolver;
  }
}

int run_epsilon(const SourceFlags& src, bool anti, double tol) {
  QuantumChannel ch = resolve_channel(src);
  const SdpOptions opt = solver_options(tol);
  const DegradabilityReport rep =
      anti ? epsilon_antidegradable(ch, opt) : epsilon_degradable(ch, opt);
  json out;
  out["mode"] = anti ? "antidegradable" : "degradable";
  out["epsilon"] = rep.epsilon;
  out["verified_epsilon"] = rep.verified_epsilon;
  out["dim_a"] = rep.dim_a;
  out["dim_b"] = rep.dim_b;
  out["dim_e"] = rep.dim_e;
  out["dim_f"] = rep.dim_f;
  out["status"] = sdp_status_name(rep.status);
  out["iterations"] = rep.iterations;
  out["relative_gap"] = rep.relative_gap;
  out["degrading_choi"] = matrix_json(rep.degrading_choi.entries);
  print_json(out);
  if (rep.status != SdpStatus::Optimal) {
    std::cerr << "solver did not reach optimality: "
              << sdp_status_name(rep.status) << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int run_diamond(const std::string& a_path, const std::string& b_path,
                double tol) {
  QuantumChannel a = load_channel(a_path);
  QuantumChannel b = load_channel(b_path);
  const double d = diamond_norm_distance(a, b, solver_options(tol));
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", d);
  std::cout << buf << "\n";
  return kExitOk;
}

int run_q1(const SourceFlags& src, int starts) {
  if (starts < 0) throw DomainError("--starts must be nonnegative");
  QuantumChannel ch = resolve_channel(src);
  const CoherentInfoResult res = channel_coherent_information(ch, starts);
  json out;
  out["value"] = res.value;
  out["converged"] = res.converged;
  out["starts"] = starts;
  out["input"] = matrix_json(res.input.matrix());
  print_json(out);
  return kExitOk;
}

int run_bounds(const SourceFlags& src, bool anti, double tol, int starts) {
  if (starts < 0) throw DomainError("--starts must be nonnegative");
  QuantumChannel ch = resolve_channel(src);
  const SdpOptions opt = solver_options(tol);
  const DegradabilityReport rep = epsilon_degradable(ch, opt);
  if (rep.status != SdpStatus::Optimal) {
    std::cerr << "degradability solve failed: " << sdp_status_name(rep.status)
              << "\n";
    return kExitSolver;
  }
  const CoherentInfoResult q1 = channel_coherent_information(ch, starts);
  const double uxi = u_xi(ch, rep.degrading);
  CapacityBounds cb = capacity_bounds(ch, rep, q1.value, uxi);

  json out;
  out["epsilon"] = rep.epsilon;
  out["q1"] = cb.q1;
  out["u_xi"] = cb.u_xi;
  out["q_upper_from_q1"] = cb.q_upper_from_q1;
  out["q_upper_from_u"] = cb.q_upper_from_u;
  out["p_upper_from_q1"] = cb.p_upper_from_q1;
  out["p_upper_from_u"] = cb.p_upper_from_u;
  out["p1_upper_from_q1"] = cb.p1_upper_from_q1;
  out["qss_upper"] = cb.qss_upper;
  out["pss_upper"] = cb.pss_upper;
  if (anti) {
    const DegradabilityReport arep = epsilon_antidegradable(ch, opt);
    if (arep.status != SdpStatus::Optimal) {
      std::cerr << "anti-degradability solve failed: "
                << sdp_status_name(arep.status) << "\n";
      return kExitSolver;
    }
    cb.anti_upper = anti_degradable_bound(arep, rep.dim_b);
    out["epsilon_anti"] = arep.epsilon;
    out["anti_upper"] = *cb.anti_upper;
  }
  out["terms"] = {{"epsilon", cb.terms.epsilon}, {"dim_e", cb.terms.dim_e},
                  {"dim_f", cb.terms.dim_f},     {"fa", cb.terms.fa},
                  {"af", cb.terms.af},           {"af_f", cb.terms.af_f},
                  {"xi", cb.terms.xi},           {"xi1", cb.terms.xi1},
                  {"xi2", cb.terms.xi2}};

  // The lower bound must not exceed any upper bound; a violation means the
  // solve or the ascent went wrong, so nothing is printed.
  std::vector<double> uppers{cb.q_upper_from_q1, cb.q_upper_from_u,
                             cb.p_upper_from_q1, cb.p_upper_from_u,
                             cb.p1_upper_from_q1, cb.qss_upper, cb.pss_upper};
  if (cb.anti_upper) uppers.push_back(*cb.anti_upper);
  for (double u : uppers)
    if (!(cb.q1 <= u + 1e-9)) {
      std::cerr << "bound check failed: q1 exceeds an upper bound\n";
      return kExitSolver;
    }
  print_json(out);
  return kExitOk;
}

int run_sweep(const std::string& family, double from, double to, int steps,
              double ratio, bool ratio_given, const std::string& out_path,
              int workers, double tol) {
  if (steps < 1) throw DomainError("--steps must be at least 1");
  if (workers < 1) throw DomainError("--workers must be at least 1");
  if (steps > 1 && !(to > from))
    throw DomainError("--to must exceed --from when --steps > 1");
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(steps));
  for (int i = 0; i < steps; ++i)
    grid.push_back(i + 1 == steps
                       ? (steps == 1 ? from : to)
                       : from + (to - from) * i / (steps - 1));
  SweepOptions opt;
  opt.workers = workers;
  opt.solver = solver_options(tol);

  SweepTable table;
  if (family == "depolarizing") {
    if (ratio_given)
      throw DomainError("--ratio applies only to the bb84 family");
    table = sweep_depolarizing(grid, opt);
  } else if (family == "bb84") {
    table = sweep_bb84(grid, ratio, opt);
  } else {
    throw DomainError("sweep supports families depolarizing and bb84");
  }
  emit_csv(table, out_path);
  size_t failed = 0;
  for (const SweepRow& r : table.rows)
    if (r.status != "ok") ++failed;
  std::printf("wrote %s rows=%zu failed=%zu seconds=%.2f\n", out_path.c_str(),
              table.rows.size(), failed, table.total_seconds);
  if (failed > 0) {
    std::cerr << failed << " row(s) did not solve; see the status column\n";
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate-degradability measurements and capacity bounds "
               "for finite-dimensional quantum channels"};
  app.require_subcommand(1);

  SourceFlags src;
  bool anti = false;
  double tol = 1e-8;
  int starts = 20;

  CLI::App* c_eps = app.add_subcommand(
      "epsilon", "degradability parameter of a channel (JSON report)");
  add_source_flags(c_eps, src);
  c_eps->add_flag("--anti", anti,
                  "measure anti-degradability instead of degradability");
  c_eps->add_option("--tol", tol, "solver gap and feasibility tolerance");

  std::string a_path, b_path;
  CLI::App* c_dia = app.add_subcommand(
      "diamond", "diamond-norm distance between two channel files");
  c_dia->add_option("--a", a_path, "first channel JSON file")->required();
  c_dia->add_option("--b", b_path, "second channel JSON file")->required();
  c_dia->add_option("--tol", tol, "solver gap and feasibility tolerance");

  CLI::App* c_q1 = app.add_subcommand(
      "q1", "best-found coherent information and its input state (JSON)");
  add_source_flags(c_q1, src);
  c_q1->add_option("--starts", starts, "extra random ascent starts");

  CLI::App* c_bnd = app.add_subcommand(
      "bounds", "capacity upper bounds from the measured degradability (JSON)");
  add_source_flags(c_bnd, src);
  c_bnd->add_flag("--anti", anti, "also measure anti-degradability");
  c_bnd->add_option("--tol", tol, "solver gap and feasibility tolerance");
  c_bnd->add_option("--starts", starts, "extra random ascent starts");

  std::string sweep_family, out_path;
  double from = 0.0, to = 0.0, ratio = 1.0;
  int steps = 0, workers = 1;
  CLI::App* c_swp = app.add_subcommand(
      "sweep", "parameter sweep over a family; writes CSV plus meta JSON");
  c_swp->add_option("--family", sweep_family, "depolarizing or bb84")
      ->required();
  c_swp->add_option("--from", from, "first grid value")->required();
  c_swp->add_option("--to", to, "last grid value")->required();
  c_swp->add_option("--steps", steps, "number of grid points")->required();
  CLI::Option* ratio_opt =
      c_swp->add_option("--ratio", ratio, "bb84 only: p_z = ratio * p_x");
  c_swp->add_option("--out", out_path, "output CSV path")->required();
  c_swp->add_option("--workers", workers, "parallel row solves");
  c_swp->add_option("--tol", tol, "solver gap and feasibility tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*c_eps) return guarded([&] { return run_epsilon(src, anti, tol); });
  if (*c_dia) return guarded([&] { return run_diamond(a_path, b_path, tol); });
  if (*c_q1) return guarded([&] { return run_q1(src, starts); });
  if (*c_bnd)
    return guarded([&] { return run_bounds(src, anti, tol, starts); });
  if (*c_swp)
    return guarded([&] {
      return run_sweep(sweep_family, from, to, steps, ratio,
                       ratio_opt->count() > 0, out_path, workers, tol);
    });
  return kExitValidation;
}
