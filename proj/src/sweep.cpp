// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#include "qdeg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include <json.hpp>

#include "qdeg/capacity.hpp"
#include "qdeg/degradability.hpp"
#include "qdeg/entropy.hpp"

namespace qdeg {

namespace {

double xlog2(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

// Cross product sign of the turn p1 -> p2 -> p3; >= 0 keeps the chain convex
// from below (slopes nondecreasing).
double turn(const std::pair<double, double>& p1,
            const std::pair<double, double>& p2,
            const std::pair<double, double>& p3) {
  return (p2.first - p1.first) * (p3.second - p1.second) -
         (p2.second - p1.second) * (p3.first - p1.first);
}

void check_strictly_increasing(const std::vector<double>& xs,
                               const char* who) {
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1]))
      throw DomainError(std::string(who) +
                        ": grid must be strictly increasing");
}

// Runs fn(i) for i in [0, n) on `workers` threads. Each index is claimed
// exactly once, so writes to disjoint rows need no further synchronization.
void run_rows(int workers, size_t n, const std::function<void(size_t)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  const size_t count = std::min<size_t>(static_cast<size_t>(workers), n);
  pool.reserve(count);
  for (size_t t = 0; t < count; ++t)
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

// Envelope of the pointwise minimum over the per-row member values produced
// by `members`; rows whose status is not "ok" contribute only their
// closed-form members (NaN entries are skipped in the minimum).
std::vector<double> hull_of_min(
    const std::vector<SweepRow>& rows,
    const std::function<std::vector<double>(const SweepRow&)>& members) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(rows.size());
  for (const SweepRow& r : rows) {
    double m = std::numeric_limits<double>::quiet_NaN();
    for (double v : members(r))
      if (!std::isnan(v) && (std::isnan(m) || v < m)) m = v;
    pts.emplace_back(r.param, m);
  }
  if (pts.size() < 2) {
    std::vector<double> out;
    for (const auto& p : pts) out.push_back(p.second);
    return out;
  }
  // A NaN minimum (every member failed on that row) would poison the hull;
  // drop such points and re-evaluate through the surviving chords.
  std::vector<std::pair<double, double>> clean;
  for (const auto& p : pts)
    if (!std::isnan(p.second)) clean.push_back(p);
  if (clean.size() < 2) {
    std::vector<double> out(pts.size(),
                            std::numeric_limits<double>::quiet_NaN());
    return out;
  }
  EnvelopePoints env = lower_convex_envelope(clean);
  std::vector<double> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    if (p.first < clean.front().first || p.first > clean.back().first)
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    else
      out.push_back(envelope_value(env, p.first));
  }
  return out;
}

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Shared per-row solve: measures epsilon, assembles the continuity bound,
// and records solver status without aborting the sweep.
void solve_row(const QuantumChannel& channel, double q1,
               const SweepOptions& options, SweepRow& row) {
  row.q1 = q1;
  try {
    DegradabilityReport rep = epsilon_degradable(channel, options.solver);
    row.status = sdp_status_name(rep.status);
    if (rep.status != SdpStatus::Optimal) return;
    row.epsilon = rep.epsilon;
    double uxi = std::numeric_limits<double>::quiet_NaN();
    if (options.with_u) uxi = u_xi(channel, rep.degrading);
    CapacityBounds cb = capacity_bounds(channel, rep, q1, uxi);
    row.eps_bound = cb.q_upper_from_q1;
    if (options.with_u) row.u_bound = cb.q_upper_from_u;
  } catch (const Error&) {
    row.status = "error";
  }
}

void write_cell(std::string& line, double v) {
  if (std::isnan(v)) return;  // empty cell
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  line += buf;
}

}  // namespace

EnvelopePoints lower_convex_envelope(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2)
    throw DomainError("lower_convex_envelope: need at least 2 points");
  for (size_t i = 1; i < points.size(); ++i)
    if (!(points[i].first > points[i - 1].first))
      throw DomainError(
          "lower_convex_envelope: abscissae must be strictly increasing");
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : points) {
    while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull.back(), p) <= 0.0)
      hull.pop_back();
    hull.push_back(p);
  }
  EnvelopePoints env;
  env.x.reserve(points.size());
  env.y.reserve(points.size());
  size_t seg = 0;
  for (const auto& p : points) {
    while (seg + 2 < hull.size() && hull[seg + 1].first < p.first) ++seg;
    const auto& a = hull[seg];
    const auto& b = hull[seg + 1 < hull.size() ? seg + 1 : seg];
    env.x.push_back(p.first);
    if (b.first == a.first) {
      env.y.push_back(a.second);
    } else {
      const double t = (p.first - a.first) / (b.first - a.first);
      env.y.push_back(a.second + t * (b.second - a.second));
    }
  }
  return env;
}

double envelope_value(const EnvelopePoints& env, double x) {
  if (env.x.empty()) throw DomainError("envelope_value: empty envelope");
  if (x < env.x.front() - 1e-12 || x > env.x.back() + 1e-12)
    throw DomainError("envelope_value: abscissa outside the swept interval");
  x = std::clamp(x, env.x.front(), env.x.back());
  const auto it = std::lower_bound(env.x.begin(), env.x.end(), x);
  size_t hi = static_cast<size_t>(it - env.x.begin());
  if (hi == 0) return env.y.front();
  if (hi >= env.x.size()) return env.y.back();
  const size_t lo = hi - 1;
  const double t = (x - env.x[lo]) / (env.x[hi] - env.x[lo]);
  return env.y[lo] + t * (env.y[hi] - env.y[lo]);
}

double depolarizing_q1(double p) {
  if (p < 0.0 || p > 1.0)
    throw DomainError("depolarizing_q1: p must lie in [0, 1]");
  return 1.0 + xlog2(1.0 - p) + (p > 0.0 ? p * std::log2(p / 3.0) : 0.0);
}

double depolarizing_entropic_bound(double p) {
  return 1.0 - binary_entropy(p);
}

double depolarizing_damping_bound(double p) {
  if (p < 0.0 || p > 1.0)
    throw DomainError("depolarizing_damping_bound: p must lie in [0, 1]");
  const double g = 4.0 * (std::sqrt(1.0 - p) - 1.0 + p);
  return binary_entropy((1.0 + g) / 2.0) - binary_entropy(g / 2.0);
}

double depolarizing_cloning_bound(double p) {
  if (p < 0.0 || p > 0.25)
    throw DomainError("depolarizing_cloning_bound: p must lie in [0, 1/4]");
  return 1.0 - 4.0 * p;
}

double bb84_q1(double p_x, double p_z) {
  return 1.0 - binary_entropy(p_x) - binary_entropy(p_z);
}

double bb84_flip_bound(double p) {
  if (p < 0.0 || p > 0.5)
    throw DomainError("bb84_flip_bound: p must lie in [0, 1/2]");
  const double q = 2.0 * p * (1.0 - p);
  return binary_entropy(0.5 - q) - binary_entropy(q);
}

std::vector<double> prior_depolarizing_hull(const std::vector<double>& grid) {
  check_strictly_increasing(grid, "prior_depolarizing_hull");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(grid.size());
  for (double p : grid)
    pts.emplace_back(
        p, std::min({depolarizing_entropic_bound(p),
                     depolarizing_damping_bound(p),
                     depolarizing_cloning_bound(p)}));
  if (pts.size() < 2) {
    std::vector<double> out;
    for (const auto& q : pts) out.push_back(q.second);
    return out;
  }
  return lower_convex_envelope(pts).y;
}

SweepTable sweep_depolarizing(const std::vector<double>& p_grid,
                              const SweepOptions& options) {
  check_strictly_increasing(p_grid, "sweep_depolarizing");
  for (double p : p_grid)
    if (p < 0.0 || p > 0.25)
      throw DomainError("sweep_depolarizing: grid must lie in [0, 0.25]");
  const auto t0 = std::chrono::steady_clock::now();
  SweepOptions opts = options;
  // Inner solves stay single-threaded when rows run in parallel; values are
  // identical either way, this only avoids oversubscription.
  if (opts.workers > 1) opts.solver.threads = 1;
  SweepTable table;
  table.family = ChannelFamily::kDepolarizing;
  table.with_u = opts.with_u;
  table.solver = opts.solver;
  table.rows.resize(p_grid.size());
  run_rows(opts.workers, p_grid.size(), [&](size_t i) {
    const auto row_t0 = std::chrono::steady_clock::now();
    SweepRow& row = table.rows[i];
    const double p = p_grid[i];
    row.param = p;
    row.entropic_bound = depolarizing_entropic_bound(p);
    row.damping_bound = depolarizing_damping_bound(p);
    row.cloning_bound = depolarizing_cloning_bound(p);
    solve_row(depolarizing(p), depolarizing_q1(p), opts, row);
    row.seconds = seconds_since(row_t0);
  });
  std::vector<double> prior = hull_of_min(table.rows, [](const SweepRow& r) {
    return std::vector<double>{r.entropic_bound, r.damping_bound,
                               r.cloning_bound};
  });
  std::vector<double> full = hull_of_min(table.rows, [](const SweepRow& r) {
    return std::vector<double>{r.eps_bound, r.entropic_bound, r.damping_bound,
                               r.cloning_bound};
  });
  for (size_t i = 0; i < table.rows.size(); ++i) {
    table.rows[i].prior_hull = prior[i];
    table.rows[i].hull = full[i];
  }
  table.total_seconds = seconds_since(t0);
  return table;
}

SweepTable sweep_bb84(const std::vector<double>& p_grid, double ratio,
                      const SweepOptions& options) {
  check_strictly_increasing(p_grid, "sweep_bb84");
  if (!(ratio > 0.0)) throw DomainError("sweep_bb84: ratio must be positive");
  for (double p : p_grid)
    if (p < 0.0 || p > 0.5 || ratio * p > 0.5)
      throw DomainError(
          "sweep_bb84: p_x and ratio*p_x must lie in [0, 1/2]");
  const bool symmetric = ratio == 1.0;
  const auto t0 = std::chrono::steady_clock::now();
  SweepOptions opts = options;
  if (opts.workers > 1) opts.solver.threads = 1;
  SweepTable table;
  table.family = ChannelFamily::kBb84;
  table.ratio = ratio;
  table.with_u = opts.with_u;
  table.solver = opts.solver;
  table.rows.resize(p_grid.size());
  run_rows(opts.workers, p_grid.size(), [&](size_t i) {
    const auto row_t0 = std::chrono::steady_clock::now();
    SweepRow& row = table.rows[i];
    const double px = p_grid[i];
    const double pz = ratio * px;
    row.param = px;
    row.p_z = pz;
    if (symmetric) row.flip_bound = bb84_flip_bound(px);
    solve_row(bb84(px, pz), bb84_q1(px, pz), opts, row);
    row.seconds = seconds_since(row_t0);
  });
  std::vector<double> full = hull_of_min(table.rows, [](const SweepRow& r) {
    return std::vector<double>{r.eps_bound, r.flip_bound};
  });
  for (size_t i = 0; i < table.rows.size(); ++i) table.rows[i].hull = full[i];
  table.total_seconds = seconds_since(t0);
  return table;
}

void emit_csv(const SweepTable& table, const std::string& path) {
  const bool depol = table.family == ChannelFamily::kDepolarizing;
  const bool symmetric = !depol && table.ratio == 1.0;
  std::vector<std::string> columns;
  columns.push_back(depol ? "p" : "p_x");
  if (!depol) columns.push_back("p_z");
  columns.insert(columns.end(), {"q1", "epsilon", "eps_bound"});
  if (table.with_u) columns.push_back("u_bound");
  if (depol)
    columns.insert(columns.end(), {"entropic_bound", "damping_bound",
                                   "cloning_bound", "prior_hull"});
  if (symmetric) columns.push_back("flip_bound");
  columns.insert(columns.end(), {"hull", "status"});

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("emit_csv: cannot open " + path);
  std::string line;
  for (size_t c = 0; c < columns.size(); ++c) {
    if (c) line += ',';
    line += columns[c];
  }
  line += '\n';
  out << line;
  nlohmann::json grid = nlohmann::json::array();
  nlohmann::json row_seconds = nlohmann::json::array();
  size_t failed = 0;
  for (const SweepRow& r : table.rows) {
    line.clear();
    write_cell(line, r.param);
    if (!depol) {
      line += ',';
      write_cell(line, r.p_z);
    }
    line += ',';
    write_cell(line, r.q1);
    line += ',';
    write_cell(line, r.epsilon);
    line += ',';
    write_cell(line, r.eps_bound);
    if (table.with_u) {
      line += ',';
      write_cell(line, r.u_bound);
    }
    if (depol) {
      line += ',';
      write_cell(line, r.entropic_bound);
      line += ',';
      write_cell(line, r.damping_bound);
      line += ',';
      write_cell(line, r.cloning_bound);
      line += ',';
      write_cell(line, r.prior_hull);
    }
    if (symmetric) {
      line += ',';
      write_cell(line, r.flip_bound);
    }
    line += ',';
    write_cell(line, r.hull);
    line += ',';
    line += r.status;
    line += '\n';
    out << line;
    grid.push_back(r.param);
    row_seconds.push_back(r.seconds);
    if (r.status != "ok") ++failed;
  }
  if (!out.good()) throw IoError("emit_csv: write failed for " + path);
  out.close();

  nlohmann::json meta;
  meta["family"] = depol ? "depolarizing" : "bb84";
  if (!depol) meta["ratio"] = table.ratio;
  meta["columns"] = columns;
  meta["grid"] = grid;
  meta["with_u"] = table.with_u;
  meta["solver"] = {{"gap_tol", table.solver.gap_tol},
                    {"feas_tol", table.solver.feas_tol},
                    {"max_iterations", table.solver.max_iterations}};
  meta["row_seconds"] = row_seconds;
  meta["total_seconds"] = table.total_seconds;
  meta["failed_rows"] = failed;
  std::ofstream mo(path + ".meta.json", std::ios::binary);
  if (!mo) throw IoError("emit_csv: cannot open " + path + ".meta.json");
  mo << meta.dump(2) << '\n';
  if (!mo.good())
    throw IoError("emit_csv: write failed for " + path + ".meta.json");
}

}  // namespace qdeg
