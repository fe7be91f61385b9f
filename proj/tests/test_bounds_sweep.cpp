// Copyright 2026 The qdeg authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qdeg/sweep.hpp"

using namespace qdeg;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void remove_outputs(const std::string& path) {
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".meta.json");
}

int sweep_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(8u, std::max(1u, hw)));
}

// Second differences of y on a uniform grid; >= -tol certifies convexity.
void check_convex(const std::vector<double>& y, double tol) {
  for (size_t i = 1; i + 1 < y.size(); ++i)
    CHECK(y[i - 1] - 2.0 * y[i] + y[i + 1] >= -tol);
}

}  // namespace

TEST_CASE("envelope: lines pass through, dips bridge, inputs are validated") {
  // Collinear points stay on the envelope.
  std::vector<std::pair<double, double>> line{{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}};
  EnvelopePoints el = lower_convex_envelope(line);
  REQUIRE(el.x.size() == 3);
  CHECK(std::abs(el.y[0] - 1.0) <= 1e-15);
  CHECK(std::abs(el.y[1] - 0.5) <= 1e-15);
  CHECK(std::abs(el.y[2] - 0.0) <= 1e-15);

  // A convex vee is its own envelope; evaluation interpolates the legs.
  std::vector<std::pair<double, double>> vee{{0.0, 1.0}, {0.5, 0.2}, {1.0, 1.0}};
  EnvelopePoints ev = lower_convex_envelope(vee);
  CHECK(std::abs(ev.y[1] - 0.2) <= 1e-15);
  CHECK(std::abs(envelope_value(ev, 0.25) - 0.6) <= 1e-12);
  CHECK(std::abs(envelope_value(ev, 0.75) - 0.6) <= 1e-12);
  CHECK(std::abs(envelope_value(ev, 0.5) - 0.2) <= 1e-12);

  // A point above the endpoint chord is bridged.
  std::vector<std::pair<double, double>> bump{{0.0, 1.0}, {0.5, 0.9}, {1.0, 0.0}};
  EnvelopePoints eb = lower_convex_envelope(bump);
  REQUIRE(eb.x.size() == 3);
  CHECK(std::abs(eb.y[1] - 0.5) <= 1e-12);

  // Two points are the minimal valid input.
  EnvelopePoints e2 = lower_convex_envelope({{0.0, 2.0}, {1.0, 3.0}});
  CHECK(std::abs(e2.y[0] - 2.0) <= 1e-15);
  CHECK(std::abs(e2.y[1] - 3.0) <= 1e-15);

  CHECK_THROWS_AS(lower_convex_envelope({{0.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(lower_convex_envelope({}), DomainError);
  CHECK_THROWS_AS(
      lower_convex_envelope({{0.0, 1.0}, {0.0, 2.0}, {1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(
      lower_convex_envelope({{0.0, 1.0}, {0.5, 0.5}, {0.4, 0.0}}), DomainError);

  // Evaluation allows a 1e-12 grace at the ends and rejects beyond it.
  CHECK(std::abs(envelope_value(ev, -1e-13) - 1.0) <= 1e-12);
  CHECK(std::abs(envelope_value(ev, 1.0 + 1e-13) - 1.0) <= 1e-12);
  CHECK_THROWS_AS(envelope_value(ev, -1e-9), DomainError);
  CHECK_THROWS_AS(envelope_value(ev, 1.0 + 1e-9), DomainError);
}

TEST_CASE("envelope: idempotent, convex, and below the input") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.01 * i;
    pts.emplace_back(x, 0.5 + (x - 0.4) * (x - 0.4) + 0.05 * std::sin(25.0 * x));
  }
  EnvelopePoints once = lower_convex_envelope(pts);
  REQUIRE(once.y.size() == pts.size());

  // Below the input, equal at the span ends.
  for (size_t i = 0; i < pts.size(); ++i)
    CHECK(once.y[i] <= pts[i].second + 1e-12);
  CHECK(std::abs(once.y.front() - pts.front().second) <= 1e-15);
  CHECK(std::abs(once.y.back() - pts.back().second) <= 1e-15);

  check_convex(once.y, 1e-9);

  // An envelope is a fixed point of the envelope.
  std::vector<std::pair<double, double>> again;
  for (size_t i = 0; i < once.x.size(); ++i)
    again.emplace_back(once.x[i], once.y[i]);
  EnvelopePoints twice = lower_convex_envelope(again);
  for (size_t i = 0; i < once.y.size(); ++i)
    CHECK(std::abs(twice.y[i] - once.y[i]) <= 1e-12);
}

TEST_CASE("closed-form members match frozen references") {
  // Hashing lower bound for the depolarizing family.
  CHECK(std::abs(depolarizing_q1(0.0) - 1.0) <= 1e-15);
  CHECK(std::abs(depolarizing_q1(0.01) - 0.9033572390968772) <= 1e-12);
  CHECK(std::abs(depolarizing_q1(0.05) - 0.6343549178479859) <= 1e-12);
  CHECK(std::abs(depolarizing_q1(0.1) - 0.3725081563386032) <= 1e-12);
  CHECK(std::abs(depolarizing_q1(1.0) - (1.0 - std::log2(3.0))) <= 1e-12);

  // Upper-bound members.
  CHECK(std::abs(depolarizing_entropic_bound(0.0) - 1.0) <= 1e-15);
  CHECK(std::abs(depolarizing_entropic_bound(0.01) - 0.9192068641040888) <= 1e-12);
  CHECK(std::abs(depolarizing_entropic_bound(0.05) - 0.7136030428840437) <= 1e-12);
  CHECK(std::abs(depolarizing_damping_bound(0.01) - 0.9190863680199096) <= 1e-12);
  CHECK(std::abs(depolarizing_damping_bound(0.05) - 0.7092916565520224) <= 1e-12);
  CHECK(std::abs(depolarizing_cloning_bound(0.05) - 0.8) <= 1e-15);
  CHECK(std::abs(depolarizing_cloning_bound(0.25)) <= 1e-15);

  // Independent-flip members.
  CHECK(std::abs(bb84_q1(0.0, 0.0) - 1.0) <= 1e-15);
  CHECK(std::abs(bb84_q1(0.005, 0.005) - 0.9091706153324118) <= 1e-12);
  CHECK(std::abs(bb84_q1(0.0005, 0.05) - 0.7073989835882121) <= 1e-12);
  CHECK(std::abs(bb84_q1(0.5, 0.5) - (-1.0)) <= 1e-12);
  CHECK(std::abs(bb84_flip_bound(0.0) - 1.0) <= 1e-15);
  CHECK(std::abs(bb84_flip_bound(0.005) - 0.9192528347061927) <= 1e-12);
  CHECK(std::abs(bb84_flip_bound(0.02) - 0.7569495218374137) <= 1e-12);
  CHECK(std::abs(bb84_flip_bound(0.5) - (-1.0)) <= 1e-12);

  CHECK_THROWS_AS(depolarizing_q1(-0.01), DomainError);
  CHECK_THROWS_AS(depolarizing_q1(1.01), DomainError);
  CHECK_THROWS_AS(depolarizing_damping_bound(1.01), DomainError);
  CHECK_THROWS_AS(depolarizing_cloning_bound(0.26), DomainError);
  CHECK_THROWS_AS(bb84_flip_bound(0.51), DomainError);
  CHECK_THROWS_AS(bb84_flip_bound(-0.01), DomainError);
}

TEST_CASE("prior hull reproduces the reference curve on the canonical grid") {
  std::vector<double> grid;
  for (int i = 0; i <= 250; ++i) grid.push_back(0.001 * i);
  std::vector<double> hull = prior_depolarizing_hull(grid);
  REQUIRE(hull.size() == grid.size());

  // Values at the deciles, cross-checked by an independent implementation.
  const double expect[11] = {1.0,         0.919086368, 0.857984162,
                             0.804196086, 0.755054943, 0.709291657,
                             0.666158083, 0.625159785, 0.585945496,
                             0.548252812, 0.511878330};
  for (int d = 0; d <= 10; ++d)
    CHECK(std::abs(hull[static_cast<size_t>(d) * 10] - expect[d]) <= 1e-9);

  // Reference curve agreement at every nonzero decile.
  const double reference[10] = {0.919086, 0.857984, 0.804196, 0.755055,
                                0.709292, 0.666158, 0.62516,  0.585945,
                                0.548253, 0.511878};
  for (int d = 1; d <= 10; ++d)
    CHECK(std::abs(hull[static_cast<size_t>(d) * 10] - reference[d - 1]) <= 1e-4);

  // Below each member, convex, and anchored at 1 for the noiseless channel.
  for (size_t i = 0; i < grid.size(); ++i) {
    const double m = std::min({depolarizing_entropic_bound(grid[i]),
                               depolarizing_damping_bound(grid[i]),
                               depolarizing_cloning_bound(grid[i])});
    CHECK(hull[i] <= m + 1e-12);
  }
  check_convex(hull, 1e-9);
  CHECK(std::abs(hull[0] - 1.0) <= 1e-15);

  // Degenerate single-point grid copies the pointwise minimum.
  std::vector<double> one = prior_depolarizing_hull({0.05});
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0] - 0.7092916565520224) <= 1e-12);
}

TEST_CASE("depolarizing sweep: canonical grid regressions and ordering") {
  std::vector<double> grid;
  for (int i = 0; i <= 250; ++i) grid.push_back(0.001 * i);
  SweepOptions opt;
  opt.workers = sweep_workers();
  SweepTable t = sweep_depolarizing(grid, opt);
  REQUIRE(t.rows.size() == grid.size());

  for (size_t i = 0; i < t.rows.size(); ++i) {
    const SweepRow& r = t.rows[i];
    CHECK(r.status == "ok");
    CHECK(std::abs(r.param - grid[i]) <= 1e-15);
    CHECK(std::abs(r.q1 - depolarizing_q1(grid[i])) <= 1e-15);
    // The full hull stays an upper bound that dominates no member.
    CHECK(r.hull <= r.eps_bound + 1e-9);
    CHECK(r.hull <= r.prior_hull + 1e-9);
    CHECK(r.q1 <= r.hull + 1e-9);
    CHECK(r.epsilon >= 0.0);
  }

  // Decile regressions for the solver-dependent columns.
  const double eps_expect[11] = {0.0,         0.000540237, 0.002186616,
                                 0.004972797, 0.008924812, 0.014060029,
                                 0.020386251, 0.027901296, 0.036592972,
                                 0.046439479, 0.057410206};
  const double ebd_expect[11] = {1.0,         0.907973372, 0.843338828,
                                 0.792587639, 0.752513086, 0.721438729,
                                 0.698260440, 0.682148067, 0.672421387,
                                 0.668490695, 0.669826306};
  const double hull_expect[11] = {1.0,         0.907973372, 0.843338828,
                                  0.792587639, 0.750142334, 0.708150208,
                                  0.666158083, 0.625159785, 0.585945496,
                                  0.548252812, 0.511878330};
  for (int d = 0; d <= 10; ++d) {
    const SweepRow& r = t.rows[static_cast<size_t>(d) * 10];
    CHECK(std::abs(r.epsilon - eps_expect[d]) <= 1e-6);
    CHECK(std::abs(r.eps_bound - ebd_expect[d]) <= 1e-6);
    CHECK(std::abs(r.hull - hull_expect[d]) <= 1e-6);
    if (d > 0) CHECK(r.epsilon > t.rows[static_cast<size_t>(d - 1) * 10].epsilon);
  }

  // Reference dotted-curve agreement holds at these deciles.
  const std::pair<size_t, double> dotted_ok[6] = {
      {10, 0.9069},  {60, 0.666158}, {70, 0.62516},
      {80, 0.585945}, {90, 0.548253}, {100, 0.511878}};
  for (const auto& [idx, v] : dotted_ok)
    CHECK(std::abs(t.rows[idx].hull - v) <= 2e-3);
  // On [0.02, 0.05] the reference dotted curve lies below the cross-validated
  // optimum of the defining optimization; the decile pins above freeze our
  // computed values, and this asserts the divergence is real, not drift.
  CHECK(t.rows[50].hull - 0.7026 > 2e-3);

  // The noiseless row is exact.
  CHECK(t.rows[0].epsilon <= 1e-9);
  CHECK(std::abs(t.rows[0].eps_bound - 1.0) <= 1e-9);
  CHECK(std::abs(t.rows[0].hull - 1.0) <= 1e-9);

  // CSV emission is byte-deterministic for a fixed table.
  const std::string p1 = temp_path("qdeg_sweep_depol_a.csv");
  const std::string p2 = temp_path("qdeg_sweep_depol_b.csv");
  emit_csv(t, p1);
  emit_csv(t, p2);
  const std::string csv = read_file(p1);
  CHECK(csv == read_file(p2));
  CHECK(csv.rfind("p,q1,epsilon,eps_bound,entropic_bound,damping_bound,"
                  "cloning_bound,prior_hull,hull,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(grid.size()) + 1);

  nlohmann::json meta = nlohmann::json::parse(read_file(p1 + ".meta.json"));
  CHECK(meta["family"] == "depolarizing");
  CHECK(meta["failed_rows"] == 0);
  CHECK(meta["grid"].size() == grid.size());
  CHECK(meta["columns"].size() == 10);
  CHECK(meta["row_seconds"].size() == grid.size());
  CHECK(std::abs(meta["solver"]["gap_tol"].get<double>() - 1e-8) <= 1e-20);
  remove_outputs(p1);
  remove_outputs(p2);
}

TEST_CASE("bb84 sweeps: symmetric pins, skewed ratios, single points") {
  SweepOptions opt;
  opt.workers = 2;

  // Symmetric flips: the flip-composition member applies.
  SweepTable sym = sweep_bb84({0.0, 0.005, 0.01, 0.02}, 1.0, opt);
  REQUIRE(sym.rows.size() == 4);
  for (const SweepRow& r : sym.rows) {
    CHECK(r.status == "ok");
    CHECK(std::abs(r.p_z - r.param) <= 1e-15);
    CHECK(std::abs(r.q1 - bb84_q1(r.param, r.p_z)) <= 1e-15);
    CHECK(std::abs(r.flip_bound - bb84_flip_bound(r.param)) <= 1e-15);
    CHECK(r.hull <= r.eps_bound + 1e-9);
    CHECK(r.hull <= r.flip_bound + 1e-9);
    CHECK(r.q1 <= r.hull + 1e-9);
    CHECK(std::isnan(r.prior_hull));
  }
  CHECK(std::abs(sym.rows[1].epsilon - 0.000403908) <= 1e-6);
  CHECK(std::abs(sym.rows[1].eps_bound - 0.912706602) <= 5e-6);
  CHECK(std::abs(sym.rows[1].hull - 0.912706602) <= 5e-6);
  CHECK(std::abs(sym.rows[2].epsilon - 0.001630491) <= 1e-6);
  CHECK(std::abs(sym.rows[2].eps_bound - 0.851046487) <= 5e-6);
  // At p = 0.02 the flip member undercuts the degradability bound.
  CHECK(std::abs(sym.rows[3].hull - bb84_flip_bound(0.02)) <= 1e-6);

  const std::string ps = temp_path("qdeg_sweep_bb84_sym.csv");
  emit_csv(sym, ps);
  const std::string scsv = read_file(ps);
  CHECK(scsv.rfind("p_x,p_z,q1,epsilon,eps_bound,flip_bound,hull,status\n",
                   0) == 0);
  nlohmann::json smeta = nlohmann::json::parse(read_file(ps + ".meta.json"));
  CHECK(smeta["family"] == "bb84");
  CHECK(std::abs(smeta["ratio"].get<double>() - 1.0) <= 1e-15);
  remove_outputs(ps);

  // Skewed ratio: no flip member, hull tracks the degradability bound.
  SweepTable skew = sweep_bb84({0.001, 0.002}, 2.0, opt);
  REQUIRE(skew.rows.size() == 2);
  for (const SweepRow& r : skew.rows) {
    CHECK(r.status == "ok");
    CHECK(std::abs(r.p_z - 2.0 * r.param) <= 1e-15);
    CHECK(std::isnan(r.flip_bound));
    CHECK(std::abs(r.hull - r.eps_bound) <= 1e-12);
  }
  const std::string pk = temp_path("qdeg_sweep_bb84_skew.csv");
  emit_csv(skew, pk);
  CHECK(read_file(pk).rfind("p_x,p_z,q1,epsilon,eps_bound,hull,status\n", 0) ==
        0);
  remove_outputs(pk);

  // Strongly asymmetric single point: the table degenerates cleanly.
  SweepTable one = sweep_bb84({0.0005}, 100.0, opt);
  REQUIRE(one.rows.size() == 1);
  const SweepRow& r = one.rows[0];
  CHECK(r.status == "ok");
  CHECK(std::abs(r.p_z - 0.05) <= 1e-15);
  CHECK(std::abs(r.q1 - 0.7073989835882121) <= 1e-12);
  CHECK(std::abs(r.epsilon - 0.000424563) <= 1e-6);
  CHECK(std::abs(r.eps_bound - 0.711100514) <= 5e-6);
  CHECK(std::abs(r.eps_bound - 0.711100458295820) <= 2e-3);
  CHECK(std::abs(r.hull - r.eps_bound) <= 1e-15);
  CHECK(std::isnan(r.flip_bound));
}

TEST_CASE("sweeps are worker-count independent") {
  std::vector<double> grid{0.0, 0.01, 0.02};
  SweepOptions one;
  one.workers = 1;
  SweepOptions three;
  three.workers = 3;
  SweepTable ta = sweep_depolarizing(grid, one);
  SweepTable tb = sweep_depolarizing(grid, three);
  const std::string pa = temp_path("qdeg_sweep_w1.csv");
  const std::string pb = temp_path("qdeg_sweep_w3.csv");
  emit_csv(ta, pa);
  emit_csv(tb, pb);
  CHECK(read_file(pa) == read_file(pb));
  remove_outputs(pa);
  remove_outputs(pb);
}

TEST_CASE("sweep validation rejects bad grids and ratios") {
  CHECK_THROWS_AS(sweep_depolarizing({0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(sweep_depolarizing({0.02, 0.01}), DomainError);
  CHECK_THROWS_AS(sweep_depolarizing({0.3}), DomainError);
  CHECK_THROWS_AS(sweep_depolarizing({-0.01, 0.1}), DomainError);
  CHECK_THROWS_AS(sweep_bb84({0.01}, 0.0), DomainError);
  CHECK_THROWS_AS(sweep_bb84({0.01}, -1.0), DomainError);
  CHECK_THROWS_AS(sweep_bb84({0.01}, 60.0), DomainError);
  CHECK_THROWS_AS(sweep_bb84({0.2, 0.1}, 1.0), DomainError);
  CHECK_THROWS_AS(sweep_bb84({0.6}, 1.0), DomainError);
}

TEST_CASE("csv emission: layout, empty cells, and failure modes") {
  // A failed row keeps its grid cell and status; value cells stay empty.
  SweepTable t;
  t.family = ChannelFamily::kDepolarizing;
  SweepRow bad;
  bad.param = 0.1;
  bad.q1 = 0.5;
  bad.status = "error";
  t.rows.push_back(bad);
  const std::string pf = temp_path("qdeg_sweep_failed.csv");
  emit_csv(t, pf);
  CHECK(read_file(pf) ==
        "p,q1,epsilon,eps_bound,entropic_bound,damping_bound,cloning_bound,"
        "prior_hull,hull,status\n"
        "0.1,0.5,,,,,,,,error\n");
  nlohmann::json fmeta = nlohmann::json::parse(read_file(pf + ".meta.json"));
  CHECK(fmeta["failed_rows"] == 1);
  remove_outputs(pf);

  // Full row layout, including the optional column.
  SweepTable u;
  u.family = ChannelFamily::kBb84;
  u.ratio = 1.0;
  u.with_u = true;
  SweepRow full;
  full.param = 0.25;
  full.p_z = 0.25;
  full.q1 = 0.5;
  full.epsilon = 0.125;
  full.eps_bound = 0.75;
  full.u_bound = 0.8125;
  full.flip_bound = 0.875;
  full.hull = 0.6875;
  u.rows.push_back(full);
  const std::string pu = temp_path("qdeg_sweep_full.csv");
  emit_csv(u, pu);
  CHECK(read_file(pu) ==
        "p_x,p_z,q1,epsilon,eps_bound,u_bound,flip_bound,hull,status\n"
        "0.25,0.25,0.5,0.125,0.75,0.8125,0.875,0.6875,ok\n");
  remove_outputs(pu);

  // An empty table writes just the header.
  SweepTable empty;
  const std::string pe = temp_path("qdeg_sweep_empty.csv");
  emit_csv(empty, pe);
  const std::string ecsv = read_file(pe);
  CHECK(std::count(ecsv.begin(), ecsv.end(), '\n') == 1);
  nlohmann::json emeta = nlohmann::json::parse(read_file(pe + ".meta.json"));
  CHECK(emeta["grid"].empty());
  remove_outputs(pe);

  CHECK_THROWS_AS(emit_csv(empty, "/nonexistent_qdeg_dir/out.csv"), IoError);
}
