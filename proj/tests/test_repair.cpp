#include <doctest.h>

#include <cmath>

#include "fairprep/binning.hpp"
#include "fairprep/errors.hpp"
#include "fairprep/repair.hpp"
#include "fairprep/rng.hpp"

using namespace fairprep;

namespace {

RepairParams make_params(double lambda, std::vector<std::int64_t> u_values,
                         std::vector<std::int64_t> v_values, int bins) {
  RepairParams p;
  p.lambda = lambda;
  p.spec_u = compute_boundaries_centralized(u_values, bins, Group::U, "x");
  p.spec_v = compute_boundaries_centralized(v_values, bins, Group::V, "x");
  return p;
}

}  // namespace

TEST_SUITE("repair") {

TEST_CASE("lambda zero is the identity for any input") {
  const RepairParams p =
      make_params(0.0, {0, 10, 20, 30, 40, 50}, {100, 120, 140, 160}, 2);
  for (const std::int64_t x : {100L, 137L, 160L, -999L, 5000L})
    CHECK(repair_value(p, x) == static_cast<double>(x));
}

TEST_CASE("full repair maps V bin minima onto U bin minima") {
  const RepairParams p =
      make_params(1.0, {0, 10, 20, 30, 40, 50}, {100, 120, 130, 145, 160, 170},
                  3);
  for (int i = 1; i <= 3; ++i)
    CHECK(repair_value(p, p.spec_v.lower(i)) ==
          static_cast<double>(p.spec_u.lower(i)));
  // The overall maximum maps onto the U maximum.
  CHECK(repair_value(p, p.spec_v.boundaries.back()) ==
        static_cast<double>(p.spec_u.boundaries.back()));
}

TEST_CASE("a constant V bin maps to the middle of the U bin") {
  // All V values equal: every bin is degenerate.
  const RepairParams p = make_params(1.0, {0, 10, 20, 30}, {7, 7, 7, 7}, 2);
  const double expected =
      (static_cast<double>(p.spec_u.lower(2)) + p.spec_u.upper(2)) / 2.0;
  CHECK(repair_value(p, 7) == expected);
}

TEST_CASE("repair is linear in lambda") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::int64_t> u, v;
    const std::size_t nu = 4 + rng.bounded(40);
    const std::size_t nv = 4 + rng.bounded(40);
    for (std::size_t i = 0; i < nu; ++i)
      u.push_back(static_cast<std::int64_t>(rng.bounded(1000)));
    for (std::size_t i = 0; i < nv; ++i)
      v.push_back(static_cast<std::int64_t>(rng.bounded(1000)) + 500);
    const int bins = 1 + static_cast<int>(rng.bounded(4));
    const double lambda = rng.uniform01();
    const RepairParams p0 = make_params(0.0, u, v, bins);
    const RepairParams p1 = make_params(1.0, u, v, bins);
    const RepairParams pl = make_params(lambda, u, v, bins);
    const std::int64_t x =
        static_cast<std::int64_t>(rng.bounded(2200)) - 100;
    const double expected = (1.0 - lambda) * repair_value(p0, x) +
                            lambda * repair_value(p1, x);
    CHECK(repair_value(pl, x) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("repair is monotone within a bin") {
  Rng rng(67);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> u, v;
    for (int i = 0; i < 30; ++i) {
      u.push_back(static_cast<std::int64_t>(rng.bounded(500)));
      v.push_back(static_cast<std::int64_t>(rng.bounded(500)));
    }
    const int bins = 1 + static_cast<int>(rng.bounded(5));
    const RepairParams p = make_params(rng.uniform01(), u, v, bins);
    for (int bin = 1; bin <= bins; ++bin) {
      const std::int64_t lo = p.spec_v.lower(bin);
      const std::int64_t hi = p.spec_v.upper(bin);
      double prev = repair_value(p, lo);
      for (std::int64_t x = lo; x <= hi; x += std::max<std::int64_t>(1, (hi - lo) / 7)) {
        const double y = repair_value(p, x);
        CHECK(y >= prev - 1e-9);
        prev = y;
      }
    }
  }
}

TEST_CASE("full repair lands inside the matching U bin") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> u, v;
    for (int i = 0; i < 25; ++i) {
      u.push_back(static_cast<std::int64_t>(rng.bounded(300)) - 150);
      v.push_back(static_cast<std::int64_t>(rng.bounded(300)));
    }
    const int bins = 1 + static_cast<int>(rng.bounded(4));
    const RepairParams p = make_params(1.0, u, v, bins);
    for (const std::int64_t x : v) {
      const int bin = locate_bin(p.spec_v, x);
      const double y = repair_value(p, x);
      CHECK(y >= static_cast<double>(p.spec_u.lower(bin)) - 1e-9);
      CHECK(y <= static_cast<double>(p.spec_u.upper(bin)) + 1e-9);
    }
  }
}

TEST_CASE("out-of-range values are clamped before full repair") {
  const RepairParams p =
      make_params(1.0, {0, 10, 20, 30}, {100, 110, 120, 130}, 2);
  CHECK(repair_value(p, 90) == 0.0);    // below V range -> U minimum
  CHECK(repair_value(p, 500) == 30.0);  // above V range -> U maximum
}

TEST_CASE("repair_dataset touches only group V") {
  Dataset ds;
  ds.schema = {"a", "b"};
  ds.records = {
      {{5.0, 50.0}, Group::U, 1},
      {{6.0, 60.0}, Group::V, 0},
      {{7.0, 70.0}, Group::U, 0},
      {{8.0, 80.0}, Group::V, 1},
  };
  std::vector<RepairParams> params = {
      make_params(1.0, {0, 1, 2, 3}, {5, 6, 7, 8}, 2),
      make_params(1.0, {0, 10, 20, 30}, {50, 60, 70, 80}, 2),
  };
  params[0].spec_u.attribute = params[0].spec_v.attribute = "a";
  params[1].spec_u.attribute = params[1].spec_v.attribute = "b";
  const Dataset out = repair_dataset(params, ds);

  REQUIRE(out.n() == 4);
  CHECK(out.records[0].features == ds.records[0].features);
  CHECK(out.records[2].features == ds.records[2].features);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(out.records[i].group == ds.records[i].group);
    CHECK(out.records[i].label == ds.records[i].label);
  }
  // Each column matches the scalar routine applied independently.
  CHECK(out.records[1].features[0] == repair_value(params[0], 6));
  CHECK(out.records[1].features[1] == repair_value(params[1], 60));
  CHECK(out.records[3].features[0] == repair_value(params[0], 8));
  CHECK(out.records[3].features[1] == repair_value(params[1], 80));
}

TEST_CASE("repair_dataset with lambda zero returns the input") {
  Dataset ds;
  ds.schema = {"a"};
  ds.records = {{{3.0}, Group::V, 1}, {{9.0}, Group::U, 0}};
  std::vector<RepairParams> params = {
      make_params(0.0, {1, 2, 3}, {3, 9, 12}, 2)};
  params[0].spec_u.attribute = params[0].spec_v.attribute = "a";
  const Dataset out = repair_dataset(params, ds);
  for (std::size_t i = 0; i < ds.n(); ++i)
    CHECK(out.records[i].features == ds.records[i].features);
}

TEST_CASE("all-U datasets are untouched") {
  Dataset ds;
  ds.schema = {"a"};
  ds.records = {{{3.0}, Group::U, 1}, {{9.0}, Group::U, 0}};
  std::vector<RepairParams> params = {
      make_params(1.0, {1, 2, 3}, {3, 9, 12}, 2)};
  params[0].spec_u.attribute = params[0].spec_v.attribute = "a";
  const Dataset out = repair_dataset(params, ds);
  for (std::size_t i = 0; i < ds.n(); ++i)
    CHECK(out.records[i].features == ds.records[i].features);
}

TEST_CASE("repair_dataset validates parameter alignment") {
  Dataset ds;
  ds.schema = {"a", "b"};
  ds.records = {{{1.0, 2.0}, Group::V, 0}};
  std::vector<RepairParams> too_few = {
      make_params(0.5, {1, 2}, {3, 4}, 1)};
  CHECK_THROWS_AS(repair_dataset(too_few, ds), ConfigError);

  std::vector<RepairParams> mismatched_bins(2);
  mismatched_bins[0] = make_params(0.5, {1, 2}, {3, 4}, 1);
  mismatched_bins[1] = make_params(0.5, {1, 2}, {3, 4}, 1);
  mismatched_bins[1].spec_u = compute_boundaries_centralized(
      std::vector<std::int64_t>{1, 2, 3}, 2, Group::U, "");
  CHECK_THROWS_AS(repair_dataset(mismatched_bins, ds), ConfigError);

  RepairParams bad_lambda = make_params(0.5, {1, 2}, {3, 4}, 1);
  bad_lambda.lambda = 1.5;
  CHECK_THROWS_AS(bad_lambda.validate(), ConfigError);
}

}  // TEST_SUITE
