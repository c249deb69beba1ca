#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fairprep/binning.hpp"
#include "fairprep/errors.hpp"
#include "fairprep/rng.hpp"

using namespace fairprep;

TEST_SUITE("binning") {

TEST_CASE("index plan splits ten values into three bins") {
  const BinIndexPlan plan = plan_indices(10, 3);
  CHECK(plan.k == std::vector<std::size_t>{0, 4, 7, 10});
  CHECK(plan.quotient() == 3);
  CHECK(plan.remainder() == 1);
}

TEST_CASE("index plan with zero remainder") {
  CHECK(plan_indices(6, 3).k == std::vector<std::size_t>{0, 2, 4, 6});
}

TEST_CASE("index plan with singleton bins") {
  CHECK(plan_indices(7, 7).k ==
        std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("index plan rejects impossible bin counts") {
  CHECK_THROWS_AS(plan_indices(5, 6), PlanError);
  CHECK_THROWS_AS(plan_indices(5, 0), PlanError);
  CHECK_THROWS_AS(plan_indices(5, -1), PlanError);
}

TEST_CASE("index plan gaps are quotient-sized with remainder-many larger") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.bounded(500);
    const int bins = 1 + static_cast<int>(rng.bounded(n));
    const BinIndexPlan plan = plan_indices(n, bins);
    REQUIRE(plan.k.size() == static_cast<std::size_t>(bins) + 1);
    CHECK(plan.k.front() == 0);
    CHECK(plan.k.back() == n);
    std::size_t larger = 0;
    for (int i = 1; i <= bins; ++i) {
      const std::size_t gap = plan.k[i] - plan.k[i - 1];
      const bool valid = gap == plan.quotient() || gap == plan.quotient() + 1;
      CHECK(valid);
      if (gap == plan.quotient() + 1) {
        ++larger;
        CHECK(static_cast<std::size_t>(i) <= plan.remainder());
      }
    }
    CHECK(larger == plan.remainder());
  }
}

TEST_CASE("boundaries of a small multiset") {
  const std::vector<std::int64_t> values{5, 1, 3, 2, 4, 6};
  const BinSpec spec = compute_boundaries_centralized(values, 3);
  CHECK(spec.boundaries == std::vector<std::int64_t>{1, 3, 5, 6});
}

TEST_CASE("boundaries of a constant multiset collapse") {
  const std::vector<std::int64_t> values{7, 7, 7, 7};
  const BinSpec spec = compute_boundaries_centralized(values, 2);
  CHECK(spec.boundaries == std::vector<std::int64_t>{7, 7, 7});
}

TEST_CASE("boundaries of one through ten") {
  std::vector<std::int64_t> values(10);
  std::iota(values.begin(), values.end(), 1);
  const BinSpec spec = compute_boundaries_centralized(values, 3);
  CHECK(spec.boundaries == std::vector<std::int64_t>{1, 5, 8, 10});
}

TEST_CASE("boundaries are permutation invariant") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> values;
    const std::size_t n = 2 + rng.bounded(60);
    for (std::size_t i = 0; i < n; ++i)
      values.push_back(static_cast<std::int64_t>(rng.bounded(20)) - 10);
    const int bins = 1 + static_cast<int>(rng.bounded(n));
    const BinSpec reference = compute_boundaries_centralized(values, bins);
    std::vector<std::int64_t> shuffled = values;
    rng.shuffle(shuffled);
    const BinSpec again = compute_boundaries_centralized(shuffled, bins);
    CHECK(reference.boundaries == again.boundaries);
    CHECK(std::is_sorted(reference.boundaries.begin(),
                         reference.boundaries.end()));
  }
}

TEST_CASE("bin sizes induced by the plan are floor or ceil of n over B") {
  Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.bounded(200);
    const int bins = 1 + static_cast<int>(rng.bounded(n));
    const BinIndexPlan plan = plan_indices(n, bins);
    for (int i = 1; i <= bins; ++i) {
      const std::size_t size = plan.k[i] - plan.k[i - 1];
      CHECK(size >= n / static_cast<std::size_t>(bins));
      CHECK(size <= (n + static_cast<std::size_t>(bins) - 1) /
                        static_cast<std::size_t>(bins));
    }
  }
}

TEST_CASE("locate_bin owns boundaries and clamps") {
  BinSpec spec;
  spec.bins = 3;
  spec.boundaries = {1, 5, 8, 10};
  CHECK(locate_bin(spec, 5) == 2);
  CHECK(locate_bin(spec, 10) == 3);
  CHECK(locate_bin(spec, -4) == 1);
  CHECK(locate_bin(spec, 99) == 3);
  CHECK(locate_bin(spec, 1) == 1);
  CHECK(locate_bin(spec, 4) == 1);
  CHECK(locate_bin(spec, 8) == 3);
  CHECK(locate_bin(spec, 7) == 2);
}

TEST_CASE("locate_bin maps strictly increasing boundaries to their bins") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    BinSpec spec;
    spec.bins = 1 + static_cast<int>(rng.bounded(12));
    std::int64_t x = static_cast<std::int64_t>(rng.bounded(10));
    for (int i = 0; i <= spec.bins; ++i) {
      spec.boundaries.push_back(x);
      x += 1 + static_cast<std::int64_t>(rng.bounded(9));
    }
    for (int i = 1; i <= spec.bins; ++i)
      CHECK(locate_bin(spec, spec.boundaries[i - 1]) == i);
  }
}

TEST_CASE("duplicates land in the highest matching bin") {
  // Equal consecutive boundaries: values equal to them resolve upward.
  BinSpec spec;
  spec.bins = 3;
  spec.boundaries = {2, 2, 2, 9};
  CHECK(locate_bin(spec, 2) == 3);
  CHECK(locate_bin(spec, 5) == 3);
}

TEST_CASE("centralized boundaries reject empty input and bad bins") {
  const std::vector<std::int64_t> empty;
  CHECK_THROWS_AS(compute_boundaries_centralized(empty, 1), PlanError);
  const std::vector<std::int64_t> three{1, 2, 3};
  CHECK_THROWS_AS(compute_boundaries_centralized(three, 4), PlanError);
}

}  // TEST_SUITE
