#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fairprep/errors.hpp"
#include "fairprep/rng.hpp"
#include "fairprep/smc.hpp"

using namespace fairprep;

namespace {

std::int64_t sorted_union_kth(
    const std::vector<std::vector<std::int64_t>>& multisets, std::size_t k) {
  std::vector<std::int64_t> all;
  for (const auto& ms : multisets)
    all.insert(all.end(), ms.begin(), ms.end());
  std::sort(all.begin(), all.end());
  return all[k - 1];
}

}  // namespace

TEST_SUITE("smc") {

TEST_CASE("single party share of zero") {
  FieldParams field;
  Rng rng(1);
  const ShareVector sv = share(0, 1, field, rng);
  REQUIRE(sv.shares.size() == 1);
  CHECK(sv.shares[0] == 0);
  CHECK(reconstruct(sv, field) == 0);
}

TEST_CASE("share then reconstruct is the identity") {
  FieldParams field;
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t secret = rng.bounded(field.prime);
    const std::size_t parties = 1 + rng.bounded(9);
    const ShareVector sv = share(secret, parties, field, rng);
    CHECK(reconstruct(sv, field) == secret);
  }
}

TEST_CASE("sharing is deterministic under a fixed seed") {
  FieldParams field;
  Rng a(99), b(99);
  const ShareVector sa = share(123456789, 5, field, a);
  const ShareVector sb = share(123456789, 5, field, b);
  CHECK(sa.shares == sb.shares);
}

TEST_CASE("out-of-field secrets are rejected") {
  FieldParams field;
  Rng rng(3);
  CHECK_THROWS_AS(share(field.prime, 2, field, rng), DomainError);
  CHECK_THROWS_AS(share(field.prime + 17, 2, field, rng), DomainError);
}

TEST_CASE("single-share marginal looks uniform for a fixed secret") {
  // Chi-squared over 16 coarse buckets, 10^4 samples of the first share
  // of the same secret. 99.9% critical value for 15 df is 37.7.
  FieldParams field;
  Rng rng(4);
  const std::uint64_t secret = 42;
  constexpr int kBuckets = 16;
  constexpr int kSamples = 10000;
  std::array<int, kBuckets> counts{};
  for (int i = 0; i < kSamples; ++i) {
    const ShareVector sv = share(secret, 3, field, rng);
    const auto bucket = static_cast<int>(
        static_cast<double>(sv.shares[0]) /
        static_cast<double>(field.prime) * kBuckets);
    counts[std::min(bucket, kBuckets - 1)] += 1;
  }
  const double expected = static_cast<double>(kSamples) / kBuckets;
  double chi2 = 0.0;
  for (const int c : counts)
    chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 37.7);
}

TEST_CASE("secure sum reconstructs the total without revealing values") {
  FieldParams field;
  Rng rng(5);
  ProtocolTranscript transcript;
  OpCounters counters;

  const std::vector<std::uint64_t> values{3, 4, 5};
  const ShareVector sum = secure_sum(values, field, rng, transcript, counters);
  CHECK(reconstruct(sum, field) == 12);
  CHECK(counters.secure_additions == 3);

  for (const auto& entry : transcript.entries) {
    CHECK(entry.kind == EventKind::ShareMessage);
    CHECK_FALSE(entry.value.has_value());
  }
  CHECK(transcript.entries.size() == 9);  // L^2 share messages
}

TEST_CASE("secure sum of zeros is zero") {
  FieldParams field;
  Rng rng(6);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::uint64_t> values{0, 0, 0, 0};
  CHECK(reconstruct(secure_sum(values, field, rng, transcript, counters),
                    field) == 0);
}

TEST_CASE("secure sum aggregates per-party group counts") {
  FieldParams field;
  Rng rng(7);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::uint64_t> group_counts{17, 0, 5, 11};
  CHECK(reconstruct(
            secure_sum(group_counts, field, rng, transcript, counters),
            field) == 33);
}

TEST_CASE("secure comparison reveals exactly the predicate") {
  FieldParams field;
  Rng rng(8);
  ProtocolTranscript transcript;
  OpCounters counters;

  auto shares_of = [&](std::uint64_t v) {
    return share(v, 3, field, rng);
  };
  CHECK(secure_compare_lt(shares_of(5), 7, 100, field, transcript, counters));
  CHECK_FALSE(
      secure_compare_lt(shares_of(7), 7, 100, field, transcript, counters));
  CHECK_FALSE(
      secure_compare_lt(shares_of(0), 0, 100, field, transcript, counters));
  CHECK(counters.secure_comparisons == 3);

  REQUIRE(transcript.entries.size() == 3);
  CHECK(transcript.entries[0].value == 1);
  CHECK(transcript.entries[1].value == 0);
  CHECK(transcript.entries[2].value == 0);
  for (const auto& e : transcript.entries) {
    CHECK(e.kind == EventKind::ComparisonBit);
    CHECK(e.recipients == "all");
  }
}

TEST_CASE("secure comparison faults on out-of-range reconstructions") {
  FieldParams field;
  Rng rng(9);
  ProtocolTranscript transcript;
  OpCounters counters;
  const ShareVector sv = share(500, 2, field, rng);
  CHECK_THROWS_AS(
      secure_compare_lt(sv, 10, 100, field, transcript, counters),
      ProtocolFault);
}

TEST_CASE("kth ranked element of three small parties") {
  FieldParams field;
  Rng rng(10);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::vector<std::int64_t>> multisets{
      {1, 3, 5}, {2, 8}, {7}};
  CHECK(secure_kth_ranked(multisets, 3, {0, 15}, field, rng, transcript,
                          counters) == 3);
}

TEST_CASE("kth ranked element of a constant multiset") {
  FieldParams field;
  Rng rng(11);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::vector<std::int64_t>> multisets{{4, 4, 4}};
  CHECK(secure_kth_ranked(multisets, 2, {0, 15}, field, rng, transcript,
                          counters) == 4);
}

TEST_CASE("two parties with two values converge within the bound") {
  FieldParams field;
  Rng rng(12);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::vector<std::int64_t>> multisets{{10}, {20}};
  CHECK(secure_kth_ranked(multisets, 2, {0, 31}, field, rng, transcript,
                          counters) == 20);
  CHECK(counters.search_iterations <= 6);  // ceil(log2(32)) + 1
}

TEST_CASE("rank errors") {
  FieldParams field;
  Rng rng(13);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::vector<std::int64_t>> empty{{}, {}};
  CHECK_THROWS_AS(secure_kth_ranked(empty, 1, {0, 7}, field, rng, transcript,
                                    counters),
                  RankError);
  const std::vector<std::vector<std::int64_t>> some{{1, 2}, {3}};
  CHECK_THROWS_AS(secure_kth_ranked(some, 0, {0, 7}, field, rng, transcript,
                                    counters),
                  RankError);
  CHECK_THROWS_AS(secure_kth_ranked(some, 4, {0, 7}, field, rng, transcript,
                                    counters),
                  RankError);
}

TEST_CASE("elements outside the public bounds fault") {
  FieldParams field;
  Rng rng(14);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::vector<std::int64_t>> multisets{{5, 99}};
  CHECK_THROWS_AS(secure_kth_ranked(multisets, 1, {0, 31}, field, rng,
                                    transcript, counters),
                  ProtocolFault);
}

TEST_CASE("matches the sorted-union oracle on random instances") {
  FieldParams field;
  Rng rng(15);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t parties = 1 + rng.bounded(7);
    const std::int64_t lo =
        static_cast<std::int64_t>(rng.bounded(2001)) - 1000;
    const std::int64_t width = 1 + static_cast<std::int64_t>(rng.bounded(5000));
    const AttributeBounds bounds{lo, lo + width - 1};

    std::vector<std::vector<std::int64_t>> multisets(parties);
    std::size_t total = 0;
    for (auto& ms : multisets) {
      const std::size_t count = rng.bounded(30);  // empty parties allowed
      for (std::size_t i = 0; i < count; ++i)
        ms.push_back(lo + static_cast<std::int64_t>(
                              rng.bounded(static_cast<std::uint64_t>(width))));
      total += count;
    }
    if (total == 0) {
      multisets[0].push_back(lo);
      total = 1;
    }
    const std::size_t k = 1 + rng.bounded(total);

    ProtocolTranscript transcript;
    OpCounters counters;
    const std::int64_t got = secure_kth_ranked(multisets, k, bounds, field,
                                               rng, transcript, counters);
    CHECK(got == sorted_union_kth(multisets, k));

    const double range = static_cast<double>(bounds.range_size());
    CHECK(counters.search_iterations <=
          static_cast<std::uint64_t>(std::ceil(std::log2(range))) + 1);
  }
}

TEST_CASE("one search reveals only bits replayable from its output") {
  FieldParams field;
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const AttributeBounds bounds{0, 1 + static_cast<std::int64_t>(
                                        rng.bounded(4000))};
    std::vector<std::vector<std::int64_t>> multisets(1 + rng.bounded(4));
    std::size_t total = 0;
    for (auto& ms : multisets) {
      const std::size_t count = 1 + rng.bounded(20);
      for (std::size_t i = 0; i < count; ++i)
        ms.push_back(static_cast<std::int64_t>(
            rng.bounded(static_cast<std::uint64_t>(bounds.hi + 1))));
      total += count;
    }
    const std::size_t k = 1 + rng.bounded(total);

    ProtocolTranscript transcript;
    OpCounters counters;
    const std::int64_t answer = secure_kth_ranked(
        multisets, k, bounds, field, rng, transcript, counters);

    // Re-derive the expected bits by replaying a binary search that
    // knows only (bounds, answer): the "count < k" bit is guess <=
    // answer, the "count <= guess < k" bit is guess < answer.
    std::vector<std::int64_t> expected_bits;
    std::int64_t lo = bounds.lo, hi = bounds.hi;
    while (lo <= hi) {
      const std::int64_t g = lo + (hi - lo) / 2;
      expected_bits.push_back(g <= answer ? 1 : 0);
      expected_bits.push_back(g < answer ? 1 : 0);
      if (g > answer)
        hi = g - 1;
      else if (g < answer)
        lo = g + 1;
      else
        break;
    }

    std::vector<std::int64_t> revealed;
    for (const auto& e : transcript.entries) {
      if (e.kind == EventKind::ComparisonBit) {
        REQUIRE(e.value.has_value());
        revealed.push_back(*e.value);
      } else {
        // Nothing else carries a value out of a single search.
        CHECK(e.kind == EventKind::ShareMessage);
        CHECK_FALSE(e.value.has_value());
      }
    }
    CHECK(revealed == expected_bits);
    CHECK(revealed.size() == 2 * counters.search_iterations);
  }
}

TEST_CASE("transcript text round-trips") {
  FieldParams field;
  Rng rng(17);
  ProtocolTranscript transcript;
  OpCounters counters;
  const std::vector<std::vector<std::int64_t>> multisets{{1, 9}, {-4, 2}};
  secure_kth_ranked(multisets, 3, {-10, 10}, field, rng, transcript,
                    counters);
  transcript.record(transcript.begin_round(), EventKind::BinBoundary, 2,
                    "all");
  const ProtocolTranscript parsed =
      ProtocolTranscript::from_text(transcript.to_text());
  CHECK(parsed == transcript);
}

}  // TEST_SUITE
