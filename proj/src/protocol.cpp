#include "fairprep/protocol.hpp"

#include <algorithm>
#include <sstream>

#include "fairprep/errors.hpp"

namespace fairprep {

std::uint64_t PartyState::group_count(Group g) const {
  return shard.group_count(g);
}

std::vector<std::int64_t> PartyState::group_column(std::size_t attribute,
                                                   Group g) const {
  return shard.integer_column(attribute, g);
}

Shard PartyState::repair_locally(
    const std::vector<RepairParams>& params) const {
  Shard out = shard;
  for (auto& rec : out.records) {
    if (rec.group != Group::V) continue;
    for (std::size_t j = 0; j < rec.features.size(); ++j)
      rec.features[j] =
          repair_value(params[j], std::llround(rec.features[j]));
  }
  return out;
}

namespace {

constexpr Group kGroups[2] = {Group::U, Group::V};

void validate_config(const std::vector<Shard>& shards,
                     const ProtocolConfig& cfg) {
  if (cfg.parties != shards.size())
    throw ConfigError("protocol: config expects " +
                      std::to_string(cfg.parties) + " parties, got " +
                      std::to_string(shards.size()) + " shards");
  if (shards.empty()) throw ConfigError("protocol: no shards");
  if (cfg.bins < 1) throw ConfigError("protocol: bins must be >= 1");
  if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0))
    throw ConfigError("protocol: lambda must be in [0, 1]");
  if (cfg.attributes.size() != cfg.bounds.size())
    throw ConfigError("protocol: attribute/bounds count mismatch");
  if (cfg.attributes.empty())
    throw ConfigError("protocol: no attributes configured");
  for (const auto& shard : shards)
    for (const auto& rec : shard.records)
      if (rec.features.size() != cfg.attributes.size())
        throw ConfigError("protocol: record width does not match schema");
}

/// Expected comparison bits, given that the search converges to
/// `answer`: the "< k" count test is equivalent to guess <= answer, the
/// "<= guess" count test to guess < answer.
struct SearchStep {
  std::int64_t guess;
  bool less_below_k;
  bool leq_below_k;
};

std::vector<SearchStep> replay_search(AttributeBounds bounds,
                                      std::int64_t answer) {
  std::vector<SearchStep> steps;
  std::int64_t lo = bounds.lo;
  std::int64_t hi = bounds.hi;
  while (lo <= hi) {
    const std::int64_t guess = lo + (hi - lo) / 2;
    SearchStep step{guess, guess <= answer, guess < answer};
    steps.push_back(step);
    if (!step.less_below_k)
      hi = guess - 1;
    else if (step.leq_below_k)
      lo = guess + 1;
    else
      return steps;
  }
  return steps;  // unreachable for answer within bounds
}

}  // namespace

PreprocessResult run_preprocess(const std::vector<Shard>& shards,
                                const ProtocolConfig& cfg) {
  validate_config(shards, cfg);

  std::vector<PartyState> parties;
  parties.reserve(shards.size());
  for (const auto& shard : shards)
    parties.push_back({shard.owner, shard});

  // Group sizes are known to the harness up front; reject impossible
  // bin counts before anything is exchanged.
  std::uint64_t group_totals[2] = {0, 0};
  for (const auto& party : parties)
    for (int s = 0; s < 2; ++s)
      group_totals[s] += party.group_count(kGroups[s]);
  const std::uint64_t smallest =
      std::min(group_totals[0], group_totals[1]);
  if (static_cast<std::uint64_t>(cfg.bins) > smallest)
    throw ConfigError("protocol: " + std::to_string(cfg.bins) +
                      " bins exceed the smaller group size " +
                      std::to_string(smallest));

  PreprocessResult result;
  ProtocolTranscript& transcript = result.transcript;
  OpCounters& counters = result.counters;
  FieldParams field;
  field.ensure_supports(group_totals[0] + group_totals[1]);
  Rng rng(cfg.seed);

  // Round 0: echo the pre-agreed public parameters for audit tooling.
  {
    const std::uint32_t round = transcript.begin_round();
    transcript.record(round, EventKind::PublicParam, cfg.bins, "all");
    transcript.record(round, EventKind::PublicParam,
                      static_cast<std::int64_t>(cfg.parties), "all");
    transcript.record(round, EventKind::PublicParam, cfg.digits, "all");
    transcript.record(round, EventKind::PublicParam,
                      static_cast<std::int64_t>(cfg.attributes.size()),
                      "all");
    for (const auto& b : cfg.bounds) {
      transcript.record(round, EventKind::PublicParam, b.lo, "all");
      transcript.record(round, EventKind::PublicParam, b.hi, "all");
    }
  }

  // Each party publishes its per-group sizes; the totals come out of a
  // secure sum and are revealed.
  for (int s = 0; s < 2; ++s) {
    const std::uint32_t round = transcript.begin_round();
    std::vector<std::uint64_t> local_counts;
    for (const auto& party : parties) {
      local_counts.push_back(party.group_count(kGroups[s]));
      transcript.record(round, EventKind::PartyGroupSize,
                        static_cast<std::int64_t>(local_counts.back()),
                        "all");
    }
    const ShareVector total_shares =
        secure_sum(local_counts, field, rng, transcript, counters);
    const std::uint64_t revealed = reconstruct(total_shares, field);
    if (revealed != group_totals[s])
      throw ProtocolFault("protocol: group total mismatch");
    transcript.record(transcript.begin_round(), EventKind::GroupTotal,
                      static_cast<std::int64_t>(revealed), "all");
  }

  // All boundaries for both groups, attribute by attribute. Each rank
  // needs one secure k-th ranked element: the B lower boundaries are
  // the (k_{i-1}+1)-th ranked elements, the last boundary the maximum.
  result.specs.resize(cfg.attributes.size());
  for (std::size_t j = 0; j < cfg.attributes.size(); ++j) {
    for (int s = 0; s < 2; ++s) {
      const Group group = kGroups[s];
      const BinIndexPlan plan = plan_indices(group_totals[s], cfg.bins);

      std::vector<std::vector<std::int64_t>> multisets;
      multisets.reserve(parties.size());
      for (const auto& party : parties)
        multisets.push_back(party.group_column(j, group));

      std::vector<std::uint64_t> ranks;
      for (int i = 1; i <= cfg.bins; ++i)
        ranks.push_back(static_cast<std::uint64_t>(plan.k[i - 1]) + 1);
      ranks.push_back(group_totals[s]);

      BinSpec spec;
      spec.group = group;
      spec.attribute = cfg.attributes[j];
      spec.bins = cfg.bins;
      for (const std::uint64_t rank : ranks) {
        const std::int64_t boundary =
            secure_kth_ranked(multisets, rank, cfg.bounds[j], field, rng,
                              transcript, counters);
        spec.boundaries.push_back(boundary);
        transcript.record(transcript.begin_round(), EventKind::BinBoundary,
                          boundary, "all");
      }
      (group == Group::U ? result.specs[j].u : result.specs[j].v) =
          std::move(spec);
    }
  }

  // Local repair: each party transforms its own V records from the
  // broadcast boundaries; nothing further is exchanged.
  std::vector<RepairParams> params;
  params.reserve(cfg.attributes.size());
  for (const auto& spec : result.specs) {
    RepairParams p{cfg.lambda, spec.u, spec.v, cfg.digits};
    p.validate();
    params.push_back(std::move(p));
  }
  result.repaired_shards.reserve(parties.size());
  for (const auto& party : parties)
    result.repaired_shards.push_back(party.repair_locally(params));

  return result;
}

namespace {

/// Sequential reader over transcript entries with positional checks.
class TranscriptReader {
 public:
  explicit TranscriptReader(const ProtocolTranscript& t,
                            std::vector<std::string>& findings)
      : entries_(t.entries), findings_(findings) {}

  bool done() const { return pos_ >= entries_.size(); }
  std::size_t position() const { return pos_; }

  const TranscriptEntry* expect(EventKind kind) {
    if (pos_ >= entries_.size()) {
      findings_.push_back("entry " + std::to_string(pos_) +
                          ": transcript ends where " +
                          std::string(event_kind_name(kind)) + " expected");
      return nullptr;
    }
    const TranscriptEntry& e = entries_[pos_];
    if (e.kind != kind) {
      findings_.push_back("entry " + std::to_string(pos_) + ": found " +
                          event_kind_name(e.kind) + " where " +
                          event_kind_name(kind) + " expected");
      return nullptr;
    }
    ++pos_;
    return &e;
  }

  /// Message-flow entries are sanctioned only when they carry no value.
  bool expect_flow(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const TranscriptEntry* e = expect(EventKind::ShareMessage);
      if (!e) return false;
      if (e->value) {
        findings_.push_back("entry " + std::to_string(pos_ - 1) +
                            ": share_message carries a plaintext value " +
                            std::to_string(*e->value));
        return false;
      }
    }
    return true;
  }

  std::optional<std::int64_t> expect_value(EventKind kind) {
    const TranscriptEntry* e = expect(kind);
    if (!e) return std::nullopt;
    if (!e->value) {
      findings_.push_back("entry " + std::to_string(pos_ - 1) + ": " +
                          std::string(event_kind_name(kind)) +
                          " carries no value");
      return std::nullopt;
    }
    return e->value;
  }

  /// Peek ahead for the value of the next entry of `kind`, without
  /// moving. Used to learn a search's answer before replaying it.
  std::optional<std::int64_t> peek_value(EventKind kind) const {
    for (std::size_t i = pos_; i < entries_.size(); ++i)
      if (entries_[i].kind == kind) return entries_[i].value;
    return std::nullopt;
  }

 private:
  const std::vector<TranscriptEntry>& entries_;
  std::vector<std::string>& findings_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string AuditReport::summary() const {
  std::ostringstream out;
  out << (passed ? "PASS" : "FAIL") << ": leakage audit\n";
  for (const auto& [kind, count] : entries_by_kind)
    out << "  " << kind << ": " << count << "\n";
  for (const auto& finding : findings) out << "  finding: " << finding << "\n";
  return out.str();
}

AuditReport audit_leakage(const ProtocolTranscript& transcript) {
  AuditReport report;
  for (const auto& e : transcript.entries)
    ++report.entries_by_kind[event_kind_name(e.kind)];

  TranscriptReader reader(transcript, report.findings);

  // Public parameters: bins, parties, digits, attribute count, then one
  // bounds pair per attribute.
  const auto bins = reader.expect_value(EventKind::PublicParam);
  const auto parties = reader.expect_value(EventKind::PublicParam);
  reader.expect_value(EventKind::PublicParam);  // digits (unused here)
  const auto attr_count = reader.expect_value(EventKind::PublicParam);
  if (!bins || !parties || !attr_count || *bins < 1 || *parties < 1 ||
      *attr_count < 1) {
    report.findings.push_back("transcript lacks a valid public header");
    report.passed = false;
    return report;
  }
  std::vector<AttributeBounds> bounds;
  for (std::int64_t j = 0; j < *attr_count; ++j) {
    const auto lo = reader.expect_value(EventKind::PublicParam);
    const auto hi = reader.expect_value(EventKind::PublicParam);
    if (!lo || !hi || *lo > *hi) {
      report.findings.push_back("bad public bounds for attribute " +
                                std::to_string(j));
      report.passed = false;
      return report;
    }
    bounds.push_back({*lo, *hi});
  }
  const auto n_parties = static_cast<std::size_t>(*parties);

  // Group sizes: per-party counts, the flow of their secure sum, and a
  // total that must equal the published counts' sum.
  std::uint64_t group_totals[2] = {0, 0};
  for (int s = 0; s < 2 && report.findings.empty(); ++s) {
    std::uint64_t published_sum = 0;
    for (std::size_t p = 0; p < n_parties; ++p) {
      const auto size = reader.expect_value(EventKind::PartyGroupSize);
      if (!size) break;
      if (*size < 0) {
        report.findings.push_back("negative party group size");
        break;
      }
      published_sum += static_cast<std::uint64_t>(*size);
    }
    if (!report.findings.empty()) break;
    if (!reader.expect_flow(n_parties * n_parties)) break;
    const auto total = reader.expect_value(EventKind::GroupTotal);
    if (!total) break;
    if (static_cast<std::uint64_t>(*total) != published_sum)
      report.findings.push_back(
          "group total " + std::to_string(*total) +
          " inconsistent with published party sizes summing to " +
          std::to_string(published_sum));
    group_totals[s] = published_sum;
  }

  // Every boundary search: the comparison bits must be exactly the ones
  // a binary search pinned to the published boundary would reveal, so
  // they carry no information beyond the boundary itself.
  for (std::int64_t j = 0; j < *attr_count && report.findings.empty(); ++j) {
    for (int s = 0; s < 2 && report.findings.empty(); ++s) {
      try {
        (void)plan_indices(group_totals[s], static_cast<int>(*bins));
      } catch (const PlanError&) {
        report.findings.push_back("group size " +
                                  std::to_string(group_totals[s]) +
                                  " cannot host " + std::to_string(*bins) +
                                  " bins");
        break;
      }
      const std::size_t invocations = static_cast<std::size_t>(*bins) + 1;
      for (std::size_t i = 0; i < invocations && report.findings.empty();
           ++i) {
        const auto answer = reader.peek_value(EventKind::BinBoundary);
        if (!answer) {
          report.findings.push_back(
              "entry " + std::to_string(reader.position()) +
              ": no bin boundary follows the search that needs one");
          break;
        }
        if (*answer < bounds[j].lo || *answer > bounds[j].hi) {
          report.findings.push_back("bin boundary " +
                                    std::to_string(*answer) +
                                    " outside public bounds");
          break;
        }
        const auto steps = replay_search(bounds[j], *answer);
        for (const SearchStep& step : steps) {
          if (!reader.expect_flow(2 * n_parties * n_parties)) break;
          const auto bit1 = reader.expect_value(EventKind::ComparisonBit);
          const auto bit2 = reader.expect_value(EventKind::ComparisonBit);
          if (!bit1 || !bit2) break;
          if ((*bit1 != 0 && *bit1 != 1) || (*bit2 != 0 && *bit2 != 1)) {
            report.findings.push_back(
                "entry " + std::to_string(reader.position() - 1) +
                ": comparison bit outside {0, 1}");
            break;
          }
          if ((*bit1 == 1) != step.less_below_k ||
              (*bit2 == 1) != step.leq_below_k) {
            report.findings.push_back(
                "entry " + std::to_string(reader.position() - 1) +
                ": comparison bits not derivable from the published "
                "boundary at guess " +
                std::to_string(step.guess));
            break;
          }
        }
        if (!report.findings.empty()) break;
        reader.expect_value(EventKind::BinBoundary);
      }
    }
  }

  if (report.findings.empty() && !reader.done())
    report.findings.push_back(
        "entry " + std::to_string(reader.position()) +
        ": unexpected entry after the protocol's final broadcast");

  report.passed = report.findings.empty();
  return report;
}

}  // namespace fairprep
