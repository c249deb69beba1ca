#include "fairprep/smc.hpp"

#include <algorithm>
#include <sstream>

#include "fairprep/errors.hpp"

namespace fairprep {

void FieldParams::ensure_supports(std::uint64_t max_count) const {
  if (prime <= 2 * max_count)
    throw DomainError("field: prime " + std::to_string(prime) +
                      " too small for counts up to " +
                      std::to_string(max_count));
}

std::uint64_t reconstruct(const ShareVector& sv, const FieldParams& field) {
  std::uint64_t total = 0;
  for (const std::uint64_t s : sv.shares) total = field.add(total, s);
  return total;
}

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::PublicParam: return "public_param";
    case EventKind::PartyGroupSize: return "party_group_size";
    case EventKind::GroupTotal: return "group_total";
    case EventKind::ShareMessage: return "share_message";
    case EventKind::ComparisonBit: return "comparison_bit";
    case EventKind::BinBoundary: return "bin_boundary";
  }
  return "unknown";
}

namespace {

EventKind event_kind_from_name(const std::string& name) {
  if (name == "public_param") return EventKind::PublicParam;
  if (name == "party_group_size") return EventKind::PartyGroupSize;
  if (name == "group_total") return EventKind::GroupTotal;
  if (name == "share_message") return EventKind::ShareMessage;
  if (name == "comparison_bit") return EventKind::ComparisonBit;
  if (name == "bin_boundary") return EventKind::BinBoundary;
  throw Error("transcript: unknown event kind: " + name);
}

}  // namespace

void ProtocolTranscript::record(std::uint32_t round, EventKind kind,
                                std::optional<std::int64_t> value,
                                std::string recipients) {
  entries.push_back({round, kind, value, std::move(recipients)});
}

std::string ProtocolTranscript::to_text() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << e.round << '\t' << event_kind_name(e.kind) << '\t';
    if (e.value)
      out << *e.value;
    else
      out << '-';
    out << '\t' << e.recipients << '\n';
  }
  return out.str();
}

ProtocolTranscript ProtocolTranscript::from_text(const std::string& text) {
  ProtocolTranscript t;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string round_str, kind_str, value_str, recipients;
    if (!std::getline(cells, round_str, '\t') ||
        !std::getline(cells, kind_str, '\t') ||
        !std::getline(cells, value_str, '\t') ||
        !std::getline(cells, recipients))
      throw Error("transcript: malformed line " + std::to_string(line_no));
    TranscriptEntry e;
    e.round = static_cast<std::uint32_t>(std::stoul(round_str));
    e.kind = event_kind_from_name(kind_str);
    if (value_str != "-") e.value = std::stoll(value_str);
    e.recipients = recipients;
    t.entries.push_back(std::move(e));
    t.round_counter = std::max(t.round_counter, t.entries.back().round + 1);
  }
  return t;
}

ShareVector share(std::uint64_t secret, std::size_t parties,
                  const FieldParams& field, Rng& rng) {
  if (secret >= field.prime)
    throw DomainError("share: secret " + std::to_string(secret) +
                      " outside [0, p)");
  if (parties < 1) throw DomainError("share: need at least one party");
  ShareVector sv;
  sv.shares.resize(parties);
  std::uint64_t partial = 0;
  for (std::size_t i = 0; i + 1 < parties; ++i) {
    sv.shares[i] = rng.bounded(field.prime);
    partial = field.add(partial, sv.shares[i]);
  }
  sv.shares[parties - 1] = field.sub(secret, partial);
  return sv;
}

ShareVector secure_sum(std::span<const std::uint64_t> local_values,
                       const FieldParams& field, Rng& rng,
                       ProtocolTranscript& transcript, OpCounters& counters) {
  const std::size_t parties = local_values.size();
  const std::uint32_t round = transcript.begin_round();
  ShareVector result;
  result.shares.assign(parties, 0);
  for (std::size_t sender = 0; sender < parties; ++sender) {
    const ShareVector split = share(local_values[sender], parties, field, rng);
    for (std::size_t recipient = 0; recipient < parties; ++recipient) {
      Envelope env{round, sender, recipient, Envelope::Payload::Share,
                   {split.shares[recipient]}};
      result.shares[env.recipient] =
          field.add(result.shares[env.recipient], env.elements[0]);
      transcript.record(round, EventKind::ShareMessage, std::nullopt,
                        "P" + std::to_string(recipient));
    }
  }
  counters.secure_additions += parties;
  return result;
}

bool secure_compare_lt(const ShareVector& shared, std::uint64_t threshold,
                       std::uint64_t declared_max, const FieldParams& field,
                       ProtocolTranscript& transcript, OpCounters& counters) {
  const std::uint64_t value = reconstruct(shared, field);
  if (value > declared_max)
    throw ProtocolFault("secure_compare: reconstructed value " +
                        std::to_string(value) + " outside declared range [0, " +
                        std::to_string(declared_max) + "]");
  const bool bit = value < threshold;
  counters.secure_comparisons += 1;
  transcript.record(transcript.begin_round(), EventKind::ComparisonBit,
                    bit ? 1 : 0, "all");
  return bit;
}

std::int64_t secure_kth_ranked(
    std::span<const std::vector<std::int64_t>> party_multisets,
    std::uint64_t k, AttributeBounds bounds, const FieldParams& field,
    Rng& rng, ProtocolTranscript& transcript, OpCounters& counters) {
  std::uint64_t total = 0;
  for (const auto& ms : party_multisets) total += ms.size();
  if (total == 0) throw RankError("kth_ranked: empty union multiset");
  if (k < 1 || k > total)
    throw RankError("kth_ranked: rank " + std::to_string(k) +
                    " outside [1, " + std::to_string(total) + "]");
  field.ensure_supports(total);

  std::vector<std::vector<std::int64_t>> sorted(party_multisets.begin(),
                                                party_multisets.end());
  for (auto& ms : sorted) {
    std::sort(ms.begin(), ms.end());
    if (!ms.empty() && (ms.front() < bounds.lo || ms.back() > bounds.hi))
      throw ProtocolFault("kth_ranked: element outside public bounds [" +
                          std::to_string(bounds.lo) + ", " +
                          std::to_string(bounds.hi) + "]");
  }

  counters.kth_invocations += 1;
  const std::size_t parties = sorted.size();
  std::vector<std::uint64_t> count_less(parties), count_leq(parties);

  std::int64_t lo = bounds.lo;
  std::int64_t hi = bounds.hi;
  while (lo <= hi) {
    counters.search_iterations += 1;
    const std::int64_t guess = lo + (hi - lo) / 2;
    for (std::size_t p = 0; p < parties; ++p) {
      count_less[p] = static_cast<std::uint64_t>(
          std::lower_bound(sorted[p].begin(), sorted[p].end(), guess) -
          sorted[p].begin());
      count_leq[p] = static_cast<std::uint64_t>(
          std::upper_bound(sorted[p].begin(), sorted[p].end(), guess) -
          sorted[p].begin());
    }
    const ShareVector sum_less =
        secure_sum(count_less, field, rng, transcript, counters);
    const ShareVector sum_leq =
        secure_sum(count_leq, field, rng, transcript, counters);
    const bool less_below_k =
        secure_compare_lt(sum_less, k, total, field, transcript, counters);
    const bool leq_below_k =
        secure_compare_lt(sum_leq, k, total, field, transcript, counters);
    if (!less_below_k) {
      hi = guess - 1;  // at least k elements below the guess
    } else if (leq_below_k) {
      lo = guess + 1;  // fewer than k elements at or below the guess
    } else {
      return guess;
    }
  }
  throw ProtocolFault("kth_ranked: search exhausted without an answer");
}

}  // namespace fairprep
