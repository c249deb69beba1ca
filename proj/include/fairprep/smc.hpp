#ifndef FAIRPREP_SMC_HPP
#define FAIRPREP_SMC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairprep/dataset.hpp"
#include "fairprep/rng.hpp"

namespace fairprep {

/// Public prime modulus for additive sharing. Counts shared during the
/// protocol stay far below the modulus, so reconstructed sums are exact
/// integers and never wrap.
struct FieldParams {
  std::uint64_t prime = (std::uint64_t{1} << 61) - 1;  // Mersenne prime

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    return (a + b) % prime;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return (a + prime - b) % prime;
  }
  /// Counts up to `max_count` must embed injectively with room for sums.
  void ensure_supports(std::uint64_t max_count) const;
};

/// One additive share per party; the shares sum to the secret mod p.
struct ShareVector {
  std::vector<std::uint64_t> shares;

  std::size_t parties() const { return shares.size(); }
};

std::uint64_t reconstruct(const ShareVector& sv, const FieldParams& field);

/// Everything a party learns beyond its own input, in protocol order.
enum class EventKind : std::uint8_t {
  PublicParam,     // pre-agreed run parameter echoed for audit tooling
  PartyGroupSize,  // one party's group count, published to everyone
  GroupTotal,      // a group's total size, output of a secure sum
  ShareMessage,    // a share in transit; carries no plaintext value
  ComparisonBit,   // output of one secure comparison
  BinBoundary,     // one computed boundary, broadcast to everyone
};

const char* event_kind_name(EventKind kind);

struct TranscriptEntry {
  std::uint32_t round = 0;
  EventKind kind = EventKind::PublicParam;
  std::optional<std::int64_t> value;  // absent for message-flow entries
  std::string recipients;             // "all" or "P<index>"

  bool operator==(const TranscriptEntry&) const = default;
};

/// Append-only ledger of revealed values and message flow.
struct ProtocolTranscript {
  std::vector<TranscriptEntry> entries;
  std::uint32_t round_counter = 0;

  std::uint32_t begin_round() { return round_counter++; }
  void record(std::uint32_t round, EventKind kind,
              std::optional<std::int64_t> value, std::string recipients);

  /// Line-delimited export: `round <TAB> kind <TAB> value <TAB> recipients`
  /// with `-` for absent values.
  std::string to_text() const;
  static ProtocolTranscript from_text(const std::string& text);

  bool operator==(const ProtocolTranscript& other) const {
    return entries == other.entries;
  }
};

/// Counts of secure operations, for cost accounting.
struct OpCounters {
  std::uint64_t secure_additions = 0;
  std::uint64_t secure_comparisons = 0;
  std::uint64_t kth_invocations = 0;
  std::uint64_t search_iterations = 0;
};

/// Internal message envelope used by the simulated sub-protocols.
struct Envelope {
  std::uint32_t round = 0;
  std::size_t sender = 0;
  std::size_t recipient = 0;
  enum class Payload : std::uint8_t { Share } kind = Payload::Share;
  std::vector<std::uint64_t> elements;
};

/// Split `secret` into `parties` uniformly random field elements summing
/// to it mod p. Throws DomainError when secret is outside [0, p).
ShareVector share(std::uint64_t secret, std::size_t parties,
                  const FieldParams& field, Rng& rng);

/// Share-and-aggregate summation: each party's value is split into
/// shares and routed, and every party ends up holding one share of the
/// total. Only message-flow entries reach the transcript; no plaintext
/// value does.
ShareVector secure_sum(std::span<const std::uint64_t> local_values,
                       const FieldParams& field, Rng& rng,
                       ProtocolTranscript& transcript, OpCounters& counters);

/// Ideal comparison functionality: reveals exactly the predicate
/// (value < threshold) to all parties and logs the bit. Throws
/// ProtocolFault when the reconstructed value exceeds `declared_max`.
bool secure_compare_lt(const ShareVector& shared, std::uint64_t threshold,
                       std::uint64_t declared_max, const FieldParams& field,
                       ProtocolTranscript& transcript, OpCounters& counters);

/// Binary search for the k-th smallest element of the union of the
/// parties' multisets, revealing only two comparison bits per
/// iteration. Each iteration guesses g = floor((lo+hi)/2), sums the
/// per-party counts of elements < g and <= g with secure_sum, and
/// trims [lo, hi] from the two comparison outcomes. k is 1-based.
std::int64_t secure_kth_ranked(
    std::span<const std::vector<std::int64_t>> party_multisets,
    std::uint64_t k, AttributeBounds bounds, const FieldParams& field,
    Rng& rng, ProtocolTranscript& transcript, OpCounters& counters);

}  // namespace fairprep

#endif  // FAIRPREP_SMC_HPP
