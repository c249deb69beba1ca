#ifndef FAIRPREP_PROTOCOL_HPP
#define FAIRPREP_PROTOCOL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fairprep/binning.hpp"
#include "fairprep/dataset.hpp"
#include "fairprep/repair.hpp"
#include "fairprep/smc.hpp"

namespace fairprep {

/// Public parameters every party agreed on before the run.
struct ProtocolConfig {
  int bins = 3;
  double lambda = 1.0;
  int digits = 0;
  std::vector<std::string> attributes;   // schema order
  std::vector<AttributeBounds> bounds;   // one per attribute
  std::size_t parties = 0;
  std::uint64_t seed = 0;
};

/// One party's private view: its own shard and nothing else. All methods
/// read only the party's shard; values cross the party boundary only
/// through the transcript-logged protocol messages.
struct PartyState {
  std::size_t index = 0;
  Shard shard;

  std::uint64_t group_count(Group g) const;
  std::vector<std::int64_t> group_column(std::size_t attribute,
                                         Group g) const;

  /// Local repair from broadcast boundaries alone; never shared.
  Shard repair_locally(const std::vector<RepairParams>& params) const;
};

/// U and V boundary specs for one attribute.
struct AttributeSpecs {
  BinSpec u;
  BinSpec v;
};

struct PreprocessResult {
  std::vector<Shard> repaired_shards;
  std::vector<AttributeSpecs> specs;  // per attribute, schema order
  ProtocolTranscript transcript;
  OpCounters counters;
};

/// Run the full distributed pre-process over integerized shards:
/// publish per-party group sizes, reveal the group totals via secure
/// sums, compute every bin boundary for both groups with
/// secure_kth_ranked (B+1 invocations per group per attribute),
/// broadcast the boundaries, and let each party repair its own
/// group-V records locally.
///
/// Throws ConfigError before any protocol round when bins exceed the
/// smaller group, ProtocolFault when a shard value violates the public
/// bounds.
PreprocessResult run_preprocess(const std::vector<Shard>& shards,
                                const ProtocolConfig& cfg);

/// Result of checking a transcript against the sanctioned-leak model.
struct AuditReport {
  bool passed = false;
  std::vector<std::string> findings;
  std::map<std::string, std::size_t> entries_by_kind;

  std::string summary() const;
};

/// Verify that a completed run's transcript reveals nothing beyond the
/// sanctioned set: per-party group sizes, group totals consistent with
/// them, bin boundaries within the public bounds, and comparison bits
/// exactly reproducible by re-running each binary search against its
/// published boundary. Message-flow entries must carry no value. Any
/// other entry, value, or structural deviation becomes a finding.
AuditReport audit_leakage(const ProtocolTranscript& transcript);

}  // namespace fairprep

#endif  // FAIRPREP_PROTOCOL_HPP
