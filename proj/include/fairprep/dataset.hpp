#ifndef FAIRPREP_DATASET_HPP
#define FAIRPREP_DATASET_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairprep {

/// The two values of the binary sensitive attribute. Only V (privileged)
/// records are ever repaired; they are shifted toward the U distribution.
enum class Group : std::uint8_t { U, V };

inline const char* group_name(Group g) { return g == Group::U ? "U" : "V"; }

/// One individual: numeric feature values, sensitive group, binary label.
struct Record {
  std::vector<double> features;
  Group group = Group::U;
  int label = 0;
};

/// Inclusive integer range [lo, hi] of an attribute after integerization.
struct AttributeBounds {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  std::int64_t range_size() const { return hi - lo + 1; }
  bool operator==(const AttributeBounds&) const = default;
};

/// Column roles for a CSV file, plus the value encodings.
///
/// File format: one `key = value` pair per line, `#` comments. Keys:
///   sensitive   - name of the sensitive column
///   privileged  - sensitive value mapped to group V (all others map to U)
///   label       - name of the binary label column
///   positive    - label value mapped to 1 (all others map to 0)
///   features    - comma-separated numeric feature column names
///   bounds.<f>  - optional "lo hi" public bounds for feature <f>, in
///                 integerized units (see integerize)
struct SchemaConfig {
  std::string sensitive_column;
  std::string privileged_value;
  std::string label_column;
  std::string positive_label;
  std::vector<std::string> feature_columns;
  std::map<std::string, AttributeBounds> public_bounds;
};

SchemaConfig load_schema_config(const std::string& path);
SchemaConfig parse_schema_config(const std::string& text);

/// A population of records. `bounds` is empty until integerize() runs;
/// afterwards it holds one [lo, hi] per feature attribute.
struct Dataset {
  std::vector<std::string> schema;
  std::vector<Record> records;
  std::vector<AttributeBounds> bounds;

  std::size_t n() const { return records.size(); }
  std::size_t group_count(Group g) const;
  std::size_t attribute_count() const { return schema.size(); }

  /// Values of one attribute restricted to one group, in row order.
  std::vector<double> column(std::size_t attribute, Group g) const;

  /// Same, rounded to the integer grid (valid on integerized data).
  std::vector<std::int64_t> integer_column(std::size_t attribute,
                                           Group g) const;
};

/// The records a single party holds. Shards of one dataset are disjoint
/// and their union is the dataset.
struct Shard {
  std::size_t owner = 0;
  std::vector<Record> records;

  std::size_t group_count(Group g) const;
  std::vector<std::int64_t> integer_column(std::size_t attribute,
                                           Group g) const;
};

/// Parse a comma-separated file with a header row against `config`.
/// Throws SchemaError for missing columns, ParseError (naming the row)
/// for non-numeric feature cells.
Dataset load_csv(const std::string& path, const SchemaConfig& config);
Dataset parse_csv(const std::string& text, const SchemaConfig& config,
                  const std::string& origin = "<memory>");

/// Scale every feature value by 10^digits and round to the nearest
/// integer (ties away from zero). Bounds are taken from `public_bounds`
/// where present (values outside them raise BoundsError) and otherwise
/// inferred as the observed min/max.
Dataset integerize(const Dataset& ds, int digits,
                   const std::map<std::string, AttributeBounds>*
                       public_bounds = nullptr);

/// Divide every feature value by 10^digits. Clears bounds.
Dataset deintegerize(const Dataset& ds, int digits);

/// Seeded shuffle, then split: first floor(n * train_fraction) records
/// to train, the rest to test. Identical inputs give identical splits.
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds,
                                             double train_fraction,
                                             std::uint64_t seed);

/// Seeded assignment of records to `parties` nonempty shards forming a
/// disjoint cover of `ds`. Throws PartitionError when parties > n.
std::vector<Shard> partition_horizontal(const Dataset& ds,
                                        std::size_t parties,
                                        std::uint64_t seed);

}  // namespace fairprep

#endif  // FAIRPREP_DATASET_HPP
