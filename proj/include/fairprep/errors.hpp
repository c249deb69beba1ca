#ifndef FAIRPREP_ERRORS_HPP
#define FAIRPREP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fairprep {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Schema config is malformed or the CSV does not match it.
struct SchemaError : Error {
  using Error::Error;
};

/// A cell could not be parsed as a number.
struct ParseError : Error {
  using Error::Error;
};

/// An integerized value falls outside the configured public bounds.
struct BoundsError : Error {
  using Error::Error;
};

/// Invalid horizontal partition request (e.g. more parties than records).
struct PartitionError : Error {
  using Error::Error;
};

/// Invalid bin plan request (B < 1 or B > group size).
struct PlanError : Error {
  using Error::Error;
};

/// Mismatched or invalid run configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// A shared secret or field element is outside the field domain.
struct DomainError : Error {
  using Error::Error;
};

/// A protocol-level invariant was violated during a run.
struct ProtocolFault : Error {
  using Error::Error;
};

/// Requested rank is outside the multiset, or the multiset is empty.
struct RankError : Error {
  using Error::Error;
};

/// A metric is undefined on the given inputs (empty set, zero denominator).
struct MetricError : Error {
  using Error::Error;
};

/// Training set contains only one label value.
struct DegenerateLabelError : Error {
  using Error::Error;
};

/// Feature vector length does not match the model.
struct ShapeError : Error {
  using Error::Error;
};

}  // namespace fairprep

#endif  // FAIRPREP_ERRORS_HPP
