#ifndef FAIRPREP_EXPERIMENT_HPP
#define FAIRPREP_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairprep/dataset.hpp"
#include "fairprep/metrics.hpp"
#include "fairprep/protocol.hpp"

namespace fairprep {

/// One sweep cell: a point of the (lambda, bins, parties) grid at one
/// repetition seed.
struct CellId {
  double lambda = 0.0;
  int bins = 3;
  std::size_t parties = 3;
  std::uint64_t seed = 0;
};

struct CellResult {
  CellId id;
  bool ok = false;
  std::string error;              // set when !ok
  std::string audit_status = "-"; // "pass"/"fail" when auditing is on
  MetricReport metrics;
  OpCounters counters;
  double protocol_seconds = 0.0;
};

struct PipelineOptions {
  bool repair_enabled = true;  // false bypasses the protocol and repair
  ProtocolTranscript* transcript_out = nullptr;
};

/// Run the full pipeline for one cell: split, integerize, partition,
/// distributed pre-process, local repair of both splits, train a
/// logistic model on the repaired train split, and score the repaired
/// test split. The earth mover's distances compare the two groups'
/// training distributions after repair, re-quantized to the integer
/// grid, normalized by each attribute's public range.
CellResult run_pipeline_cell(const Dataset& raw, const SchemaConfig& schema,
                             CellId id, double train_fraction, int digits,
                             const PipelineOptions& options = {});

struct SweepConfig {
  std::string data_path;
  std::string schema_path;
  std::vector<double> lambdas;         // default 0.0, 0.1, ..., 1.0
  std::vector<int> bins;               // default 1, 2, 3, 4, 6, 8, 10
  std::vector<std::size_t> parties;    // default 3
  int repetitions = 10;
  double train_fraction = 0.667;
  int digits = 4;
  std::uint64_t seed_offset = 0;
  std::string out_dir;                 // empty: no files written
  std::size_t workers = 0;             // 0: pick from hardware
  bool audit = false;

  void apply_grid_defaults();
};

/// Mean and 90% confidence half-width over one cell's repetitions.
struct SummaryRow {
  double lambda = 0.0;
  int bins = 0;
  std::size_t parties = 0;
  int reps_ok = 0;
  double accuracy_mean = 0.0, accuracy_ci90 = 0.0;
  double unfairness_mean = 0.0, unfairness_ci90 = 0.0;
  double emd_mean = 0.0, emd_ci90 = 0.0;
};

struct SweepOutput {
  std::vector<CellResult> cells;      // grid order: lambda, bins, parties, seed
  std::vector<SummaryRow> summaries;  // grid order: lambda, bins, parties
  bool all_ok = false;

  std::string results_csv() const;  // deterministic; no wall-clock columns
  std::string summary_csv() const;
  std::string timing_csv() const;   // wall clock, kept out of results_csv
};

/// Run every cell of the grid (in parallel up to `workers`), summarize,
/// and when out_dir is set write results.csv, summary.csv, timing.csv
/// and, under --audit, one transcript per cell plus audit findings.
SweepOutput run_sweep(const Dataset& raw, const SchemaConfig& schema,
                      const SweepConfig& cfg);

/// Convenience entry: load data and schema from cfg paths, then sweep.
SweepOutput run_sweep_files(const SweepConfig& cfg);

struct ScalingConfig {
  std::vector<std::size_t> parties = {3, 4, 5, 6, 7};
  std::vector<int> bins = {1, 2, 3, 4, 6, 8, 10};
  std::string attribute;  // empty: first schema attribute
  int digits = 4;
  double train_fraction = 0.667;
  std::uint64_t seed = 0;
  double min_seconds_per_cell = 0.05;  // repeat runs until this much time
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct ScalingRow {
  std::size_t parties = 0;
  int bins = 0;
  double seconds = 0.0;  // mean protocol wall clock per run
  int repeats = 0;
  OpCounters counters;
};

struct ScalingReport {
  std::string attribute;
  std::vector<ScalingRow> rows;
  std::map<int, LinearFit> time_vs_parties;          // keyed by bins
  std::map<std::size_t, LinearFit> time_vs_bins;     // keyed by parties

  std::string to_text() const;
  std::string csv() const;
};

/// Protocol wall-clock scaling on one designated attribute: run the
/// distributed boundary computation per (parties, bins) cell, repeating
/// each cell until it accumulates enough time to measure, then fit
/// time against parties at fixed bins and against bins at fixed
/// parties.
ScalingReport report_runtime_scaling(const Dataset& raw,
                                     const SchemaConfig& schema,
                                     const ScalingConfig& cfg);

/// Least-squares line with coefficient of determination.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Deterministic two-group dataset with group-shifted proxy scores: the
/// label depends on a latent merit variable, while group V's observable
/// scores are inflated relative to it. A model trained on the raw
/// scores is systematically unfair to group U; repairing V's scores
/// toward U's distribution removes the shift.
struct SyntheticSpec {
  std::size_t n = 4000;
  double privileged_fraction = 0.5;
  double shift = 1.0;  // scales the group-V score inflation
  std::uint64_t seed = 7;
};

Dataset make_synthetic_dataset(const SyntheticSpec& spec);

/// Column roles matching write_csv output of a synthetic dataset.
SchemaConfig synthetic_schema();

/// Write any dataset (plus its group and label columns) back to CSV in
/// a form load_csv(path, schema) accepts.
void write_csv(const Dataset& ds, const SchemaConfig& schema,
               const std::string& path);

}  // namespace fairprep

#endif  // FAIRPREP_EXPERIMENT_HPP
