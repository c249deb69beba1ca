#include "fairprep/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "fairprep/errors.hpp"
#include "fairprep/model.hpp"
#include "fairprep/rng.hpp"

namespace fairprep {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

/// One-sided 95% Student-t quantile (90% two-sided interval).
double t90(int df) {
  static constexpr double table[] = {
      6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860, 1.833, 1.812,
      1.796, 1.782, 1.771, 1.761, 1.753, 1.746, 1.740, 1.734, 1.729, 1.725,
      1.721, 1.717, 1.714, 1.711, 1.708, 1.706, 1.703, 1.701, 1.699, 1.697};
  if (df < 1) return 0.0;
  if (df <= 30) return table[df - 1];
  return 1.645;
}

struct MeanCi {
  double mean = 0.0;
  double ci90 = 0.0;
};

MeanCi mean_ci(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  MeanCi out;
  for (const double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (const double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  out.ci90 = t90(static_cast<int>(xs.size()) - 1) * sd /
             std::sqrt(static_cast<double>(xs.size()));
  return out;
}

Dataset union_of_shards(const std::vector<Shard>& shards,
                        const Dataset& like) {
  Dataset out;
  out.schema = like.schema;
  out.bounds = like.bounds;
  for (const auto& shard : shards)
    out.records.insert(out.records.end(), shard.records.begin(),
                       shard.records.end());
  return out;
}

std::vector<RepairParams> params_from_specs(
    const std::vector<AttributeSpecs>& specs, double lambda, int digits) {
  std::vector<RepairParams> params;
  params.reserve(specs.size());
  for (const auto& spec : specs)
    params.push_back({lambda, spec.u, spec.v, digits});
  return params;
}

void extract_xy(const Dataset& ds, std::vector<std::vector<double>>& x,
                std::vector<int>& y, std::vector<Group>& groups) {
  x.reserve(ds.n());
  y.reserve(ds.n());
  groups.reserve(ds.n());
  for (const auto& rec : ds.records) {
    x.push_back(rec.features);
    y.push_back(rec.label);
    groups.push_back(rec.group);
  }
}

std::string sanitize(std::string message) {
  std::replace(message.begin(), message.end(), ',', ';');
  std::replace(message.begin(), message.end(), '\n', ' ');
  return message;
}

}  // namespace

CellResult run_pipeline_cell(const Dataset& raw, const SchemaConfig& schema,
                             CellId id, double train_fraction, int digits,
                             const PipelineOptions& options) {
  CellResult result;
  result.id = id;

  auto [train_raw, test_raw] = split_train_test(raw, train_fraction, id.seed);
  const Dataset train_int =
      integerize(train_raw, digits, &schema.public_bounds);
  const Dataset test_int = integerize(test_raw, digits);
  std::vector<Shard> shards =
      partition_horizontal(train_int, id.parties, id.seed);

  Dataset train_final;
  Dataset test_final;
  if (options.repair_enabled) {
    ProtocolConfig pc;
    pc.bins = id.bins;
    pc.lambda = id.lambda;
    pc.digits = digits;
    pc.attributes = train_int.schema;
    pc.bounds = train_int.bounds;
    pc.parties = id.parties;
    pc.seed = id.seed;

    const auto started = std::chrono::steady_clock::now();
    PreprocessResult pre = run_preprocess(shards, pc);
    result.protocol_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    result.counters = pre.counters;
    train_final = union_of_shards(pre.repaired_shards, train_int);

    // The same train-fitted boundaries transform the held-out split.
    const auto params = params_from_specs(pre.specs, id.lambda, digits);
    test_final = repair_dataset(params, test_int);
    if (options.transcript_out)
      *options.transcript_out = std::move(pre.transcript);
  } else {
    train_final = union_of_shards(shards, train_int);
    test_final = test_int;
  }

  // Between-group distances on the (repaired) training distributions,
  // re-quantized to the integer grid, normalized by the public range.
  MetricReport metrics;
  for (std::size_t j = 0; j < train_final.attribute_count(); ++j) {
    const auto u = train_final.integer_column(j, Group::U);
    const auto v = train_final.integer_column(j, Group::V);
    metrics.emd_per_attribute.push_back(
        normalized_emd(u, v, train_int.bounds[j].range_size()));
  }
  for (const double e : metrics.emd_per_attribute) metrics.emd_mean += e;
  metrics.emd_mean /= static_cast<double>(metrics.emd_per_attribute.size());

  const Dataset train_real = deintegerize(train_final, digits);
  const Dataset test_real = deintegerize(test_final, digits);

  std::vector<std::vector<double>> x_train, x_test;
  std::vector<int> y_train, y_test;
  std::vector<Group> g_train, g_test;
  extract_xy(train_real, x_train, y_train, g_train);
  extract_xy(test_real, x_test, y_test, g_test);

  const Standardizer scaler = Standardizer::fit(x_train);
  const LogisticModel model =
      fit_logistic(scaler.transform(x_train), y_train, {}, id.seed);

  const auto x_test_std = scaler.transform(x_test);
  std::vector<int> predictions;
  predictions.reserve(x_test_std.size());
  for (const auto& row : x_test_std)
    predictions.push_back(predict(model, row).first);

  metrics.accuracy = accuracy(predictions, y_test);
  const FairnessBreakdown fairness =
      unfairness(confusion_by_group(predictions, y_test, g_test));
  metrics.dfnr = fairness.dfnr;
  metrics.dfpr = fairness.dfpr;
  metrics.unfairness = fairness.unfairness;
  result.metrics = std::move(metrics);
  result.ok = true;
  return result;
}

void SweepConfig::apply_grid_defaults() {
  if (lambdas.empty())
    for (int i = 0; i <= 10; ++i)
      lambdas.push_back(static_cast<double>(i) / 10.0);
  if (bins.empty()) bins = {1, 2, 3, 4, 6, 8, 10};
  if (parties.empty()) parties = {3};
}

namespace {

std::string cell_tag(const CellId& id) {
  std::ostringstream out;
  out << "lambda" << fmt_short(id.lambda) << "_b" << id.bins << "_l"
      << id.parties << "_s" << id.seed;
  return out.str();
}

}  // namespace

std::string SweepOutput::results_csv() const {
  std::ostringstream out;
  out << "lambda,bins,parties,seed,status,audit,accuracy,unfairness,dfnr,"
         "dfpr,emd_mean,kth_invocations,search_iterations,secure_additions,"
         "secure_comparisons\n";
  for (const auto& cell : cells) {
    out << fmt_short(cell.id.lambda) << ',' << cell.id.bins << ','
        << cell.id.parties << ',' << cell.id.seed << ',';
    if (!cell.ok) {
      out << sanitize(cell.error) << ",-,,,,,,,,,\n";
      continue;
    }
    out << "ok," << cell.audit_status << ','
        << fmt_double(cell.metrics.accuracy) << ','
        << fmt_double(cell.metrics.unfairness) << ','
        << fmt_double(cell.metrics.dfnr) << ','
        << fmt_double(cell.metrics.dfpr) << ','
        << fmt_double(cell.metrics.emd_mean) << ','
        << cell.counters.kth_invocations << ','
        << cell.counters.search_iterations << ','
        << cell.counters.secure_additions << ','
        << cell.counters.secure_comparisons << '\n';
  }
  return out.str();
}

std::string SweepOutput::summary_csv() const {
  std::ostringstream out;
  out << "lambda,bins,parties,reps_ok,accuracy_mean,accuracy_ci90,"
         "unfairness_mean,unfairness_ci90,emd_mean,emd_ci90\n";
  for (const auto& row : summaries) {
    out << fmt_short(row.lambda) << ',' << row.bins << ',' << row.parties
        << ',' << row.reps_ok << ',' << fmt_double(row.accuracy_mean) << ','
        << fmt_double(row.accuracy_ci90) << ','
        << fmt_double(row.unfairness_mean) << ','
        << fmt_double(row.unfairness_ci90) << ',' << fmt_double(row.emd_mean)
        << ',' << fmt_double(row.emd_ci90) << '\n';
  }
  return out.str();
}

std::string SweepOutput::timing_csv() const {
  std::ostringstream out;
  out << "lambda,bins,parties,seed,protocol_seconds\n";
  for (const auto& cell : cells) {
    if (!cell.ok) continue;
    out << fmt_short(cell.id.lambda) << ',' << cell.id.bins << ','
        << cell.id.parties << ',' << cell.id.seed << ','
        << fmt_double(cell.protocol_seconds) << '\n';
  }
  return out.str();
}

SweepOutput run_sweep(const Dataset& raw, const SchemaConfig& schema,
                      const SweepConfig& config) {
  SweepConfig cfg = config;
  cfg.apply_grid_defaults();
  if (cfg.repetitions < 1) throw ConfigError("sweep: repetitions must be >= 1");

  std::vector<CellId> grid;
  for (const double lambda : cfg.lambdas)
    for (const int bins : cfg.bins)
      for (const std::size_t parties : cfg.parties)
        for (int m = 0; m < cfg.repetitions; ++m)
          grid.push_back(
              {lambda, bins, parties,
               cfg.seed_offset + static_cast<std::uint64_t>(m)});

  const bool write_files = !cfg.out_dir.empty();
  std::filesystem::path transcripts_dir;
  if (write_files) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.audit) {
      transcripts_dir = std::filesystem::path(cfg.out_dir) / "transcripts";
      std::filesystem::create_directories(transcripts_dir);
    }
  }

  SweepOutput output;
  output.cells.resize(grid.size());

  std::size_t workers = cfg.workers;
  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<std::size_t>(workers, 8);
  }
  workers = std::min(workers, grid.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      CellResult& slot = output.cells[i];
      try {
        ProtocolTranscript transcript;
        PipelineOptions options;
        options.transcript_out = cfg.audit ? &transcript : nullptr;
        slot = run_pipeline_cell(raw, schema, grid[i], cfg.train_fraction,
                                 cfg.digits, options);
        if (cfg.audit) {
          const AuditReport audit = audit_leakage(transcript);
          slot.audit_status = audit.passed ? "pass" : "fail";
          if (write_files) {
            std::ofstream file(transcripts_dir /
                               (cell_tag(grid[i]) + ".log"));
            file << transcript.to_text();
          }
          if (!audit.passed) {
            slot.ok = false;
            slot.error = "leakage audit failed: " + audit.findings.front();
          }
        }
      } catch (const std::exception& e) {
        slot.id = grid[i];
        slot.ok = false;
        slot.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  // Summaries follow the same grid order, one row per (lambda, B, L).
  std::size_t idx = 0;
  for (const double lambda : cfg.lambdas)
    for (const int bins : cfg.bins)
      for (const std::size_t parties : cfg.parties) {
        std::vector<double> acc, unf, emd;
        for (int m = 0; m < cfg.repetitions; ++m, ++idx) {
          const CellResult& cell = output.cells[idx];
          if (!cell.ok) continue;
          acc.push_back(cell.metrics.accuracy);
          unf.push_back(cell.metrics.unfairness);
          emd.push_back(cell.metrics.emd_mean);
        }
        SummaryRow row;
        row.lambda = lambda;
        row.bins = bins;
        row.parties = parties;
        row.reps_ok = static_cast<int>(acc.size());
        const MeanCi a = mean_ci(acc), u = mean_ci(unf), e = mean_ci(emd);
        row.accuracy_mean = a.mean;
        row.accuracy_ci90 = a.ci90;
        row.unfairness_mean = u.mean;
        row.unfairness_ci90 = u.ci90;
        row.emd_mean = e.mean;
        row.emd_ci90 = e.ci90;
        output.summaries.push_back(row);
      }

  output.all_ok = std::all_of(output.cells.begin(), output.cells.end(),
                              [](const CellResult& c) { return c.ok; });

  if (write_files) {
    const std::filesystem::path dir(cfg.out_dir);
    std::ofstream(dir / "results.csv") << output.results_csv();
    std::ofstream(dir / "summary.csv") << output.summary_csv();
    std::ofstream(dir / "timing.csv") << output.timing_csv();
  }
  return output;
}

SweepOutput run_sweep_files(const SweepConfig& cfg) {
  if (cfg.data_path.empty() || cfg.schema_path.empty())
    throw ConfigError("sweep: data and schema paths are required");
  const SchemaConfig schema = load_schema_config(cfg.schema_path);
  const Dataset raw = load_csv(cfg.data_path, schema);
  return run_sweep(raw, schema, cfg);
}

LinearFit fit_line(const std::vector<double>& x,
                   const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("fit_line: need >= 2 aligned points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  LinearFit fit;
  fit.slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double y_mean = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fitted = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - fitted) * (y[i] - fitted);
    ss_tot += (y[i] - y_mean) * (y[i] - y_mean);
  }
  fit.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

namespace {

Dataset project_attribute(const Dataset& ds, const std::string& name) {
  const auto it = std::find(ds.schema.begin(), ds.schema.end(), name);
  if (it == ds.schema.end())
    throw ConfigError("scaling: unknown attribute '" + name + "'");
  const std::size_t j = static_cast<std::size_t>(it - ds.schema.begin());
  Dataset out;
  out.schema = {name};
  if (!ds.bounds.empty()) out.bounds = {ds.bounds[j]};
  out.records.reserve(ds.n());
  for (const auto& rec : ds.records)
    out.records.push_back({{rec.features[j]}, rec.group, rec.label});
  return out;
}

}  // namespace

ScalingReport report_runtime_scaling(const Dataset& raw,
                                     const SchemaConfig& schema,
                                     const ScalingConfig& cfg) {
  ScalingReport report;
  report.attribute =
      cfg.attribute.empty() ? raw.schema.front() : cfg.attribute;

  const Dataset projected = project_attribute(raw, report.attribute);
  auto [train_raw, test_raw] =
      split_train_test(projected, cfg.train_fraction, cfg.seed);
  const Dataset train_int =
      integerize(train_raw, cfg.digits, &schema.public_bounds);

  for (const std::size_t parties : cfg.parties) {
    const std::vector<Shard> shards =
        partition_horizontal(train_int, parties, cfg.seed);
    for (const int bins : cfg.bins) {
      ProtocolConfig pc;
      pc.bins = bins;
      pc.lambda = 1.0;
      pc.digits = cfg.digits;
      pc.attributes = train_int.schema;
      pc.bounds = train_int.bounds;
      pc.parties = parties;
      pc.seed = cfg.seed;

      auto run_once = [&]() {
        const auto started = std::chrono::steady_clock::now();
        PreprocessResult r = run_preprocess(shards, pc);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          started)
                .count();
        return std::pair{elapsed, r.counters};
      };

      auto [first, counters] = run_once();
      int repeats =
          first > 0.0
              ? static_cast<int>(std::ceil(cfg.min_seconds_per_cell / first))
              : 100;
      repeats = std::clamp(repeats, 1, 100000);
      double total = first;
      for (int r = 1; r < repeats; ++r) total += run_once().first;

      ScalingRow row;
      row.parties = parties;
      row.bins = bins;
      row.seconds = total / static_cast<double>(repeats);
      row.repeats = repeats;
      row.counters = counters;
      report.rows.push_back(row);
    }
  }

  for (const int bins : cfg.bins) {
    std::vector<double> xs, ys;
    for (const auto& row : report.rows)
      if (row.bins == bins) {
        xs.push_back(static_cast<double>(row.parties));
        ys.push_back(row.seconds);
      }
    if (xs.size() >= 2) report.time_vs_parties[bins] = fit_line(xs, ys);
  }
  for (const std::size_t parties : cfg.parties) {
    std::vector<double> xs, ys;
    for (const auto& row : report.rows)
      if (row.parties == parties) {
        xs.push_back(static_cast<double>(row.bins));
        ys.push_back(row.seconds);
      }
    if (xs.size() >= 2) report.time_vs_bins[parties] = fit_line(xs, ys);
  }
  return report;
}

std::string ScalingReport::to_text() const {
  std::ostringstream out;
  out << "protocol wall clock, attribute '" << attribute << "'\n";
  out << "parties  bins  seconds(mean)  repeats  kth_invocations  "
         "search_iterations\n";
  for (const auto& row : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%7zu  %4d  %13.6f  %7d  %15llu  %17llu",
                  row.parties, row.bins, row.seconds, row.repeats,
                  static_cast<unsigned long long>(row.counters.kth_invocations),
                  static_cast<unsigned long long>(
                      row.counters.search_iterations));
    out << line << '\n';
  }
  out << "\nlinear fit of time vs parties (fixed bins):\n";
  for (const auto& [bins, fit] : time_vs_parties) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "  bins=%-3d slope=%.3e intercept=%.3e R2=%.4f", bins,
                  fit.slope, fit.intercept, fit.r2);
    out << line << '\n';
  }
  out << "linear fit of time vs bins (fixed parties):\n";
  for (const auto& [parties, fit] : time_vs_bins) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "  parties=%-3zu slope=%.3e intercept=%.3e R2=%.4f", parties,
                  fit.slope, fit.intercept, fit.r2);
    out << line << '\n';
  }
  return out.str();
}

std::string ScalingReport::csv() const {
  std::ostringstream out;
  out << "parties,bins,seconds_mean,repeats,kth_invocations,"
         "search_iterations,secure_additions,secure_comparisons\n";
  for (const auto& row : rows)
    out << row.parties << ',' << row.bins << ',' << fmt_double(row.seconds)
        << ',' << row.repeats << ',' << row.counters.kth_invocations << ','
        << row.counters.search_iterations << ','
        << row.counters.secure_additions << ','
        << row.counters.secure_comparisons << '\n';
  return out.str();
}

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  Dataset ds;
  ds.schema = {"score_a", "score_b", "background"};
  ds.records.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const bool privileged = rng.uniform01() < spec.privileged_fraction;
    const double merit = rng.normal();
    const int label = merit + 0.5 * rng.normal() > 0.0 ? 1 : 0;
    Record rec;
    rec.group = privileged ? Group::V : Group::U;
    rec.label = label;
    rec.features = {
        55.0 + 12.0 * merit + (privileged ? 10.0 * spec.shift : 0.0) +
            4.0 * rng.normal(),
        70.0 + 8.0 * merit + (privileged ? 6.0 * spec.shift : 0.0) +
            5.0 * rng.normal(),
        50.0 + 10.0 * rng.normal(),
    };
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

SchemaConfig synthetic_schema() {
  SchemaConfig schema;
  schema.sensitive_column = "group";
  schema.privileged_value = "priv";
  schema.label_column = "outcome";
  schema.positive_label = "1";
  schema.feature_columns = {"score_a", "score_b", "background"};
  return schema;
}

void write_csv(const Dataset& ds, const SchemaConfig& schema,
               const std::string& path) {
  if (schema.privileged_value == "unpriv" || schema.positive_label == "0")
    throw ConfigError("write_csv: value encodings collide");
  std::ofstream out(path);
  if (!out) throw Error("write_csv: cannot open " + path);
  for (const auto& name : ds.schema) out << name << ',';
  out << schema.sensitive_column << ',' << schema.label_column << '\n';
  for (const auto& rec : ds.records) {
    for (const double x : rec.features) out << fmt_double(x) << ',';
    out << (rec.group == Group::V ? schema.privileged_value : "unpriv") << ','
        << (rec.label == 1 ? schema.positive_label : "0") << '\n';
  }
}

}  // namespace fairprep
