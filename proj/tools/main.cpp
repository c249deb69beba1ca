// Experiment runner: sweeps the (lambda, bins, parties) grid over a
// dataset, reports protocol runtime scaling, audits transcripts, and
// generates a synthetic demo dataset.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairprep/errors.hpp"
#include "fairprep/experiment.hpp"
#include "fairprep/protocol.hpp"

namespace {

std::vector<double> parse_doubles(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(std::stod(s));
  return out;
}

std::vector<int> parse_ints(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const auto& s : items) out.push_back(std::stoi(s));
  return out;
}

std::vector<std::size_t> parse_sizes(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const auto& s : items) out.push_back(std::stoul(s));
  return out;
}

// Sweep config file: same `key = value` format as the schema config.
// Recognized keys: data, schema, lambdas, bins, parties, reps,
// train_fraction, digits, seed_offset, out, workers, audit.
void load_sweep_config(const std::string& path, fairprep::SweepConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw fairprep::Error("cannot open config: " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream cells(line);
    std::string key, eq;
    if (!(cells >> key)) continue;
    if (!(cells >> eq) || eq != "=")
      throw fairprep::Error("config: expected 'key = value': " + line);
    auto rest = [&cells]() {
      std::string value;
      std::getline(cells, value);
      const auto begin = value.find_first_not_of(" \t");
      return begin == std::string::npos ? std::string() : value.substr(begin);
    };
    auto list = [&cells]() {
      std::vector<std::string> items;
      std::string item;
      while (cells >> item) {
        while (!item.empty() && item.back() == ',') item.pop_back();
        if (!item.empty()) items.push_back(item);
      }
      return items;
    };
    auto resolve = [&base](const std::string& p) {
      const std::filesystem::path fp(p);
      return fp.is_absolute() || base.empty() ? p : (base / fp).string();
    };
    if (key == "data") cfg.data_path = resolve(rest());
    else if (key == "schema") cfg.schema_path = resolve(rest());
    else if (key == "lambdas") cfg.lambdas = parse_doubles(list());
    else if (key == "bins") cfg.bins = parse_ints(list());
    else if (key == "parties") cfg.parties = parse_sizes(list());
    else if (key == "reps") cfg.repetitions = std::stoi(rest());
    else if (key == "train_fraction") cfg.train_fraction = std::stod(rest());
    else if (key == "digits") cfg.digits = std::stoi(rest());
    else if (key == "seed_offset") cfg.seed_offset = std::stoull(rest());
    else if (key == "out") cfg.out_dir = resolve(rest());
    else if (key == "workers") cfg.workers = std::stoul(rest());
    else if (key == "audit") cfg.audit = rest() == "true" || rest() == "1";
    else throw fairprep::Error("config: unknown key: " + key);
  }
}

int run_sweep_command(const fairprep::SweepConfig& cfg) {
  const fairprep::SweepOutput output = fairprep::run_sweep_files(cfg);
  std::size_t failed = 0;
  for (const auto& cell : output.cells)
    if (!cell.ok) ++failed;
  std::cout << output.cells.size() << " cells, " << failed << " failed\n";
  if (failed > 0)
    for (const auto& cell : output.cells)
      if (!cell.ok)
        std::cerr << "  cell lambda=" << cell.id.lambda
                  << " B=" << cell.id.bins << " L=" << cell.id.parties
                  << " seed=" << cell.id.seed << ": " << cell.error << "\n";
  if (!cfg.out_dir.empty())
    std::cout << "wrote " << cfg.out_dir << "/{results,summary,timing}.csv\n";
  else
    std::cout << output.summary_csv();
  return output.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving fairness pre-processing simulator"};
  app.require_subcommand(1);

  fairprep::SweepConfig sweep_cfg;
  std::string config_path;
  std::vector<std::string> lambdas_arg, bins_arg, parties_arg;

  auto* sweep = app.add_subcommand(
      "sweep", "run the (lambda, bins, parties) grid and write results");
  sweep->add_option("--config", config_path, "sweep config file");
  sweep->add_option("--data", sweep_cfg.data_path, "dataset CSV");
  sweep->add_option("--schema", sweep_cfg.schema_path, "schema config file");
  sweep->add_option("--lambdas", lambdas_arg, "lambda grid")->delimiter(',');
  sweep->add_option("--bins", bins_arg, "bin count grid")->delimiter(',');
  sweep->add_option("--parties", parties_arg, "party count grid")
      ->delimiter(',');
  sweep->add_option("--reps", sweep_cfg.repetitions,
                    "seeded repetitions per cell");
  sweep->add_option("--seed-offset", sweep_cfg.seed_offset,
                    "first repetition seed");
  sweep->add_option("--train-fraction", sweep_cfg.train_fraction,
                    "train split fraction");
  sweep->add_option("--digits", sweep_cfg.digits,
                    "decimal digits kept by integerization");
  sweep->add_option("--out", sweep_cfg.out_dir, "output directory");
  sweep->add_option("--workers", sweep_cfg.workers,
                    "parallel cells (0 = auto)");
  sweep->add_flag("--audit", sweep_cfg.audit,
                  "write per-cell transcripts and audit each one");

  fairprep::ScalingConfig scaling_cfg;
  std::string scaling_data, scaling_schema, scaling_out;
  std::vector<std::string> scaling_parties, scaling_bins;
  auto* scaling = app.add_subcommand(
      "scaling", "protocol runtime scaling on one attribute");
  scaling->add_option("--data", scaling_data, "dataset CSV")->required();
  scaling->add_option("--schema", scaling_schema, "schema config file")
      ->required();
  scaling->add_option("--attribute", scaling_cfg.attribute,
                      "designated attribute (default: first)");
  scaling->add_option("--parties", scaling_parties, "party count grid")
      ->delimiter(',');
  scaling->add_option("--bins", scaling_bins, "bin count grid")
      ->delimiter(',');
  scaling->add_option("--digits", scaling_cfg.digits, "integerization digits");
  scaling->add_option("--seed", scaling_cfg.seed, "split/partition seed");
  scaling->add_option("--out", scaling_out, "also write a CSV table here");

  fairprep::SyntheticSpec gen_spec;
  std::string gen_out = "demo.csv";
  auto* gen = app.add_subcommand(
      "gen", "write a synthetic biased demo dataset and schema");
  gen->add_option("--out", gen_out, "output CSV path");
  gen->add_option("--n", gen_spec.n, "record count");
  gen->add_option("--seed", gen_spec.seed, "generator seed");
  gen->add_option("--shift", gen_spec.shift, "group-V score inflation scale");

  std::string audit_path;
  auto* audit = app.add_subcommand(
      "audit", "check an exported transcript against the leakage model");
  audit->add_option("transcript", audit_path, "transcript file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      if (!config_path.empty()) load_sweep_config(config_path, sweep_cfg);
      if (!lambdas_arg.empty()) sweep_cfg.lambdas = parse_doubles(lambdas_arg);
      if (!bins_arg.empty()) sweep_cfg.bins = parse_ints(bins_arg);
      if (!parties_arg.empty()) sweep_cfg.parties = parse_sizes(parties_arg);
      return run_sweep_command(sweep_cfg);
    }
    if (scaling->parsed()) {
      if (!scaling_parties.empty())
        scaling_cfg.parties = parse_sizes(scaling_parties);
      if (!scaling_bins.empty()) scaling_cfg.bins = parse_ints(scaling_bins);
      const auto schema = fairprep::load_schema_config(scaling_schema);
      const auto raw = fairprep::load_csv(scaling_data, schema);
      const auto report =
          fairprep::report_runtime_scaling(raw, schema, scaling_cfg);
      std::cout << report.to_text();
      if (!scaling_out.empty()) {
        std::ofstream(scaling_out) << report.csv();
        std::cout << "wrote " << scaling_out << "\n";
      }
      return 0;
    }
    if (gen->parsed()) {
      const auto ds = fairprep::make_synthetic_dataset(gen_spec);
      const auto schema = fairprep::synthetic_schema();
      fairprep::write_csv(ds, schema, gen_out);
      const std::string schema_out =
          std::filesystem::path(gen_out).replace_extension(".schema").string();
      std::ofstream(schema_out)
          << "sensitive = group\nprivileged = priv\nlabel = outcome\n"
             "positive = 1\nfeatures = score_a, score_b, background\n";
      std::cout << "wrote " << gen_out << " and " << schema_out << " ("
                << ds.n() << " records)\n";
      return 0;
    }
    if (audit->parsed()) {
      std::ifstream in(audit_path);
      if (!in) throw fairprep::Error("cannot open " + audit_path);
      std::ostringstream text;
      text << in.rdbuf();
      const auto transcript =
          fairprep::ProtocolTranscript::from_text(text.str());
      const auto report = fairprep::audit_leakage(transcript);
      std::cout << report.summary();
      return report.passed ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
