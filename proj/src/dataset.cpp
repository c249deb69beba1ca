#include "fairprep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fairprep/errors.hpp"
#include "fairprep/rng.hpp"

namespace fairprep {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double parse_number(const std::string& cell, std::size_t row,
                    const std::string& column, const std::string& origin) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != cell.size() || cell.empty()) {
    throw ParseError(origin + ": row " + std::to_string(row) +
                     ", column '" + column + "': not a number: '" + cell +
                     "'");
  }
  return value;
}

}  // namespace

SchemaConfig parse_schema_config(const std::string& text) {
  SchemaConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SchemaError("schema config: expected 'key = value': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "sensitive") {
      cfg.sensitive_column = value;
    } else if (key == "privileged") {
      cfg.privileged_value = value;
    } else if (key == "label") {
      cfg.label_column = value;
    } else if (key == "positive") {
      cfg.positive_label = value;
    } else if (key == "features") {
      for (const auto& name : split(value, ','))
        if (!name.empty()) cfg.feature_columns.push_back(name);
    } else if (key.rfind("bounds.", 0) == 0) {
      const std::string attr = key.substr(7);
      std::istringstream pair(value);
      AttributeBounds b;
      if (!(pair >> b.lo >> b.hi) || b.lo > b.hi)
        throw SchemaError("schema config: bad bounds for '" + attr +
                          "': " + value);
      cfg.public_bounds[attr] = b;
    } else {
      throw SchemaError("schema config: unknown key: " + key);
    }
  }
  if (cfg.sensitive_column.empty() || cfg.label_column.empty())
    throw SchemaError("schema config: sensitive and label are required");
  if (cfg.feature_columns.empty())
    throw SchemaError("schema config: at least one feature is required");
  return cfg;
}

SchemaConfig load_schema_config(const std::string& path) {
  return parse_schema_config(read_file(path));
}

std::size_t Dataset::group_count(Group g) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [g](const Record& r) { return r.group == g; }));
}

std::vector<double> Dataset::column(std::size_t attribute, Group g) const {
  std::vector<double> values;
  for (const auto& r : records)
    if (r.group == g) values.push_back(r.features[attribute]);
  return values;
}

std::vector<std::int64_t> Dataset::integer_column(std::size_t attribute,
                                                  Group g) const {
  std::vector<std::int64_t> values;
  for (const auto& r : records)
    if (r.group == g)
      values.push_back(std::llround(r.features[attribute]));
  return values;
}

std::size_t Shard::group_count(Group g) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [g](const Record& r) { return r.group == g; }));
}

std::vector<std::int64_t> Shard::integer_column(std::size_t attribute,
                                                Group g) const {
  std::vector<std::int64_t> values;
  for (const auto& r : records)
    if (r.group == g)
      values.push_back(std::llround(r.features[attribute]));
  return values;
}

Dataset parse_csv(const std::string& text, const SchemaConfig& config,
                  const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw SchemaError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split(line, ',');

  auto find_column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw SchemaError(origin + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t sensitive_idx = find_column(config.sensitive_column);
  const std::size_t label_idx = find_column(config.label_column);
  std::vector<std::size_t> feature_idx;
  for (const auto& name : config.feature_columns)
    feature_idx.push_back(find_column(name));

  Dataset ds;
  ds.schema = config.feature_columns;
  std::size_t row = 1;  // data rows are 1-based; header is row 0
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != header.size())
      throw ParseError(origin + ": row " + std::to_string(row) + ": has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    Record rec;
    rec.features.reserve(feature_idx.size());
    for (std::size_t j = 0; j < feature_idx.size(); ++j)
      rec.features.push_back(parse_number(
          cells[feature_idx[j]], row, config.feature_columns[j], origin));
    rec.group = cells[sensitive_idx] == config.privileged_value ? Group::V
                                                                : Group::U;
    rec.label = cells[label_idx] == config.positive_label ? 1 : 0;
    ds.records.push_back(std::move(rec));
    ++row;
  }
  return ds;
}

Dataset load_csv(const std::string& path, const SchemaConfig& config) {
  return parse_csv(read_file(path), config, path);
}

Dataset integerize(const Dataset& ds, int digits,
                   const std::map<std::string, AttributeBounds>*
                       public_bounds) {
  if (digits < 0) throw ConfigError("integerize: digits must be >= 0");
  const double scale = std::pow(10.0, digits);
  Dataset out;
  out.schema = ds.schema;
  out.records = ds.records;
  for (auto& rec : out.records)
    for (auto& x : rec.features)
      x = static_cast<double>(std::llround(x * scale));

  out.bounds.resize(ds.schema.size());
  for (std::size_t j = 0; j < ds.schema.size(); ++j) {
    const AttributeBounds* fixed = nullptr;
    if (public_bounds) {
      const auto it = public_bounds->find(ds.schema[j]);
      if (it != public_bounds->end()) fixed = &it->second;
    }
    std::int64_t lo = fixed ? fixed->lo : INT64_MAX;
    std::int64_t hi = fixed ? fixed->hi : INT64_MIN;
    for (const auto& rec : out.records) {
      const std::int64_t v = std::llround(rec.features[j]);
      if (fixed) {
        if (v < fixed->lo || v > fixed->hi)
          throw BoundsError("integerize: attribute '" + ds.schema[j] +
                            "' value " + std::to_string(v) +
                            " outside public bounds [" +
                            std::to_string(fixed->lo) + ", " +
                            std::to_string(fixed->hi) + "]");
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!fixed && out.records.empty()) lo = hi = 0;
    out.bounds[j] = {lo, hi};
  }
  return out;
}

Dataset deintegerize(const Dataset& ds, int digits) {
  if (digits < 0) throw ConfigError("deintegerize: digits must be >= 0");
  const double scale = std::pow(10.0, digits);
  Dataset out;
  out.schema = ds.schema;
  out.records = ds.records;
  for (auto& rec : out.records)
    for (auto& x : rec.features) x /= scale;
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds,
                                             double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("split_train_test: fraction must be in (0, 1)");
  std::vector<std::size_t> order(ds.n());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  const auto train_size = static_cast<std::size_t>(
      std::floor(static_cast<double>(ds.n()) * train_fraction));
  Dataset train, test;
  train.schema = test.schema = ds.schema;
  train.bounds = test.bounds = ds.bounds;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < train_size ? train : test).records.push_back(ds.records[order[i]]);
  return {std::move(train), std::move(test)};
}

std::vector<Shard> partition_horizontal(const Dataset& ds,
                                        std::size_t parties,
                                        std::uint64_t seed) {
  if (parties < 1) throw PartitionError("partition: need at least 1 party");
  if (parties > ds.n())
    throw PartitionError("partition: " + std::to_string(parties) +
                         " parties but only " + std::to_string(ds.n()) +
                         " records");
  std::vector<std::size_t> order(ds.n());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::vector<std::size_t>> assigned(parties);
  for (std::size_t i = 0; i < order.size(); ++i)
    assigned[i % parties].push_back(order[i]);

  std::vector<Shard> shards(parties);
  for (std::size_t p = 0; p < parties; ++p) {
    std::sort(assigned[p].begin(), assigned[p].end());
    shards[p].owner = p;
    for (const std::size_t idx : assigned[p])
      shards[p].records.push_back(ds.records[idx]);
  }
  return shards;
}

}  // namespace fairprep
