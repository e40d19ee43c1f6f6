#include "txseq/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "txseq/random.hpp"

namespace txseq {

using nlohmann::json;

namespace {

std::vector<std::string> string_array(const json& value, const char* key, std::size_t line) {
  if (!value.is_array()) throw DatasetError(line, std::string(key) + " must be an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string()) throw DatasetError(line, std::string(key) + " must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

DatasetRecord parse_record(const std::string& text, std::size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DatasetError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DatasetError(line, "record must be a JSON object");

  static const std::unordered_set<std::string> known = {"id",    "gas_price", "exec_time",
                                                        "reads", "writes",    "base_fee"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw DatasetError(line, "unknown key '" + key + "'");
  }
  for (const char* key : {"id", "gas_price", "exec_time", "reads", "writes"}) {
    if (!j.contains(key)) throw DatasetError(line, std::string("missing key '") + key + "'");
  }

  DatasetRecord r;
  if (!j["id"].is_string()) throw DatasetError(line, "id must be a string");
  r.id = j["id"].get<std::string>();
  if (!j["gas_price"].is_number()) throw DatasetError(line, "gas_price must be a number");
  r.gas_price = j["gas_price"].get<double>();
  if (!(r.gas_price >= 0.0) || !std::isfinite(r.gas_price)) {
    throw DatasetError(line, "gas_price must be >= 0");
  }
  if (!j["exec_time"].is_number_integer()) throw DatasetError(line, "exec_time must be an integer");
  r.exec_time = j["exec_time"].get<Time>();
  if (r.exec_time < 1) throw DatasetError(line, "exec_time must be >= 1");
  r.reads = string_array(j["reads"], "reads", line);
  r.writes = string_array(j["writes"], "writes", line);
  if (j.contains("base_fee")) {
    if (!j["base_fee"].is_number()) throw DatasetError(line, "base_fee must be a number");
    const double fee = j["base_fee"].get<double>();
    if (!(fee > 0.0) || !std::isfinite(fee)) throw DatasetError(line, "base_fee must be > 0");
    r.base_fee = fee;
  }
  return r;
}

}  // namespace

std::vector<DatasetRecord> load_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::unordered_set<std::string> ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    DatasetRecord record = parse_record(text, line);
    if (!ids.insert(record.id).second) {
      throw DatasetError(line, "duplicate id '" + record.id + "'");
    }
    out.push_back(std::move(record));
  }
  return out;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(0, "cannot open " + path.string());
  return load_dataset(in);
}

void write_dataset(std::ostream& out, std::span<const DatasetRecord> records) {
  for (const auto& r : records) {
    json j;
    j["id"] = r.id;
    j["gas_price"] = r.gas_price;
    j["exec_time"] = r.exec_time;
    j["reads"] = r.reads;
    j["writes"] = r.writes;
    if (r.base_fee) j["base_fee"] = *r.base_fee;
    out << j.dump() << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, std::span<const DatasetRecord> records) {
  std::ofstream out(path);
  if (!out) throw DatasetError(0, "cannot write " + path.string());
  write_dataset(out, records);
}

double normalize_eth_gas(double gas_price, double base_fee) {
  if (!(base_fee > 0.0)) throw std::invalid_argument("base fee must be > 0");
  return gas_price / base_fee;
}

std::vector<DatasetRecord> normalize_eth_stream(std::span<const DatasetRecord> eth) {
  std::vector<DatasetRecord> out;
  out.reserve(eth.size());
  for (std::size_t k = 0; k < eth.size(); ++k) {
    if (!eth[k].base_fee) throw DatasetError(k + 1, "record '" + eth[k].id + "' has no base_fee");
    DatasetRecord r = eth[k];
    r.gas_price = normalize_eth_gas(r.gas_price, *r.base_fee);
    r.base_fee.reset();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DatasetRecord> project_object_sets(std::span<const DatasetRecord> eth,
                                               std::span<const DatasetRecord> sui,
                                               std::size_t start_index) {
  if (sui.empty() && !eth.empty()) throw std::invalid_argument("object source stream is empty");
  std::vector<DatasetRecord> out;
  out.reserve(eth.size());
  for (std::size_t k = 0; k < eth.size(); ++k) {
    const DatasetRecord& source = sui[(start_index + k) % sui.size()];
    DatasetRecord r = eth[k];
    r.reads = source.reads;
    r.writes = source.writes;
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t projection_start(std::size_t sui_size, std::uint64_t seed) {
  if (sui_size == 0) return 0;
  Rng rng(derive_seed(seed, {0x70726f6a}));
  return static_cast<std::size_t>(rng.uniform(sui_size));
}

ObjectId ObjectInterner::intern(const std::string& name) {
  auto [it, inserted] = ids_.emplace(name, ObjectId{names_.size()});
  if (inserted) names_.push_back(name);
  return it->second;
}

std::vector<Transaction> to_transactions(std::span<const DatasetRecord> records,
                                         ObjectInterner& interner) {
  std::vector<Transaction> out;
  out.reserve(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    std::vector<ObjectId> reads, writes;
    reads.reserve(r.reads.size());
    writes.reserve(r.writes.size());
    for (const auto& name : r.reads) reads.push_back(interner.intern(name));
    for (const auto& name : r.writes) writes.push_back(interner.intern(name));
    out.emplace_back(TxId{k}, std::move(reads), std::move(writes), r.exec_time, r.gas_price);
  }
  return out;
}

void PerturbationSpec::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
}

double perturbation_multiplier(const PerturbationSpec& spec, std::uint64_t draw_index) {
  if (!spec.enabled) return 1.0;
  if (spec.sigma == 0.0) return std::exp(spec.mu);
  return std::exp(spec.mu + spec.sigma * indexed_standard_normal(spec.seed, draw_index));
}

Time perturb_exec_time(Time t, const PerturbationSpec& spec, std::uint64_t draw_index) {
  if (!spec.enabled) return t;
  const double scaled = static_cast<double>(t) * perturbation_multiplier(spec, draw_index);
  const auto rounded = static_cast<Time>(std::floor(scaled + 0.5));
  return std::max<Time>(1, rounded);
}

double jaccard(std::span<const ObjectId> a, std::span<const ObjectId> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

std::map<std::size_t, double> jaccard_by_distance(std::span<const Transaction> stream,
                                                  std::size_t sample_size,
                                                  std::size_t max_distance, std::uint64_t seed) {
  std::vector<double> sum(max_distance + 1, 0.0);
  std::vector<std::size_t> count(max_distance + 1, 0);
  std::map<std::size_t, double> out;
  if (stream.size() < 2) return out;
  Rng rng(seed);
  for (std::size_t s = 0; s < sample_size; ++s) {
    const std::size_t a = rng.uniform(stream.size());
    const auto ta = stream[a].touched();
    for (std::size_t d = 1; d <= max_distance && a + d < stream.size(); ++d) {
      const auto tb = stream[a + d].touched();
      if (ta.empty() && tb.empty()) continue;
      sum[d] += jaccard(ta, tb);
      ++count[d];
    }
  }
  for (std::size_t d = 1; d <= max_distance; ++d) {
    if (count[d] > 0) out[d] = sum[d] / static_cast<double>(count[d]);
  }
  return out;
}

}  // namespace txseq
