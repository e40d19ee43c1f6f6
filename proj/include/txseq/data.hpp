#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "txseq/core.hpp"

namespace txseq {

/// One line of a dataset file.
struct DatasetRecord {
  std::string id;
  double gas_price = 0.0;
  Time exec_time = 1;
  std::vector<std::string> reads;
  std::vector<std::string> writes;
  std::optional<double> base_fee;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

class DatasetError : public std::runtime_error {
 public:
  DatasetError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses line-delimited JSON records. Blank lines are skipped; malformed
/// lines, invalid values, unknown keys and duplicate ids raise DatasetError.
std::vector<DatasetRecord> load_dataset(std::istream& in);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, std::span<const DatasetRecord> records);
void write_dataset(const std::filesystem::path& path, std::span<const DatasetRecord> records);

/// gas_price / base_fee. Throws std::invalid_argument if base_fee <= 0.
double normalize_eth_gas(double gas_price, double base_fee);

/// Replaces each record's gas price by its base-fee-normalized value and
/// drops the base fee. Records without a base fee are rejected.
std::vector<DatasetRecord> normalize_eth_stream(std::span<const DatasetRecord> eth);

/// Gives the k-th ETH record the object sets of sui[(start_index + k) mod
/// |sui|], keeping its execution time and gas price.
std::vector<DatasetRecord> project_object_sets(std::span<const DatasetRecord> eth,
                                               std::span<const DatasetRecord> sui,
                                               std::size_t start_index);
/// Start index drawn uniformly from the seed.
std::size_t projection_start(std::size_t sui_size, std::uint64_t seed);

/// Consecutive, order-preserving groups of the requested sizes; a trailing
/// remainder becomes one final partial group.
template <class T>
std::vector<std::vector<T>> partition_blocks(std::span<const T> stream,
                                             std::span<const std::size_t> per_block_counts) {
  std::vector<std::vector<T>> blocks;
  std::size_t pos = 0;
  for (std::size_t count : per_block_counts) {
    const std::size_t take = std::min(count, stream.size() - pos);
    blocks.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(pos),
                        stream.begin() + static_cast<std::ptrdiff_t>(pos + take));
    pos += take;
  }
  if (pos < stream.size()) {
    blocks.emplace_back(stream.begin() + static_cast<std::ptrdiff_t>(pos), stream.end());
  }
  return blocks;
}

/// Interns object names to dense ObjectId tokens.
class ObjectInterner {
 public:
  ObjectId intern(const std::string& name);
  const std::string& name(ObjectId id) const { return names_.at(id.value); }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::unordered_map<std::string, ObjectId> ids_;
  std::vector<std::string> names_;
};

/// Converts records to transactions; the k-th record gets TxId k.
std::vector<Transaction> to_transactions(std::span<const DatasetRecord> records,
                                         ObjectInterner& interner);

struct PerturbationSpec {
  bool enabled = false;
  double mu = 0.0;
  double sigma = 0.347;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;
};

/// e^X with X ~ N(mu, sigma^2), drawn deterministically from (seed, index).
/// Exactly 1 when disabled.
double perturbation_multiplier(const PerturbationSpec& spec, std::uint64_t draw_index);

/// round-half-up(t * multiplier), clamped to >= 1.
Time perturb_exec_time(Time t, const PerturbationSpec& spec, std::uint64_t draw_index);

/// |A ∩ B| / |A ∪ B| over sorted, duplicate-free sets; 0 when both are empty.
double jaccard(std::span<const ObjectId> a, std::span<const ObjectId> b);

/// Mean Jaccard similarity of touched sets for pairs at each ordinal
/// distance 1..max_distance, over `sample_size` anchors drawn uniformly
/// with replacement. Pairs whose sets are both empty are skipped.
std::map<std::size_t, double> jaccard_by_distance(std::span<const Transaction> stream,
                                                  std::size_t sample_size,
                                                  std::size_t max_distance, std::uint64_t seed);

}  // namespace txseq
