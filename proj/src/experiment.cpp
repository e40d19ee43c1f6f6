#include "txseq/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "txseq/random.hpp"

namespace txseq {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<SequencerSpec> parse_lineup(const std::vector<std::string>& names) {
  std::vector<SequencerSpec> out;
  for (const auto& name : names) {
    try {
      out.push_back(parse_sequencer(name));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

std::vector<SequencerSpec> default_lineup() {
  return parse_lineup({"sui", "gas_price", "lowest_exec_time", "given", "random",
                       "genetic:100:10", "genetic:100:50"});
}

template <class T>
T get_field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& j, const char* key) {
  if (!j.at(key).is_number_unsigned()) {
    throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
  }
  return j.at(key).get<std::size_t>();
}

void check_keys(const json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

std::vector<std::size_t> ExperimentConfig::traffic_counts() const {
  switch (scenario) {
    case ScenarioKind::Sustained:
      return sustained_traffic(blocks, tx_per_block);
    case ScenarioKind::Spike:
      return spike_traffic(blocks, spike.low, spike.high, spike.begin, spike.end);
    case ScenarioKind::Custom:
      return traffic;
  }
  return {};
}

std::optional<std::size_t> ExperimentConfig::spike_end() const {
  if (scenario != ScenarioKind::Spike || spike.end == 0) return std::nullopt;
  return spike.end - 1;
}

void ExperimentConfig::validate() const {
  try {
    round.validate();
    perturbation.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (sequencers.empty()) throw ConfigError("the sequencer lineup is empty");
  if (scenario == ScenarioKind::Custom && traffic.empty()) {
    throw ConfigError("custom scenario needs a traffic vector");
  }
  if (scenario == ScenarioKind::Spike && (spike.begin > spike.end || spike.end > blocks)) {
    throw ConfigError("spike interval must lie within the scenario");
  }
  if (dataset.empty() && synthetic_size == 0) throw ConfigError("synthetic size must be > 0");
}

ExperimentConfig ExperimentConfig::sustained_preset() {
  ExperimentConfig c;
  c.dataset = "data/sui_like.jsonl";
  c.sequencers = parse_lineup({"sui", "gas_price", "lowest_exec_time", "given", "random",
                               "genetic:100:10", "genetic:100:50", "fair_gas_price",
                               "fair_genetic:100:10"});
  return c;
}

ExperimentConfig ExperimentConfig::spike_preset() {
  ExperimentConfig c;
  c.dataset = "data/sui_like.jsonl";
  c.scenario = ScenarioKind::Spike;
  c.round.max_deferrals = 200;
  c.sequencers = default_lineup();
  return c;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"dataset", "synthetic", "scenario", "blocks", "tx_per_block", "spike", "traffic",
              "workers", "deadline", "theta", "sequencers", "perturbation", "seed", "report_from",
              "out"},
             "config");

  ExperimentConfig c;
  c.sequencers = default_lineup();
  if (j.contains("scenario")) {
    const auto name = get_field<std::string>(j, "scenario");
    if (name == "sustained") {
      c = ExperimentConfig::sustained_preset();
    } else if (name == "spike") {
      c = ExperimentConfig::spike_preset();
    } else if (name == "custom") {
      c.scenario = ScenarioKind::Custom;
    } else {
      throw ConfigError("unknown scenario '" + name + "'");
    }
  }
  if (j.contains("dataset")) {
    if (j["dataset"].is_null()) {
      c.dataset.clear();
    } else {
      c.dataset = get_field<std::string>(j, "dataset");
      if (c.dataset.is_relative() && !base_dir.empty()) c.dataset = base_dir / c.dataset;
    }
  }
  if (j.contains("synthetic")) {
    const json& s = j["synthetic"];
    check_keys(s, {"profile", "n", "seed"}, "synthetic");
    try {
      if (s.contains("profile")) c.synthetic_profile = parse_profile(get_field<std::string>(s, "profile"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (s.contains("n")) c.synthetic_size = get_count(s, "n");
    if (s.contains("seed")) c.synthetic_seed = get_field<std::uint64_t>(s, "seed");
    if (!j.contains("dataset")) c.dataset.clear();
  }
  if (j.contains("blocks")) c.blocks = get_count(j, "blocks");
  if (j.contains("tx_per_block")) c.tx_per_block = get_count(j, "tx_per_block");
  if (j.contains("spike")) {
    const json& s = j["spike"];
    check_keys(s, {"low", "high", "begin", "end"}, "spike");
    if (s.contains("low")) c.spike.low = get_count(s, "low");
    if (s.contains("high")) c.spike.high = get_count(s, "high");
    if (s.contains("begin")) c.spike.begin = get_count(s, "begin");
    if (s.contains("end")) c.spike.end = get_count(s, "end");
  }
  if (j.contains("traffic")) {
    c.traffic.clear();
    if (!j["traffic"].is_array()) throw ConfigError("traffic must be an array");
    for (const auto& v : j["traffic"]) {
      if (!v.is_number_unsigned()) throw ConfigError("traffic entries must be non-negative integers");
      c.traffic.push_back(v.get<std::size_t>());
    }
    c.scenario = ScenarioKind::Custom;
    c.blocks = c.traffic.size();
  }
  if (j.contains("workers")) c.round.workers = static_cast<std::uint32_t>(get_count(j, "workers"));
  if (j.contains("deadline")) c.round.deadline = static_cast<Time>(get_count(j, "deadline"));
  if (j.contains("theta")) c.round.max_deferrals = static_cast<std::uint32_t>(get_count(j, "theta"));
  if (j.contains("sequencers")) {
    c.sequencers = parse_lineup(get_field<std::vector<std::string>>(j, "sequencers"));
  }
  if (j.contains("perturbation")) {
    const json& p = j["perturbation"];
    check_keys(p, {"enabled", "mu", "sigma", "seed"}, "perturbation");
    if (p.contains("enabled")) c.perturbation.enabled = get_field<bool>(p, "enabled");
    if (p.contains("mu")) c.perturbation.mu = get_field<double>(p, "mu");
    if (p.contains("sigma")) c.perturbation.sigma = get_field<double>(p, "sigma");
    if (p.contains("seed")) {
      c.perturbation.seed = get_field<std::uint64_t>(p, "seed");
      c.perturbation_seed_set = true;
    }
  }
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("report_from")) c.report_from = get_count(j, "report_from");
  if (j.contains("out")) c.out = get_field<std::string>(j, "out");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  if (c.dataset.empty()) {
    j["dataset"] = nullptr;
    j["synthetic"] = {{"profile", std::string(to_string(c.synthetic_profile))},
                      {"n", c.synthetic_size},
                      {"seed", c.synthetic_seed}};
  } else {
    j["dataset"] = c.dataset.generic_string();
  }
  j["scenario"] = c.scenario == ScenarioKind::Sustained ? "sustained"
                  : c.scenario == ScenarioKind::Spike   ? "spike"
                                                        : "custom";
  j["blocks"] = c.blocks;
  if (c.scenario == ScenarioKind::Sustained) j["tx_per_block"] = c.tx_per_block;
  if (c.scenario == ScenarioKind::Spike) {
    j["spike"] = {{"low", c.spike.low}, {"high", c.spike.high},
                  {"begin", c.spike.begin}, {"end", c.spike.end}};
  }
  if (c.scenario == ScenarioKind::Custom) j["traffic"] = c.traffic;
  j["workers"] = c.round.workers;
  j["deadline"] = c.round.deadline;
  j["theta"] = c.round.max_deferrals;
  std::vector<std::string> names;
  for (const auto& s : c.sequencers) names.push_back(s.name());
  j["sequencers"] = names;
  j["perturbation"] = {{"enabled", c.perturbation.enabled},
                       {"mu", c.perturbation.mu},
                       {"sigma", c.perturbation.sigma}};
  if (c.perturbation_seed_set) j["perturbation"]["seed"] = c.perturbation.seed;
  j["seed"] = c.seed;
  j["report_from"] = c.report_from;
  j["out"] = c.out.generic_string();
  return j.dump(2);
}

std::vector<std::size_t> parse_traffic_spec(const std::string& spec) {
  auto number = [&](std::string_view text) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
      throw ConfigError("bad traffic spec '" + spec + "'");
    }
    return v;
  };
  std::vector<std::size_t> out;
  std::string_view rest(spec);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto x = item.find('x');
    if (x == std::string_view::npos) {
      out.push_back(number(item));
    } else {
      out.insert(out.end(), number(item.substr(x + 1)), number(item.substr(0, x)));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<Transaction> load_stream(const ExperimentConfig& config) {
  std::vector<DatasetRecord> records =
      config.dataset.empty()
          ? generate_synthetic(config.synthetic_profile, config.synthetic_size, config.synthetic_seed)
          : load_dataset(config.dataset);
  ObjectInterner interner;
  return to_transactions(records, interner);
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const Transaction> stream) {
  config.validate();
  const auto counts = config.traffic_counts();
  const auto traffic = make_traffic(stream, counts);
  PerturbationSpec perturbation = config.perturbation;
  if (!config.perturbation_seed_set) perturbation.seed = derive_seed(config.seed, {0x7065});

  ExperimentResult result;
  for (std::size_t i = 0; i < config.sequencers.size(); ++i) {
    SequencerRun run;
    run.spec = config.sequencers[i];
    run.rounds = run_scenario(traffic, run.spec, config.round, perturbation,
                              derive_seed(config.seed, {1, i}));
    run.metrics = block_metrics(run.rounds);
    result.runs.push_back(std::move(run));
  }
  std::vector<std::string> names;
  std::vector<std::vector<BlockMetrics>> metrics;
  for (const auto& run : result.runs) {
    names.push_back(run.spec.name());
    metrics.push_back(run.metrics);
  }
  const std::size_t window = counts.empty() ? 0 : std::min(config.report_from, counts.size() - 1);
  if (!counts.empty()) result.summaries = summarize(names, metrics, window, config.spike_end());
  return result;
}

namespace {

json mean_hw_json(const MeanHw& m) { return {{"mean", m.mean}, {"half_width", m.half_width}}; }

json round_json(const RoundResult& r, bool fair, std::uint32_t workers) {
  json j;
  j["round"] = r.round;
  j["origin"] = r.origin;
  j["deadline"] = r.deadline_new;
  j["workers"] = workers;
  j["fair"] = fair;
  json objects = json::array();
  for (const auto& [k, off] : r.carryover.object_offsets) objects.push_back({k.value, off});
  j["carryover"] = {{"workers", r.carryover.worker_offsets}, {"objects", objects}};
  json txs = json::array();
  for (const auto& tx : r.transactions) {
    json reads = json::array(), writes = json::array();
    for (ObjectId k : tx.reads()) reads.push_back(k.value);
    for (ObjectId k : tx.writes()) writes.push_back(k.value);
    txs.push_back({{"id", tx.id().value},
                   {"reads", reads},
                   {"writes", writes},
                   {"exec_time", tx.exec_time()},
                   {"gas_price", tx.gas_price()}});
  }
  j["transactions"] = txs;
  json entries = json::array();
  for (const auto& e : r.schedule.entries()) {
    if (e.placement) {
      const auto& real = r.realized.placements.at(e.tx);
      entries.push_back({{"tx", e.tx.value},
                         {"start", e.placement->start},
                         {"worker", e.placement->worker},
                         {"actual_start", real.start},
                         {"actual_duration", r.realized.durations.at(e.tx)}});
    } else {
      entries.push_back({{"tx", e.tx.value}, {"deferred", true}});
    }
  }
  j["entries"] = entries;
  j["canceled"] = json::array();
  for (TxId id : r.canceled) j["canceled"].push_back(id.value);
  return j;
}

std::string file_stem(std::size_t index, const SequencerSpec& spec) {
  std::string name = spec.name();
  for (char& ch : name) {
    if (ch == ':') ch = '_';
  }
  char prefix[16];
  std::snprintf(prefix, sizeof prefix, "%02zu_", index);
  return prefix + name;
}

}  // namespace

void write_results(const ExperimentConfig& config, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out / "schedules");
  {
    std::ofstream out(config.out / "config.json");
    out << config_to_json(config) << '\n';
  }
  {
    std::ofstream csv(config.out / "blocks.csv");
    csv << "block_index,sequencer,scheduled,deferred,canceled,profit,d_new,mean_latency\n";
    for (const auto& run : result.runs) {
      const std::string name = run.spec.name();
      for (const auto& b : run.metrics) {
        csv << b.block_index << ',' << name << ',' << b.scheduled << ',' << b.deferred << ','
            << b.canceled << ',' << format_double(b.profit) << ',' << b.deadline_new << ','
            << format_double(b.mean_latency()) << '\n';
      }
    }
  }
  {
    json summary;
    summary["report_from"] = config.report_from;
    summary["spike_end"] = config.spike_end() ? json(*config.spike_end()) : json(nullptr);
    json list = json::array();
    for (const auto& s : result.summaries) {
      list.push_back({{"sequencer", s.sequencer},
                      {"throughput", mean_hw_json(s.throughput)},
                      {"normalized_profit", mean_hw_json(s.normalized_profit)},
                      {"final_normalized_profit", s.final_normalized_profit},
                      {"total_profit", s.total_profit},
                      {"latency", mean_hw_json(s.latency)},
                      {"blocks_to_recover", s.blocks_to_recover ? json(*s.blocks_to_recover)
                                                                : json(nullptr)}});
    }
    summary["sequencers"] = list;
    std::ofstream out(config.out / "summary.json");
    out << summary.dump(2) << '\n';
  }
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const auto& run = result.runs[i];
    std::ofstream out(config.out / "schedules" / (file_stem(i, run.spec) + ".jsonl"));
    for (const auto& r : run.rounds) {
      out << round_json(r, run.spec.fair(), config.round.workers).dump() << '\n';
    }
  }
}

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
  std::vector<Transaction> stream;
  try {
    config.validate();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    stream = load_stream(config);
  } catch (const DatasetError& e) {
    log << "dataset error: " << e.what() << '\n';
    return kExitDataset;
  } catch (const std::invalid_argument& e) {
    log << "dataset error: " << e.what() << '\n';
    return kExitDataset;
  }
  if (stream.empty() && !config.traffic_counts().empty()) {
    log << "dataset error: the transaction stream is empty\n";
    return kExitDataset;
  }
  const ExperimentResult result = run_experiment(config, stream);
  write_results(config, result);
  for (const auto& s : result.summaries) {
    log << s.sequencer << ": throughput " << s.throughput.mean << " +- " << s.throughput.half_width
        << ", normalized profit " << s.final_normalized_profit;
    if (config.spike_end()) {
      log << ", blocks to recover ";
      if (s.blocks_to_recover) {
        log << *s.blocks_to_recover;
      } else {
        log << "not recovered";
      }
    }
    log << '\n';
  }
  return kExitOk;
}

int cmd_prepare(const std::filesystem::path& eth_path, const std::filesystem::path& sui_path,
                std::uint64_t seed, const std::filesystem::path& out, std::ostream& log) {
  try {
    const auto eth = normalize_eth_stream(load_dataset(eth_path));
    const auto sui = load_dataset(sui_path);
    if (sui.empty() && !eth.empty()) throw DatasetError(0, "object source dataset is empty");
    const auto merged = project_object_sets(eth, sui, projection_start(sui.size(), seed));
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    write_dataset(out, merged);
    log << "wrote " << merged.size() << " records to " << out.string() << '\n';
    return kExitOk;
  } catch (const DatasetError& e) {
    log << "dataset error: " << e.what() << '\n';
    return kExitDataset;
  } catch (const std::invalid_argument& e) {
    log << "dataset error: " << e.what() << '\n';
    return kExitDataset;
  }
}

int cmd_analyze(const std::filesystem::path& dataset, std::size_t sample, std::size_t max_distance,
                std::uint64_t seed, const std::filesystem::path& out, std::ostream& log) {
  std::vector<Transaction> stream;
  try {
    ObjectInterner interner;
    stream = to_transactions(load_dataset(dataset), interner);
  } catch (const DatasetError& e) {
    log << "dataset error: " << e.what() << '\n';
    return kExitDataset;
  }
  const auto curve = jaccard_by_distance(stream, sample, max_distance, seed);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream csv(out);
  csv << "distance,mean_jaccard\n";
  for (const auto& [d, v] : curve) csv << d << ',' << format_double(v) << '\n';
  log << "wrote " << curve.size() << " distances to " << out.string() << '\n';
  return kExitOk;
}

namespace {

struct StoredRound {
  std::vector<Transaction> txs;
  Schedule schedule;
  Carryover carryover;
  SchedulingConfig config;
  std::unordered_map<TxId, Time> durations;
  Schedule realized;
  bool fair = false;
};

StoredRound parse_round(const json& j) {
  StoredRound r;
  r.config.deadline = j.at("deadline").get<Time>();
  r.config.workers = j.at("workers").get<std::uint32_t>();
  r.fair = j.at("fair").get<bool>();
  r.carryover.worker_offsets = j.at("carryover").at("workers").get<std::vector<Time>>();
  for (const auto& item : j.at("carryover").at("objects")) {
    r.carryover.object_offsets.emplace(ObjectId{item.at(0).get<std::uint64_t>()},
                                       item.at(1).get<Time>());
  }
  for (const auto& t : j.at("transactions")) {
    std::vector<ObjectId> reads, writes;
    for (const auto& k : t.at("reads")) reads.push_back(ObjectId{k.get<std::uint64_t>()});
    for (const auto& k : t.at("writes")) writes.push_back(ObjectId{k.get<std::uint64_t>()});
    r.txs.emplace_back(TxId{t.at("id").get<std::uint64_t>()}, std::move(reads), std::move(writes),
                       t.at("exec_time").get<Time>(), t.at("gas_price").get<double>());
  }
  for (const auto& e : j.at("entries")) {
    const TxId id{e.at("tx").get<std::uint64_t>()};
    if (e.contains("deferred")) {
      r.schedule.defer(id);
      r.realized.defer(id);
    } else {
      const auto worker = e.at("worker").get<std::uint32_t>();
      r.schedule.place(id, {e.at("start").get<Time>(), worker});
      r.realized.place(id, {e.at("actual_start").get<Time>(), worker});
      r.durations.emplace(id, e.at("actual_duration").get<Time>());
    }
  }
  return r;
}

}  // namespace

int cmd_validate(const std::filesystem::path& results_dir, std::ostream& log) {
  namespace fs = std::filesystem;
  const fs::path dir = results_dir / "schedules";
  if (!fs::is_directory(dir)) {
    log << "no schedules directory under " << results_dir.string() << '\n';
    return kExitConfig;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t violations = 0, rounds = 0;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      StoredRound r;
      try {
        r = parse_round(json::parse(line));
      } catch (const std::exception& e) {
        log << file.filename().string() << ":" << line_no << ": unreadable round: " << e.what()
            << '\n';
        ++violations;
        continue;
      }
      ++rounds;
      auto report = [&](const std::vector<Violation>& found, const char* what) {
        for (const auto& v : found) {
          log << file.filename().string() << ":" << line_no << ": " << what << " " << v.rule
              << " tx " << v.tx.value << ": " << v.detail << '\n';
        }
        violations += found.size();
      };
      report(validate_schedule(r.schedule, r.txs, r.config, r.carryover), "estimated");
      ValidationOptions realized;
      realized.check_deadline = false;
      realized.durations = &r.durations;
      report(validate_schedule(r.realized, r.txs, r.config, r.carryover, realized), "realized");
      if (r.fair) report(validate_fair_order(r.schedule, r.txs), "estimated");
    }
  }
  log << "checked " << rounds << " rounds in " << files.size() << " files: " << violations
      << " violations\n";
  return violations == 0 ? kExitOk : kExitValidation;
}

int cmd_generate(SyntheticProfile profile, std::size_t n, std::uint64_t seed,
                 const std::filesystem::path& out, std::ostream& log) {
  const auto records = generate_synthetic(profile, n, seed);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  write_dataset(out, records);
  log << "wrote " << records.size() << " records to " << out.string() << '\n';
  return kExitOk;
}

}  // namespace txseq
