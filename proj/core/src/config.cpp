#include "ppenkf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ppenkf {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

json parse_scalar(const std::string& raw, const std::string& key) {
  const std::string v = trim(raw);
  if (v.empty()) throw std::invalid_argument(key + ": empty value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  // number?
  char* end = nullptr;
  const double num = std::strtod(v.c_str(), &end);
  if (end == v.c_str() + v.size()) {
    if (v.find_first_of(".eE") == std::string::npos &&
        num >= -9.0e18 && num <= 9.0e18 && num == std::floor(num))
      return static_cast<std::int64_t>(num);
    return num;
  }
  return v;  // bare string
}

json parse_value(const std::string& raw, const std::string& key) {
  const std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw std::invalid_argument(key + ": unterminated array");
    json arr = json::array();
    std::string inner = v.substr(1, v.size() - 2);
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (trim(item).empty()) continue;
      arr.push_back(parse_scalar(item, key));
    }
    return arr;
  }
  return parse_scalar(v, key);
}

/// `a.b.c = value` lines into a nested json object.
json parse_keyvalue_text(const std::string& text) {
  json root = json::object();
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    json* node = &root;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (dot == std::string::npos) {
        (*node)[part] = parse_value(line.substr(eq + 1), key);
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }
  return root;
}

/// Tracks which leaf paths were consumed so unknown keys can be reported.
class ConfigReader {
 public:
  explicit ConfigReader(const json& root) { flatten(root, "", leaves_); }

  bool has(const std::string& key) const { return leaves_.count(key) > 0; }

  template <typename T>
  T get(const std::string& key, T fallback) {
    const auto it = leaves_.find(key);
    if (it == leaves_.end()) return fallback;
    consumed_.insert(key);
    try {
      return it->second.get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(key + ": expected " + type_name<T>() + ", got " +
                                  it->second.dump());
    }
  }

  void finish() const {
    std::string unknown;
    for (const auto& [key, value] : leaves_)
      if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    if (!unknown.empty()) throw std::invalid_argument("unknown config key(s): " + unknown);
  }

 private:
  template <typename T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else if constexpr (std::is_same_v<T, std::vector<std::string>>) return "a string array";
    else if constexpr (std::is_same_v<T, std::vector<int>>) return "an integer array";
    else if constexpr (std::is_same_v<T, std::vector<double>>) return "a number array";
    else return "a number";
  }

  static void flatten(const json& node, const std::string& prefix,
                      std::map<std::string, json>& out) {
    if (node.is_object()) {
      for (const auto& [key, value] : node.items())
        flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    } else {
      out[prefix] = node;
    }
  }

  std::map<std::string, json> leaves_;
  std::set<std::string> consumed_;
};

ScenarioKind scenario_from_string(const std::string& name) {
  if (name == "tracer") return ScenarioKind::Tracer;
  if (name == "well") return ScenarioKind::Well;
  throw std::invalid_argument("scenario: expected tracer or well, got '" + name + "'");
}

void read_shared(ConfigReader& r, ExperimentConfig& cfg) {
  cfg.master_seed = static_cast<std::uint64_t>(
      r.get<std::int64_t>("seed", static_cast<std::int64_t>(cfg.master_seed)));
  cfg.truth.mean = r.get("truth.mean", cfg.truth.mean);
  cfg.truth.std = r.get("truth.std", cfg.truth.std);
  cfg.truth.correlation_length_m =
      r.get("truth.correlation_length", cfg.truth.correlation_length_m);
  cfg.truth.range_factor = r.get("truth.range_factor", cfg.truth.range_factor);
  cfg.prior.mean = r.get("prior.mean", cfg.prior.mean);
  cfg.prior.std = r.get("prior.std", cfg.prior.std);
  cfg.prior.correlation_length_m =
      r.get("prior.correlation_length", cfg.prior.correlation_length_m);
  cfg.prior.range_factor = r.get("prior.range_factor", cfg.prior.range_factor);

  cfg.filter.damping = r.get("filter.damping", cfg.filter.damping);
  cfg.filter.localization_length_m =
      r.get("filter.localization_length", cfg.filter.localization_length_m);
  cfg.filter.hybrid_alpha = r.get("filter.hybrid_alpha", cfg.filter.hybrid_alpha);
  cfg.filter.hybrid_background_variance =
      r.get("filter.hybrid_background_variance", cfg.filter.hybrid_background_variance);
  cfg.filter.ns_transform_dynamic =
      r.get("filter.ns_transform_dynamic", cfg.filter.ns_transform_dynamic);

  cfg.pilot_grid.kind =
      pilot_grid_kind_from_string(r.get<std::string>("pilot.kind", to_string(cfg.pilot_grid.kind)));
  cfg.pilot_grid.k = static_cast<int>(r.get<std::int64_t>("pilot.k", cfg.pilot_grid.k));
  if (r.has("pilot.cells")) {
    cfg.pilot_grid.custom_cells = r.get<std::vector<int>>("pilot.cells", {});
    if (cfg.pilot_grid.kind != PilotGridKind::Custom)
      throw std::invalid_argument("pilot.cells: only valid with pilot.kind = custom");
  }

  const std::string source = r.get<std::string>(
      "prp0.source", cfg.prp0_source == CovarianceSource::Empirical ? "empirical" : "analytic");
  if (source == "empirical") cfg.prp0_source = CovarianceSource::Empirical;
  else if (source == "analytic") cfg.prp0_source = CovarianceSource::Analytic;
  else throw std::invalid_argument("prp0.source: expected empirical or analytic");
  cfg.prp0_fields = static_cast<int>(r.get<std::int64_t>("prp0.fields", cfg.prp0_fields));

  cfg.sigma_head = r.get("observation.sigma_head", cfg.sigma_head);
  cfg.sigma_conc = r.get("observation.sigma_conc", cfg.sigma_conc);
  cfg.assimilate_concentration =
      r.get("observation.assimilate_concentration", cfg.assimilate_concentration);
  cfg.max_assimilation_times = static_cast<int>(
      r.get<std::int64_t>("observation.max_times", cfg.max_assimilation_times));
  cfg.r_inflation = r.get("observation.r_inflation", cfg.r_inflation);

  cfg.specific_storage = r.get("forward.specific_storage", cfg.specific_storage);
  cfg.jobs = static_cast<int>(r.get<std::int64_t>("jobs", cfg.jobs));
}

json variogram_json(const VariogramSpec& v) {
  return json{{"mean", v.mean},
              {"std", v.std},
              {"correlation_length", v.correlation_length_m},
              {"range_factor", v.range_factor}};
}

json experiment_json(const ExperimentConfig& c) {
  json pilot{{"kind", to_string(c.pilot_grid.kind)}, {"k", c.pilot_grid.k}};
  if (!c.pilot_grid.custom_cells.empty()) pilot["cells"] = c.pilot_grid.custom_cells;
  return json{
      {"scenario", to_string(c.scenario)},
      {"seed", c.master_seed},
      {"experiment_index", c.experiment_index},
      {"ensemble_size", c.ensemble_size},
      {"method", to_string(c.filter.variant)},
      {"fixed_truth", c.fixed_truth},
      {"truth", variogram_json(c.truth)},
      {"prior", variogram_json(c.prior)},
      {"filter",
       {{"damping", c.filter.damping},
        {"localization_length", c.filter.localization_length_m},
        {"hybrid_alpha", c.filter.hybrid_alpha},
        {"hybrid_background_variance", c.filter.hybrid_background_variance},
        {"ns_transform_dynamic", c.filter.ns_transform_dynamic}}},
      {"pilot", pilot},
      {"prp0",
       {{"source", c.prp0_source == CovarianceSource::Empirical ? "empirical" : "analytic"},
        {"fields", c.prp0_fields}}},
      {"observation",
       {{"sigma_head", c.sigma_head},
        {"sigma_conc", c.sigma_conc},
        {"assimilate_concentration", c.assimilate_concentration},
        {"max_times", c.max_assimilation_times},
        {"r_inflation", c.r_inflation}}},
      {"forward", {{"specific_storage", c.specific_storage}}},
      {"correlation_fields", c.compute_correlation_fields},
      {"jobs", c.jobs}};
}

}  // namespace

void validate_experiment_config(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(c.ensemble_size >= 2, "ensemble_size: must be >= 2");
  require(c.truth.std >= 0 && c.prior.std >= 0, "variogram std: must be >= 0");
  require(c.truth.correlation_length_m > 0 && c.prior.correlation_length_m > 0,
          "correlation_length: must be > 0");
  require(c.filter.damping >= 0, "filter.damping: must be >= 0");
  require(c.filter.localization_length_m > 0, "filter.localization_length: must be > 0");
  require(c.filter.hybrid_alpha >= 0 && c.filter.hybrid_alpha <= 1,
          "filter.hybrid_alpha: must be in [0,1]");
  require(c.filter.hybrid_background_variance >= 0,
          "filter.hybrid_background_variance: must be >= 0");
  require(c.sigma_head > 0, "observation.sigma_head: must be > 0");
  require(c.sigma_conc > 0, "observation.sigma_conc: must be > 0");
  require(c.r_inflation > 0, "observation.r_inflation: must be > 0");
  require(c.max_assimilation_times >= 0, "observation.max_times: must be >= 0");
  require(c.specific_storage > 0, "forward.specific_storage: must be > 0");
  require(c.prp0_source == CovarianceSource::Analytic || c.prp0_fields >= 2,
          "prp0.fields: must be >= 2 for the empirical source");
  require(c.jobs >= 0, "jobs: must be >= 0");
}

void validate_suite_config(const SuiteConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(c.seeds >= 1, "suite.seeds: must be >= 1");
  require(!c.scenarios.empty(), "suite.scenarios: must not be empty");
  require(!c.methods.empty(), "suite.methods: must not be empty");
  require(!c.ensemble_sizes.empty(), "suite.ensemble_sizes: must not be empty");
  for (int n : c.ensemble_sizes) require(n >= 2, "suite.ensemble_sizes: entries must be >= 2");
  require(!c.correlation_length_factors.empty(),
          "suite.correlation_length_factors: must not be empty");
  for (double f : c.correlation_length_factors)
    require(f > 0, "suite.correlation_length_factors: entries must be > 0");
  require(c.reference_size >= 2, "suite.reference_size: must be >= 2");
  require(c.reference_seeds >= 1, "suite.reference_seeds: must be >= 1");
}

ParsedConfig parse_config_text(const std::string& text) {
  json root;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    try {
      root = json::parse(body);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
  } else {
    root = parse_keyvalue_text(body);
  }

  ConfigReader r(root);
  ParsedConfig out;

  const std::string scenario_name = r.get<std::string>("scenario", "tracer");
  ExperimentConfig cfg = default_experiment_config(scenario_from_string(scenario_name));
  read_shared(r, cfg);
  cfg.experiment_index =
      static_cast<std::uint32_t>(r.get<std::int64_t>("experiment_index", cfg.experiment_index));
  cfg.ensemble_size = static_cast<int>(r.get<std::int64_t>("ensemble_size", cfg.ensemble_size));
  cfg.filter.variant =
      filter_variant_from_string(r.get<std::string>("method", to_string(cfg.filter.variant)));
  cfg.fixed_truth = r.get("fixed_truth", cfg.fixed_truth);
  cfg.compute_correlation_fields =
      r.get("correlation_fields", cfg.compute_correlation_fields);
  validate_experiment_config(cfg);
  out.experiment = cfg;

  // Suite section, sharing the experiment-level filter/pilot/prp0 settings.
  SuiteConfig suite;
  suite.master_seed = cfg.master_seed;
  suite.filter = cfg.filter;
  suite.pilot_grid = cfg.pilot_grid;
  suite.prp0_source = cfg.prp0_source;
  suite.prp0_fields = cfg.prp0_fields;
  suite.max_assimilation_times = cfg.max_assimilation_times;
  suite.specific_storage = cfg.specific_storage;
  suite.jobs = cfg.jobs;
  out.has_suite_section = r.has("suite.scenarios") || r.has("suite.methods") ||
                          r.has("suite.seeds") || r.has("suite.ensemble_sizes");
  {
    std::vector<std::string> scenario_names;
    for (auto s : suite.scenarios) scenario_names.push_back(to_string(s));
    scenario_names = r.get("suite.scenarios", scenario_names);
    suite.scenarios.clear();
    for (const auto& name : scenario_names) suite.scenarios.push_back(scenario_from_string(name));

    std::vector<std::string> method_names;
    for (auto m : suite.methods) method_names.push_back(to_string(m));
    method_names = r.get("suite.methods", method_names);
    suite.methods.clear();
    for (const auto& name : method_names)
      suite.methods.push_back(filter_variant_from_string(name));

    suite.ensemble_sizes = r.get("suite.ensemble_sizes", suite.ensemble_sizes);
    suite.correlation_length_factors =
        r.get("suite.correlation_length_factors", suite.correlation_length_factors);
    suite.seeds = static_cast<int>(r.get<std::int64_t>("suite.seeds", suite.seeds));
    suite.std_ranking = r.get("suite.std_ranking", suite.std_ranking);
    suite.reference_size =
        static_cast<int>(r.get<std::int64_t>("suite.reference_size", suite.reference_size));
    suite.reference_seeds =
        static_cast<int>(r.get<std::int64_t>("suite.reference_seeds", suite.reference_seeds));
    suite.record_timings = r.get("suite.record_timings", suite.record_timings);
  }
  validate_suite_config(suite);
  out.suite = suite;

  // Compare section.
  CompareConfig cmp;
  cmp.scenario = scenario_from_string(r.get<std::string>("compare.scenario", "well"));
  {
    std::vector<std::string> method_names{"enkf", "pp_enkf"};
    method_names = r.get("compare.methods", method_names);
    cmp.methods.clear();
    for (const auto& name : method_names) cmp.methods.push_back(filter_variant_from_string(name));
  }
  cmp.ensemble_size =
      static_cast<int>(r.get<std::int64_t>("compare.ensemble_size", cmp.ensemble_size));
  cmp.seeds = static_cast<int>(r.get<std::int64_t>("compare.seeds", cmp.seeds));
  cmp.reference_size =
      static_cast<int>(r.get<std::int64_t>("compare.reference_size", cmp.reference_size));
  cmp.master_seed = cfg.master_seed;
  cmp.filter = cfg.filter;
  cmp.pilot_grid = cfg.pilot_grid;
  cmp.prp0_source = cfg.prp0_source;
  cmp.prp0_fields = cfg.prp0_fields;
  cmp.jobs = cfg.jobs;
  out.compare = cmp;

  // Field generation section.
  out.generate.scenario = cfg.scenario;
  out.generate.master_seed = cfg.master_seed;
  out.generate.variogram = cfg.prior;
  if (r.get<std::string>("generate.variogram", "prior") == "truth")
    out.generate.variogram = cfg.truth;
  out.generate.count = static_cast<int>(r.get<std::int64_t>("generate.count", 1));
  if (out.generate.count < 1)
    throw std::invalid_argument("generate.count: must be >= 1");

  r.finish();

  json echo = experiment_json(cfg);
  {
    json s;
    std::vector<std::string> names;
    for (auto sc : suite.scenarios) names.push_back(to_string(sc));
    s["scenarios"] = names;
    names.clear();
    for (auto m : suite.methods) names.push_back(to_string(m));
    s["methods"] = names;
    s["ensemble_sizes"] = suite.ensemble_sizes;
    s["correlation_length_factors"] = suite.correlation_length_factors;
    s["seeds"] = suite.seeds;
    s["std_ranking"] = suite.std_ranking;
    s["reference_size"] = suite.reference_size;
    s["reference_seeds"] = suite.reference_seeds;
    s["record_timings"] = suite.record_timings;
    echo["suite"] = s;
  }
  out.resolved_json = echo.dump();
  return out;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace ppenkf
