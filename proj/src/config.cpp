#include "dcg/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace dcg {

namespace {

using json = nlohmann::ordered_json;

// Strict object walker: every key must be consumed by one of the setters.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  ~ObjectReader() = default;

  template <typename T>
  void get(const char* key, T& out) {
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    seen_.insert(key);
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  const json* child(const char* key) {
    const auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(path_ + ": unknown key \"" + key + "\"");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_sweep(const json& j, const std::string& path, SweepSpec& s) {
  ObjectReader r(j, path);
  r.get("min1", s.b1_min);
  r.get("max1", s.b1_max);
  r.get("n1", s.n1);
  r.get("min2", s.b2_min);
  r.get("max2", s.b2_max);
  r.get("n2", s.n2);
  r.finish();
  if (s.n1 < 1 || s.n2 < 1) throw ConfigError(path + ": grid sizes must be positive");
}

void merge(RunConfig& cfg, const json& j, const std::string& origin) {
  ObjectReader root(j, origin);
  if (j.contains("seed")) cfg.seed_set = true;
  root.get("seed", cfg.seed);
  root.get("workers", cfg.workers);
  root.get("out_dir", cfg.out_dir);
  root.get("dt_ns", cfg.dt_ns);
  root.get("scatter_repeats", cfg.scatter_repeats);

  if (const json* g = root.child("identity")) {
    ObjectReader r(*g, origin + ".identity");
    r.get("dez_mhz", cfg.identity.dez_mhz);
    r.get("n_realizations", cfg.identity.n_realizations);
    r.finish();
  }
  if (const json* g = root.child("hadamard")) {
    ObjectReader r(*g, origin + ".hadamard");
    r.get("dez_mhz", cfg.hadamard.dez_mhz);
    r.get("n_realizations", cfg.hadamard.n_realizations);
    r.finish();
  }
  if (const json* g = root.child("noise")) {
    ObjectReader r(*g, origin + ".noise");
    r.get("sigma_dez_mhz", cfg.noise.sigma_dez_mhz);
    r.get("sigma_j_rel", cfg.noise.sigma_j_rel);
    r.finish();
  }
  if (const json* g = root.child("exchange_model")) {
    ObjectReader r(*g, origin + ".exchange_model");
    r.get("j0_mhz", cfg.model.j0_mhz);
    r.get("v0_mv", cfg.model.v0_mv);
    r.finish();
  }
  if (const json* g = root.child("filter")) {
    ObjectReader r(*g, origin + ".filter");
    r.get("enabled", cfg.filter_enabled);
    r.get("tau_lp_ns", cfg.filter.tau_lp_ns);
    r.get("a_hp", cfg.filter.a_hp);
    r.get("tau_hp_ns", cfg.filter.tau_hp_ns);
    r.get("highpass", cfg.filter.highpass_enabled);
    r.get("j_floor_mhz", cfg.filter.j_floor_mhz);
    std::string domain;
    r.get("domain", domain);
    if (!domain.empty()) {
      if (domain == "voltage")
        cfg.filter.domain = FilterSpec::Domain::voltage;
      else if (domain == "exchange")
        cfg.filter.domain = FilterSpec::Domain::exchange;
      else
        throw ConfigError(origin + ".filter.domain: expected \"voltage\" or \"exchange\"");
    }
    r.finish();
  }
  if (const json* g = root.child("circuit")) {
    ObjectReader r(*g, origin + ".circuit");
    r.get("r_gohm", cfg.circuit.r_gohm);
    r.get("c1_af", cfg.circuit.c1_af);
    r.get("c2_af", cfg.circuit.c2_af);
    r.get("c3_af", cfg.circuit.c3_af);
    r.finish();
  }
  if (const json* g = root.child("sweep_beta"))
    read_sweep(*g, origin + ".sweep_beta", cfg.sweep_beta);
  if (const json* g = root.child("sweep_xi"))
    read_sweep(*g, origin + ".sweep_xi", cfg.sweep_xi);
  if (const json* g = root.child("design")) {
    ObjectReader r(*g, origin + ".design");
    r.get("identity_j1_over_dez", cfg.design.identity_j1_over_dez);
    r.get("identity_j2_over_dez", cfg.design.identity_j2_over_dez);
    r.get("hadamard_jmax_over_dez", cfg.design.hadamard_jmax_over_dez);
    r.get("hadamard_j2_over_dez", cfg.design.hadamard_j2_over_dez);
    r.finish();
  }
  if (const json* g = root.child("table")) {
    ObjectReader r(*g, origin + ".table");
    std::string mode;
    r.get("uncorrected_eval", mode);
    if (!mode.empty()) {
      if (mode == "design-point")
        cfg.uncorrected_eval = UncorrectedEval::design_point;
      else if (mode == "sweep-optimum")
        cfg.uncorrected_eval = UncorrectedEval::sweep_optimum;
      else
        throw ConfigError(origin +
                          ".table.uncorrected_eval: expected \"design-point\" or "
                          "\"sweep-optimum\"");
    }
    r.finish();
  }
  root.finish();

  if (cfg.workers < 1) throw ConfigError(origin + ": workers must be >= 1");
  if (cfg.dt_ns <= 0) throw ConfigError(origin + ": dt_ns must be positive");
  if (cfg.identity.dez_mhz <= 0 || cfg.hadamard.dez_mhz <= 0)
    throw ConfigError(origin + ": dez_mhz must be positive");
  if (cfg.identity.n_realizations < 1 || cfg.hadamard.n_realizations < 1)
    throw ConfigError(origin + ": n_realizations must be >= 1");
}

}  // namespace

void merge_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  merge(cfg, j, origin);
}

void merge_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  merge_config_text(cfg, text, path);
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["out_dir"] = cfg.out_dir;
  j["dt_ns"] = cfg.dt_ns;
  j["scatter_repeats"] = cfg.scatter_repeats;
  j["identity"] = {{"dez_mhz", cfg.identity.dez_mhz},
                   {"n_realizations", cfg.identity.n_realizations}};
  j["hadamard"] = {{"dez_mhz", cfg.hadamard.dez_mhz},
                   {"n_realizations", cfg.hadamard.n_realizations}};
  j["noise"] = {{"sigma_dez_mhz", cfg.noise.sigma_dez_mhz},
                {"sigma_j_rel", cfg.noise.sigma_j_rel}};
  j["exchange_model"] = {{"j0_mhz", cfg.model.j0_mhz}, {"v0_mv", cfg.model.v0_mv}};
  j["filter"] = {
      {"enabled", cfg.filter_enabled},
      {"tau_lp_ns", cfg.filter.tau_lp_ns},
      {"a_hp", cfg.filter.a_hp},
      {"tau_hp_ns", cfg.filter.tau_hp_ns},
      {"domain", cfg.filter.domain == FilterSpec::Domain::voltage ? "voltage" : "exchange"},
      {"highpass", cfg.filter.highpass_enabled},
      {"j_floor_mhz", cfg.filter.j_floor_mhz}};
  j["circuit"] = {{"r_gohm", cfg.circuit.r_gohm},
                  {"c1_af", cfg.circuit.c1_af},
                  {"c2_af", cfg.circuit.c2_af},
                  {"c3_af", cfg.circuit.c3_af}};
  auto sweep = [](const SweepSpec& s) {
    return json{{"min1", s.b1_min}, {"max1", s.b1_max}, {"n1", s.n1},
                {"min2", s.b2_min}, {"max2", s.b2_max}, {"n2", s.n2}};
  };
  j["sweep_beta"] = sweep(cfg.sweep_beta);
  j["sweep_xi"] = sweep(cfg.sweep_xi);
  j["design"] = {{"identity_j1_over_dez", cfg.design.identity_j1_over_dez},
                 {"identity_j2_over_dez", cfg.design.identity_j2_over_dez},
                 {"hadamard_jmax_over_dez", cfg.design.hadamard_jmax_over_dez},
                 {"hadamard_j2_over_dez", cfg.design.hadamard_j2_over_dez}};
  j["table"] = {{"uncorrected_eval",
                 cfg.uncorrected_eval == UncorrectedEval::design_point ? "design-point"
                                                                       : "sweep-optimum"}};
  return j.dump(2) + "\n";
}

TableSpec table_spec(const RunConfig& cfg) {
  TableSpec ts;
  ts.dez_h_mhz = cfg.hadamard.dez_mhz;
  ts.dez_i_mhz = cfg.identity.dez_mhz;
  ts.n_h = cfg.hadamard.n_realizations;
  ts.n_i = cfg.identity.n_realizations;
  ts.seed = cfg.seed;
  ts.dt_ns = cfg.dt_ns;
  ts.workers = cfg.workers;
  ts.noise = cfg.noise;
  ts.model = cfg.model;
  ts.filter = cfg.filter;
  ts.sweep = cfg.sweep_beta;
  ts.sweep_xi = cfg.sweep_xi;
  ts.uncorrected_eval = cfg.uncorrected_eval;
  ts.identity_j1_over_dez = cfg.design.identity_j1_over_dez;
  ts.identity_j2_over_dez = cfg.design.identity_j2_over_dez;
  ts.hadamard_jmax_over_dez = cfg.design.hadamard_jmax_over_dez;
  ts.hadamard_j2_over_dez = cfg.design.hadamard_j2_over_dez;
  return ts;
}

IdentityDesign run_design_identity(const RunConfig& cfg) {
  return design_identity(cfg.identity.dez_mhz,
                         cfg.design.identity_j1_over_dez * cfg.identity.dez_mhz,
                         cfg.design.identity_j2_over_dez * cfg.identity.dez_mhz);
}

HadamardDesign run_design_hadamard(const RunConfig& cfg) {
  return design_hadamard(cfg.hadamard.dez_mhz,
                         cfg.design.hadamard_jmax_over_dez * cfg.hadamard.dez_mhz,
                         cfg.design.hadamard_j2_over_dez * cfg.hadamard.dez_mhz);
}

}  // namespace dcg
