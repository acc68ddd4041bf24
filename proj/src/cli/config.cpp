#include "dcl/cli/config.hpp"

#include "dcl/error.hpp"

#include <charconv>
#include <limits>
#include <sstream>

namespace dcl::cli {

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = {
      {"j", KeyType::Int, "dispersion order j (P(k) = (-1)^{j+1} k^{2j+1})"},
      {"lambda", KeyType::Real, "period scale, domain [0, 2 pi lambda)"},
      {"s", KeyType::Real, "regularity index"},
      {"b", KeyType::Real, "time regularity index of X_{s,b}"},
      {"epsilon", KeyType::Real, "small parameter, 0 < epsilon < 1/(100 j^5); 0 = default"},
      {"kmax", KeyType::Real, "frequency truncation K (resonance: box bound Kmax)"},
      {"dt", KeyType::Real, "time step"},
      {"T", KeyType::Real, "final time"},
      {"dealias", KeyType::Bool, "2/3-rule padding for products"},
      {"tau_step", KeyType::Real, "tau cell width"},
      {"N_list", KeyType::IntList, "counterexample frequencies, comma separated"},
      {"seed", KeyType::Seed, "random seed (required by probe)"},
      {"output_dir", KeyType::String, "directory for output files"},
      {"kdv", KeyType::Bool, "drop the nonlocal term (higher-order KdV)"},
      {"stride", KeyType::Int, "record every n-th step"},
      {"amplitude", KeyType::Real, "initial data amplitude A in A cos(mode x / lambda)"},
      {"mode", KeyType::Int, "lattice index of the initial cosine"},
      {"initial_spectrum", KeyType::String, "lattice JSON file with initial data"},
      {"target", KeyType::String, "verify target: resonance, embeddings or regions"},
      {"form", KeyType::String, "probe form: dxdx_smoothed, product_dx, product_smoothed or all"},
      {"pairs", KeyType::Int, "number of random probe pairs"},
      {"probe_modes", KeyType::Int, "random probe data on 0 < |k| <= probe_modes"},
      {"mu", KeyType::Real, "scaling parameter mu >= 1"},
      {"iterations", KeyType::Int, "Picard iterations"},
      {"time_step", KeyType::Real, "Picard time grid step (must divide 2)"},
      {"scan_bound", KeyType::Real, "largest embedding scan box |k| <= bound"},
      {"sigma_bound", KeyType::Real, "region scan |sigma| <= bound"},
      {"force_window", KeyType::Bool, "run embedding scans outside the admissible s-window"},
      {"tolerance", KeyType::Real, "assertion tolerance of rescale-check"},
  };
  return keys;
}

namespace {

const KeyInfo& key_info(const std::string& key) {
  for (const auto& k : config_keys())
    if (key == k.name) return k;
  throw ValidationError("unknown configuration key '" + key + "'");
}

long long parse_int(const std::string& key, const std::string& t) {
  long long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw ValidationError("'" + key + "' expects an integer, got '" + t + "'");
  return v;
}

double parse_real(const std::string& key, const std::string& t) {
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + key + "' expects a number, got '" + t + "'");
  }
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ValidationError("'" + key + "' must be an integer");
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ValidationError("'" + key + "' out of range");
  return static_cast<int>(x);
}

double get_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError("'" + key + "' must be finite");
  return x;
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ValidationError("'" + key + "' must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ValidationError("'" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

json parse_flag_value(const std::string& key, const std::string& text) {
  switch (key_info(key).type) {
    case KeyType::Int: return parse_int(key, text);
    case KeyType::Real: return parse_real(key, text);
    case KeyType::Bool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw ValidationError("'" + key + "' expects true or false, got '" + text + "'");
    case KeyType::String: return text;
    case KeyType::Seed: {
      const long long v = parse_int(key, text);
      if (v < 0) throw ValidationError("'seed' must be non-negative");
      return static_cast<std::uint64_t>(v);
    }
    case KeyType::IntList: {
      json arr = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) arr.push_back(parse_int(key, item));
      return arr;
    }
  }
  throw ValidationError("unhandled key type");
}

RunConfig from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("configuration must be a JSON object");
  RunConfig c;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    key_info(k);  // rejects unknown keys
    if (v.is_null()) continue;
    if (k == "j") c.j = get_int(v, k);
    else if (k == "lambda") c.lambda = get_real(v, k);
    else if (k == "s") c.s = get_real(v, k);
    else if (k == "b") c.b = get_real(v, k);
    else if (k == "epsilon") c.epsilon = get_real(v, k);
    else if (k == "kmax") c.kmax = get_real(v, k);
    else if (k == "dt") c.dt = get_real(v, k);
    else if (k == "T") c.T = get_real(v, k);
    else if (k == "dealias") c.dealias = get_bool(v, k);
    else if (k == "tau_step") c.tau_step = get_real(v, k);
    else if (k == "N_list") {
      if (!v.is_array()) throw ValidationError("'N_list' must be an array of integers");
      c.N_list.clear();
      for (const auto& x : v) c.N_list.push_back(get_int(x, k));
    } else if (k == "seed") {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ValidationError("'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "output_dir") c.output_dir = get_string(v, k);
    else if (k == "kdv") c.kdv = get_bool(v, k);
    else if (k == "stride") c.stride = get_int(v, k);
    else if (k == "amplitude") c.amplitude = get_real(v, k);
    else if (k == "mode") c.mode = get_int(v, k);
    else if (k == "initial_spectrum") c.initial_spectrum = get_string(v, k);
    else if (k == "target") c.target = get_string(v, k);
    else if (k == "form") c.form = get_string(v, k);
    else if (k == "pairs") c.pairs = get_int(v, k);
    else if (k == "probe_modes") c.probe_modes = get_int(v, k);
    else if (k == "mu") c.mu = get_real(v, k);
    else if (k == "iterations") c.iterations = get_int(v, k);
    else if (k == "time_step") c.time_step = get_real(v, k);
    else if (k == "scan_bound") c.scan_bound = get_real(v, k);
    else if (k == "sigma_bound") c.sigma_bound = get_real(v, k);
    else if (k == "force_window") c.force_window = get_bool(v, k);
    else if (k == "tolerance") c.tolerance = get_real(v, k);
  }
  require(c.j >= 1, "j must be >= 1");
  require(c.lambda >= 1.0, "lambda must be >= 1");
  require(!c.tau_step || *c.tau_step > 0.0, "tau_step must be positive");
  require(c.stride >= 1, "stride must be >= 1");
  return c;
}

double RunConfig::resolved_epsilon() const { return epsilon > 0.0 ? epsilon : 0.5 * epsilon_limit(j); }

ModelParams RunConfig::params() const {
  const double K = kmax.value_or(256.0 / lambda);
  ModelParams p = ModelParams::with_kmax(j, lambda, K, resolved_epsilon(), dealias);
  return p;
}

json to_json(const RunConfig& c) {
  json o;
  o["j"] = c.j;
  o["lambda"] = c.lambda;
  o["s"] = c.s;
  o["b"] = c.b;
  o["epsilon"] = c.resolved_epsilon();
  o["kmax"] = c.kmax ? json(*c.kmax) : json(nullptr);
  o["dt"] = c.dt;
  o["T"] = c.T;
  o["dealias"] = c.dealias;
  o["tau_step"] = c.tau_step ? json(*c.tau_step) : json(nullptr);
  o["N_list"] = c.N_list;
  o["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  o["output_dir"] = c.output_dir;
  o["kdv"] = c.kdv;
  o["stride"] = c.stride;
  o["amplitude"] = c.amplitude;
  o["mode"] = c.mode;
  o["initial_spectrum"] = c.initial_spectrum;
  o["target"] = c.target;
  o["form"] = c.form;
  o["pairs"] = c.pairs;
  o["probe_modes"] = c.probe_modes;
  o["mu"] = c.mu;
  o["iterations"] = c.iterations;
  o["time_step"] = c.time_step;
  o["scan_bound"] = c.scan_bound;
  o["sigma_bound"] = c.sigma_bound;
  o["force_window"] = c.force_window;
  o["tolerance"] = c.tolerance;
  return o;
}

}  // namespace dcl::cli
