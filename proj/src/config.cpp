#include "ratos/config.hpp"

#include <fstream>

#include "ratos/csv.hpp"

namespace ratos {

using nlohmann::json;

Complex parse_complex(const json& value) {
  if (value.is_number()) return Complex(value.get<double>(), 0.0);
  if (value.is_array() && value.size() == 2 && value[0].is_number() &&
      value[1].is_number()) {
    return Complex(value[0].get<double>(), value[1].get<double>());
  }
  if (value.is_object() && value.contains("re")) {
    return Complex(value["re"].get<double>(),
                   value.value("im", 0.0));
  }
  throw std::invalid_argument("expected a number, [re, im] pair or {re, im} object");
}

namespace {

json parse_override_value(const std::string& text) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) return json(text);  // fall back to a string
  return parsed;
}

void apply_override(json& root, const std::string& setting) {
  const auto eq = setting.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override must look like path.to.key=value: " + setting);
  }
  const std::string path = setting.substr(0, eq);
  const json value = parse_override_value(setting.substr(eq + 1));

  json* node = &root;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw std::invalid_argument("empty key in override path: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace

ScenarioConfig ScenarioConfig::load(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json parsed = json::parse(in, nullptr, false);
  if (parsed.is_discarded()) {
    throw std::invalid_argument("config file is not valid JSON: " + path);
  }
  return from_json(std::move(parsed), overrides);
}

ScenarioConfig ScenarioConfig::from_json(json parsed,
                                         const std::vector<std::string>& overrides) {
  ScenarioConfig config;
  config.raw = std::move(parsed);
  for (const std::string& setting : overrides) {
    apply_override(config.raw, setting);
  }
  if (!config.raw.contains("seed") || !config.raw["seed"].is_number()) {
    throw std::invalid_argument("config requires a numeric 'seed' field");
  }
  config.seed = config.raw["seed"].get<std::uint64_t>();
  return config;
}

ModelParams ScenarioConfig::params() const {
  if (!raw.contains("params")) {
    throw std::invalid_argument("config requires a 'params' block");
  }
  const json& block = raw["params"];
  ModelParams params;
  params.num_modes = block.value("Q", 1);
  params.num_atoms = block.value("N", 1);
  params.delta = block.value("delta", 0.0);
  params.Delta = block.value("Delta", 0.0);
  if (block.contains("g")) {
    for (const json& value : block["g"]) params.g.push_back(parse_complex(value));
  }
  if (block.contains("gamma")) {
    for (const json& value : block["gamma"]) {
      params.gamma.push_back(value.get<double>());
    }
  }
  if (params.g.empty()) {
    params.g.assign(static_cast<size_t>(params.num_modes), Complex(1.0, 0.0));
  }
  if (params.gamma.empty()) {
    params.gamma.assign(static_cast<size_t>(params.num_modes), 0.0);
  }
  params.validate();
  return params;
}

SectorSpec ScenarioConfig::sector(int default_excitation) const {
  const ModelParams model = params();
  SectorSpec spec;
  spec.num_atoms = model.num_atoms;
  spec.num_modes = model.num_modes;
  spec.excitation = default_excitation;
  if (raw.contains("sector")) {
    const json& block = raw["sector"];
    spec.excitation = block.value("n", default_excitation);
    if (block.contains("fock_cutoff") && !block["fock_cutoff"].is_null()) {
      for (const json& value : block["fock_cutoff"]) {
        spec.fock_cutoff.push_back(value.get<int>());
      }
    }
  }
  spec.validate();
  return spec;
}

std::vector<Complex> ScenarioConfig::static_controls() const {
  const ModelParams model = params();
  std::vector<Complex> controls(static_cast<size_t>(model.num_modes),
                                Complex(0.0, 0.0));
  if (raw.contains("controls")) {
    const json& block = raw["controls"];
    if (static_cast<int>(block.size()) != model.num_modes) {
      throw std::invalid_argument("'controls' must list Q amplitudes");
    }
    for (int q = 0; q < model.num_modes; ++q) {
      controls[static_cast<size_t>(q)] = parse_complex(block[static_cast<size_t>(q)]);
    }
  }
  return controls;
}

ControlSchedule ScenarioConfig::schedule() const {
  const ModelParams model = params();
  if (!raw.contains("schedule")) {
    return ControlSchedule::constant(static_controls());
  }
  const json& block = raw["schedule"];
  ControlSchedule schedule(model.num_modes);
  if (!block.contains("modes") ||
      static_cast<int>(block["modes"].size()) != model.num_modes) {
    throw std::invalid_argument("'schedule.modes' must list Q segment arrays");
  }
  for (int q = 1; q <= model.num_modes; ++q) {
    for (const json& seg : block["modes"][static_cast<size_t>(q - 1)]) {
      const std::string kind = seg.value("type", "constant");
      const double t0 = seg.value("t0", 0.0);
      const double t1 = seg.value("t1", t0);
      const Complex amp = seg.contains("amp") ? parse_complex(seg["amp"])
                                              : Complex(0.0, 0.0);
      if (kind == "constant") {
        schedule.add_constant(q, t0, t1, amp);
      } else if (kind == "ramp_on") {
        schedule.add_ramp_on(q, t0, t1, amp);
      } else if (kind == "ramp_off") {
        schedule.add_ramp_off(q, t0, t1, amp);
      } else {
        throw std::invalid_argument("unknown schedule segment type: " + kind);
      }
    }
  }
  schedule.validate();
  return schedule;
}

double ScenarioConfig::number(const std::string& key) const {
  if (!raw.contains(key) || !raw[key].is_number()) {
    throw std::invalid_argument("config requires numeric field '" + key + "'");
  }
  return raw[key].get<double>();
}

double ScenarioConfig::number_or(const std::string& key, double fallback) const {
  return raw.contains(key) && raw[key].is_number() ? raw[key].get<double>()
                                                   : fallback;
}

int ScenarioConfig::integer_or(const std::string& key, int fallback) const {
  return raw.contains(key) && raw[key].is_number() ? raw[key].get<int>() : fallback;
}

std::string ScenarioConfig::text_or(const std::string& key,
                                    const std::string& fallback) const {
  return raw.contains(key) && raw[key].is_string()
             ? raw[key].get<std::string>()
             : fallback;
}

std::string ScenarioConfig::hash() const { return stable_hash_hex(resolved_dump()); }

}  // namespace ratos
