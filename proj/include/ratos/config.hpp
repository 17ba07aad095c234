#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratos/hilbert.hpp"
#include "ratos/model.hpp"

namespace ratos {

/// Parsed scenario file plus the `--set path.to.key=value` overrides already
/// applied. Every scenario must carry a `seed` so any randomness in a run is
/// reproducible.
struct ScenarioConfig {
  nlohmann::json raw;
  std::uint64_t seed = 0;

  static ScenarioConfig load(const std::string& path,
                             const std::vector<std::string>& overrides);
  static ScenarioConfig from_json(nlohmann::json json,
                                  const std::vector<std::string>& overrides);

  ModelParams params() const;
  SectorSpec sector(int default_excitation = 1) const;
  /// Builds a schedule from the optional "schedule" block; without one,
  /// controls are constant at params-block "controls".
  ControlSchedule schedule() const;
  std::vector<Complex> static_controls() const;

  bool has(const std::string& key) const { return raw.contains(key); }
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer_or(const std::string& key, int fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;

  std::string resolved_dump() const { return raw.dump(); }
  std::string hash() const;
};

/// Parses "[re, im]", plain numbers, or {"re":..,"im":..} as a complex value.
Complex parse_complex(const nlohmann::json& value);

}  // namespace ratos
