#pragma once

// Scenario files: one JSON document in SI units.
//
//   {
//     "channel": {"bandwidth_hz": 2e5, "noise_density_w_per_hz": 3e-7},
//     "users": [{"arrival_rate": 800, "delay_bound_s": 8e-6, "power_w": 0.02}, ...]
//   }

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "macfeas/capacity.hpp"
#include "macfeas/error.hpp"
#include "macfeas/queueing.hpp"

namespace macfeas {

/// Malformed scenario. `where()` is a field path such as "users[1].power_w"
/// or "line 4, column 12" for syntax errors.
class ScenarioError : public Error {
 public:
  ScenarioError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct Scenario {
  ChannelConfig channel;
  std::vector<UserDemand> demands;

  std::size_t user_count() const { return demands.size(); }
};

namespace detail {

inline double scenario_number(const nlohmann::json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(path, std::string("missing field \"") + key + "\"");
  if (!it->is_number()) throw ScenarioError(path + "." + key, "expected a number");
  return it->get<double>();
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> known,
                           const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ScenarioError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Builds a scenario from a parsed document and checks every module-level
/// invariant, naming the offending field.
inline Scenario scenario_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ScenarioError("document", "expected an object");
  detail::reject_unknown(doc, {"channel", "users", "name", "description"}, "");
  const auto ch = doc.find("channel");
  if (ch == doc.end()) throw ScenarioError("document", "missing field \"channel\"");
  if (!ch->is_object()) throw ScenarioError("channel", "expected an object");
  detail::reject_unknown(*ch, {"bandwidth_hz", "noise_density_w_per_hz"}, "channel");

  Scenario s;
  s.channel.bandwidth = detail::scenario_number(*ch, "bandwidth_hz", "channel");
  s.channel.noise_density = detail::scenario_number(*ch, "noise_density_w_per_hz", "channel");
  if (!(s.channel.bandwidth > 0.0) || !std::isfinite(s.channel.bandwidth)) {
    throw ScenarioError("channel.bandwidth_hz", "must be positive");
  }
  if (!(s.channel.noise_density > 0.0) || !std::isfinite(s.channel.noise_density)) {
    throw ScenarioError("channel.noise_density_w_per_hz", "must be positive");
  }

  const auto users = doc.find("users");
  if (users == doc.end()) throw ScenarioError("document", "missing field \"users\"");
  if (!users->is_array()) throw ScenarioError("users", "expected an array");
  if (users->empty()) throw ScenarioError("users", "at least one user is required");
  if (users->size() > kMaxUsers) {
    throw ScenarioError("users", "at most " + std::to_string(kMaxUsers) + " users are supported");
  }
  for (std::size_t i = 0; i < users->size(); ++i) {
    const auto& u = (*users)[i];
    const std::string path = "users[" + std::to_string(i) + "]";
    if (!u.is_object()) throw ScenarioError(path, "expected an object");
    detail::reject_unknown(u, {"arrival_rate", "delay_bound_s", "power_w"}, path);
    UserDemand d{detail::scenario_number(u, "arrival_rate", path),
                 detail::scenario_number(u, "delay_bound_s", path)};
    const double p = detail::scenario_number(u, "power_w", path);
    if (!(d.arrival_rate > 0.0) || !std::isfinite(d.arrival_rate)) {
      throw ScenarioError(path + ".arrival_rate", "must be positive");
    }
    if (!(d.delay_bound > 0.0) || !std::isfinite(d.delay_bound)) {
      throw ScenarioError(path + ".delay_bound_s", "must be positive");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) throw ScenarioError(path + ".power_w", "must be non-negative");
    s.demands.push_back(d);
    s.channel.powers.push_back(p);
  }
  return s;
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1),
                        "syntax error");
  }
  return scenario_from_json(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json users = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.user_count(); ++i) {
    users.push_back({{"arrival_rate", s.demands[i].arrival_rate},
                     {"delay_bound_s", s.demands[i].delay_bound},
                     {"power_w", s.channel.powers[i]}});
  }
  return {{"channel",
           {{"bandwidth_hz", s.channel.bandwidth},
            {"noise_density_w_per_hz", s.channel.noise_density}}},
          {"users", users}};
}

}  // namespace macfeas
