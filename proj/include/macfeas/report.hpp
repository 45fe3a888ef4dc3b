#pragma once

// Command results. The JSON form and the text form are rendered from the
// same document, so every number prints with the same digits in both.
// Wall-clock figures go under "metadata"; everything under "result" is a
// function of the inputs alone.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace macfeas {

using Json = nlohmann::ordered_json;

enum ExitStatus : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitNegative = 2,  // infeasible, or budget below the threshold
};

struct Report {
  std::string command;
  Json result = Json::object();
  Json metadata = Json::object();
  int exit_code = kExitSuccess;

  Json document() const {
    return Json{{"command", command}, {"result", result}, {"metadata", metadata}};
  }

  std::string json(int indent = 2) const { return document().dump(indent) + "\n"; }
  std::string text() const;
};

namespace detail {

inline std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

inline bool is_scalar_array(const Json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
}

// Array of objects sharing the first element's keys, with scalar values.
inline bool is_table(const Json& v) {
  if (!v.is_array() || v.empty() || !v.front().is_object()) return false;
  const auto& first = v.front();
  for (const auto& row : v) {
    if (!row.is_object() || row.size() != first.size()) return false;
    for (const auto& [k, cell] : row.items()) {
      if (!first.contains(k)) return false;
      if (!cell.is_primitive() && !is_scalar_array(cell)) return false;
    }
  }
  return true;
}

inline std::string cell_text(const Json& v) {
  if (!v.is_array()) return scalar_text(v);
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
  return s + "]";
}

inline void render(std::ostringstream& out, const Json& v, int depth);

inline void render_table(std::ostringstream& out, const Json& rows, int depth) {
  std::vector<std::string> keys;
  for (const auto& [k, _] : rows.front().items()) keys.push_back(k);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(keys.size());
  for (std::size_t c = 0; c < keys.size(); ++c) width[c] = keys[c].size();
  for (const auto& row : rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < keys.size(); ++c) {
      line.push_back(cell_text(row.at(keys[c])));
      width[c] = std::max(width[c], line.back().size());
    }
  }
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  auto emit = [&](const std::vector<std::string>& line) {
    out << pad;
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(keys);
  for (const auto& line : cells) emit(line);
}

inline void render(std::ostringstream& out, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  for (const auto& [key, value] : v.items()) {
    if (value.is_object()) {
      out << pad << key << ":\n";
      render(out, value, depth + 1);
    } else if (is_table(value)) {
      out << pad << key << ":\n";
      render_table(out, value, depth + 1);
    } else if (value.is_array() && !is_scalar_array(value)) {
      out << pad << key << ":\n";
      for (const auto& e : value) {
        if (e.is_object()) {
          out << pad << "  -\n";
          render(out, e, depth + 2);
        } else {
          out << pad << "  - " << cell_text(e) << '\n';
        }
      }
    } else {
      out << pad << key << ": " << cell_text(value) << '\n';
    }
  }
}

}  // namespace detail

inline std::string Report::text() const {
  std::ostringstream out;
  out << command << '\n';
  detail::render(out, result, 1);
  if (!metadata.empty()) {
    out << "metadata\n";
    detail::render(out, metadata, 1);
  }
  return out.str();
}

}  // namespace macfeas
