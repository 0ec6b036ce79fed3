#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hml {

using json = nlohmann::ordered_json;

/// Shortest exact decimal for a double; CSV cells round-trip bit-for-bit.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

struct ReportCell {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> extras;
};

/// Uniform experiment output: a config echo, one (estimate, se, target,
/// pass) row per measured quantity, and free-form metadata. Serializes to
/// JSON and to flat CSV with one row per cell.
struct Report {
  std::string experiment;
  json config = json::object();
  json metadata = json::object();
  std::vector<ReportCell> cells;

  bool all_pass() const {
    for (const ReportCell& c : cells)
      if (!c.pass) return false;
    return true;
  }

  json to_json() const {
    json j = json::object();
    j["experiment"] = experiment;
    j["config"] = config;
    j["all_pass"] = all_pass();
    json rows = json::array();
    for (const ReportCell& c : cells) {
      json r = json::object();
      r["name"] = c.name;
      r["estimate"] = c.estimate;
      r["se"] = c.se;
      r["target"] = c.target;
      r["pass"] = c.pass;
      if (!c.extras.empty()) {
        json e = json::object();
        for (const auto& [k, v] : c.extras) e[k] = v;
        r["extras"] = e;
      }
      rows.push_back(std::move(r));
    }
    j["cells"] = std::move(rows);
    j["metadata"] = metadata;
    return j;
  }

  /// Header then one row per cell. Extra columns are the union of extra
  /// keys in first-appearance order; cells without a key leave the field
  /// empty. Fields containing separators are quoted.
  void write_csv(std::ostream& os) const {
    std::vector<std::string> keys;
    for (const ReportCell& c : cells)
      for (const auto& [k, v] : c.extras) {
        (void)v;
        bool seen = false;
        for (const std::string& s : keys)
          if (s == k) {
            seen = true;
            break;
          }
        if (!seen) keys.push_back(k);
      }
    os << "experiment,cell,estimate,se,target,pass";
    for (const std::string& k : keys) os << ',' << csv_quote(k);
    os << '\n';
    for (const ReportCell& c : cells) {
      os << csv_quote(experiment) << ',' << csv_quote(c.name) << ','
         << fmt_double(c.estimate) << ',' << fmt_double(c.se) << ','
         << fmt_double(c.target) << ',' << (c.pass ? 1 : 0);
      for (const std::string& k : keys) {
        os << ',';
        for (const auto& [ek, ev] : c.extras)
          if (ek == k) {
            os << fmt_double(ev);
            break;
          }
      }
      os << '\n';
    }
  }

private:
  static std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    q += '"';
    return q;
  }
};

}
