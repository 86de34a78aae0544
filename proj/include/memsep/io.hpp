#pragma once

// Text formats used by the command-line tool: number formatting, the CSV
// schemas and the flat key = value configuration file.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "memsep/errors.hpp"
#include "memsep/geodesic.hpp"
#include "memsep/model.hpp"
#include "memsep/path.hpp"
#include "memsep/simulate.hpp"

namespace memsep {

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Reports use a fixed number of significant figures.
inline std::string format_report(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Parses a whole token as a double; throws ConfigError naming `what`.
inline double parse_number(std::string_view text, const std::string& what) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError(what + ": not a number: '" + std::string(trim(text)) + "'");
  }
  return x;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

// ---------------------------------------------------------------- config

inline constexpr const char* kConfigKeys[] = {"n_total",     "t_bath_k",   "eps_alpha", "tau_alpha_s",
                                              "tau_beta_s",  "tau_h_s",    "k_b"};

inline bool is_config_key(std::string_view key) {
  for (const char* k : kConfigKeys) {
    if (key == k) return true;
  }
  return false;
}

/// Sets one physical key. eps_beta follows from eps_alpha.
inline void apply_config_value(SystemValues& v, std::string_view key, std::string_view value) {
  const std::string k(key);
  const double x = parse_number(value, "config key '" + k + "'");
  if (k == "n_total") v.n_total = x;
  else if (k == "t_bath_k") v.t_bath = x;
  else if (k == "eps_alpha") {
    v.eps_alpha = x;
    v.eps_beta = 1.0 - x;
  } else if (k == "tau_alpha_s") v.tau_alpha = x;
  else if (k == "tau_beta_s") v.tau_beta = x;
  else if (k == "tau_h_s") v.tau_h = x;
  else if (k == "k_b") v.k_b = x;
  else throw ConfigError("unknown config key '" + k + "'");
}

/// key = value lines; '#' starts a comment. Keys are checked against
/// kConfigKeys; `origin` names the source in messages.
inline std::map<std::string, std::string> parse_config_text(std::string_view text,
                                                            const std::string& origin) {
  std::map<std::string, std::string> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!is_config_key(key)) throw ConfigError(where + ": unknown config key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

inline SystemValues load_config(const std::string& path, SystemValues base = {}) {
  for (const auto& [k, v] : parse_config_text(read_text_file(path), path)) {
    apply_config_value(base, k, v);
  }
  return base;
}

// ---------------------------------------------------------------- CSV

inline std::string protocol_csv(const PathSamples& path) {
  std::string out = "s,x_l,x_r\n";
  for (const auto& p : path.samples()) {
    out += format_number(p.s) + ',' + format_number(p.pt.x_l) + ',' + format_number(p.pt.x_r) + '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> f;
  while (true) {
    const auto c = line.find(',');
    f.push_back(trim(line.substr(0, c)));
    if (c == std::string_view::npos) break;
    line = line.substr(c + 1);
  }
  return f;
}

}  // namespace detail

/// Reads the protocol schema written by protocol_csv. `origin` is used in
/// error messages.
inline PathSamples parse_protocol_csv(std::string_view text, const std::string& origin) {
  std::vector<PathSample> pts;
  int line_no = 0;
  bool header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split_commas(line);
    if (!header) {
      if (f.size() != 3 || f[0] != "s" || f[1] != "x_l" || f[2] != "x_r") {
        throw IoError(origin, "expected header 's,x_l,x_r'");
      }
      header = true;
      continue;
    }
    const std::string where = origin + ":" + std::to_string(line_no);
    if (f.size() != 3) throw IoError(origin, "line " + std::to_string(line_no) + ": expected 3 fields");
    try {
      pts.push_back({parse_number(f[0], where), {parse_number(f[1], where), parse_number(f[2], where)}});
    } catch (const ConfigError& e) {
      throw IoError(origin, e.what());
    }
  }
  if (!header) throw IoError(origin, "empty protocol file");
  try {
    return PathSamples(std::move(pts));
  } catch (const DomainError& e) {
    throw IoError(origin, e.what());
  }
}

inline PathSamples read_protocol_csv(const std::string& path) {
  return parse_protocol_csv(read_text_file(path), path);
}

inline std::string geodesic_summary_csv(const std::vector<GeodesicSolution>& sols) {
  std::string out = "index,length_js_sqrt,terminal_gap,theta0_rad\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    out += std::to_string(i) + ',' + format_number(sols[i].length) + ',' +
           format_number(sols[i].terminal_gap) + ',' + format_number(sols[i].theta0) + '\n';
  }
  return out;
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t_s,x_l,x_r,n_alpha_l,n_beta_r,temperature_k,work_j\n";
  for (const auto& p : traj.samples) {
    const auto& s = p.state;
    out += format_number(p.t) + ',' + format_number(s.config.x_l) + ',' +
           format_number(s.config.x_r) + ',' + format_number(s.n_alpha_l) + ',' +
           format_number(s.n_beta_r) + ',' + format_number(s.temperature) + ',' +
           format_number(p.work) + '\n';
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "tau_s,w_ex_j,l2_over_tau_j\n";
  for (const auto& r : rows) {
    out += format_number(r.tau) + ',' + format_number(r.excess_work) + ',' +
           format_number(r.l_squared_over_tau) + '\n';
  }
  return out;
}

}  // namespace memsep
