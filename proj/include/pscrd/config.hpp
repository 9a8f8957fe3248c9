#pragma once

// Scenario config files.
//
// The format is the TOML subset below; anything else is a ParseError.
//
//   # comment
//   key = 1 | -2.5e-3 | "text" | true | [1, 2, 3]
//   [table]
//   [[array_of_tables]]
//
// Schema (defaults in parentheses reproduce the 50-bridge baseline):
//
//   seed                 u64      (0)
//   duration_hours       int      (150)
//   rounds_per_hour      int      (1)
//   lambda               real     (0.05)   open interval (0,1)
//   time_window_hours    real     (5)
//   fee                  real     (1.0)
//   initial_points_mean  real     (5.0)
//   age_init_mode        string   ("from_join_time" | "uniform_random")
//   retention_hours      real     (8760)
//   [quorum]    total_reward (20.0), min_reward (1.0)
//   [[groups]]  size, join_hour   ((20,0), (20,40), (10,60) when absent)
//   [adversary] count, strategy ("colluding_equivocation"),
//               placement ("random" | "earliest" | "latest")
//   [[churn]]   bridge, offline_hour, rejoin_hour (optional)
//
// Unknown keys and tables are rejected.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pscrd/errors.hpp"
#include "pscrd/scenario.hpp"

namespace pscrd::config {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::int64_t, double, bool, std::string, Array> data;
  int line = 0;
};

struct Table {
  std::map<std::string, Value> entries;
  int line = 0;
};

struct Document {
  Table root;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;
};

namespace detail {

class Parser {
public:
  explicit Parser(std::string text) : text_(std::move(text)) {}

  Document parse() {
    Document doc;
    Table* current = &doc.root;
    std::set<std::string> seen_tables;
    std::istringstream in(text_);
    std::string raw;
    bool any = false;
    while (std::getline(in, raw)) {
      ++line_;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::string_view s = strip(strip_comment(raw));
      if (s.empty()) continue;
      any = true;
      if (s.starts_with("[[")) {
        if (!s.ends_with("]]")) fail("unterminated [[table]] header");
        auto name = std::string(strip(s.substr(2, s.size() - 4)));
        check_name(name);
        auto& arr = doc.table_arrays[name];
        arr.push_back(Table{{}, line_});
        current = &arr.back();
      } else if (s.starts_with("[")) {
        if (!s.ends_with("]")) fail("unterminated [table] header");
        auto name = std::string(strip(s.substr(1, s.size() - 2)));
        check_name(name);
        if (!seen_tables.insert(name).second) fail("table [" + name + "] defined twice");
        doc.tables[name].line = line_;
        current = &doc.tables[name];
      } else {
        auto eq = s.find('=');
        if (eq == std::string_view::npos) fail("expected key = value");
        auto key = std::string(strip(s.substr(0, eq)));
        check_name(key);
        std::string_view rest = strip(s.substr(eq + 1));
        if (rest.empty()) fail("missing value for '" + key + "'");
        std::size_t pos = 0;
        Value v = parse_value(rest, pos);
        if (!strip(rest.substr(pos)).empty()) fail("trailing characters after value of '" + key + "'");
        if (!current->entries.emplace(key, std::move(v)).second) fail("duplicate key '" + key + "'");
      }
    }
    if (!any) throw ParseError("config file is empty");
    return doc;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_) + ": " + msg);
  }

  static std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  }

  static std::string_view strip_comment(std::string_view s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
      if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
  }

  void check_name(const std::string& name) const {
    if (name.empty()) fail("empty key or table name");
    for (char c : name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
        fail("invalid character in name '" + name + "'");
  }

  Value parse_value(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos >= s.size()) fail("missing value");
    Value v;
    v.line = line_;
    const char c = s[pos];
    if (c == '"') {
      std::string out;
      ++pos;
      while (pos < s.size() && s[pos] != '"') {
        if (s[pos] == '\\') {
          if (++pos >= s.size()) break;
          switch (s[pos]) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            default: fail("unsupported escape sequence");
          }
        } else {
          out += s[pos];
        }
        ++pos;
      }
      if (pos >= s.size()) fail("unterminated string");
      ++pos;
      v.data = std::move(out);
      return v;
    }
    if (c == '[') {
      Array arr;
      ++pos;
      for (;;) {
        while (pos < s.size() && s[pos] == ' ') ++pos;
        if (pos < s.size() && s[pos] == ']') {
          ++pos;
          break;
        }
        arr.push_back(parse_value(s, pos));
        while (pos < s.size() && s[pos] == ' ') ++pos;
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < s.size() && s[pos] == ']') {
          ++pos;
          break;
        }
        fail("malformed array");
      }
      v.data = std::move(arr);
      return v;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != ',' && s[end] != ']' && s[end] != ' ') ++end;
    std::string token(s.substr(pos, end - pos));
    pos = end;
    if (token == "true" || token == "false") {
      v.data = token == "true";
      return v;
    }
    std::string digits;
    for (char ch : token)
      if (ch != '_') digits += ch;
    const bool looks_real = digits.find_first_of(".eE") != std::string::npos ||
                            digits == "inf" || digits == "nan";
    if (!looks_real) {
      std::int64_t i = 0;
      const char* first = digits.data() + (digits.starts_with('+') ? 1 : 0);
      auto [p, ec] = std::from_chars(first, digits.data() + digits.size(), i);
      if (ec == std::errc() && p == digits.data() + digits.size()) {
        v.data = i;
        return v;
      }
    } else {
      double d = 0;
      const char* first = digits.data() + (digits.starts_with('+') ? 1 : 0);
      auto [p, ec] = std::from_chars(first, digits.data() + digits.size(), d);
      if (ec == std::errc() && p == digits.data() + digits.size()) {
        v.data = d;
        return v;
      }
    }
    fail("cannot parse value '" + token + "'");
  }

  std::string text_;
  int line_ = 0;
};

inline std::string where(const std::string& key, const Value& v) {
  return "'" + key + "' (line " + std::to_string(v.line) + ")";
}

inline double as_real(const std::string& key, const Value& v) {
  if (auto p = std::get_if<double>(&v.data)) return *p;
  if (auto p = std::get_if<std::int64_t>(&v.data)) return static_cast<double>(*p);
  throw ValidationError(where(key, v) + " must be a number");
}

inline std::int64_t as_int(const std::string& key, const Value& v) {
  if (auto p = std::get_if<std::int64_t>(&v.data)) return *p;
  throw ValidationError(where(key, v) + " must be an integer");
}

inline std::string as_string(const std::string& key, const Value& v) {
  if (auto p = std::get_if<std::string>(&v.data)) return *p;
  throw ValidationError(where(key, v) + " must be a string");
}

inline void reject_unknown(const Table& t, const std::set<std::string>& allowed,
                           const std::string& scope) {
  for (const auto& [k, v] : t.entries)
    if (!allowed.contains(k))
      throw ValidationError("unknown key " + where(scope + k, v));
}

}  // namespace detail

inline Document parse_document(const std::string& text) { return detail::Parser(text).parse(); }

// Parses and validates. Invariant breaches surface as ValidationError with
// the offending key in the message.
inline sim::ScenarioConfig parse_config_text(const std::string& text) {
  using namespace detail;
  const Document doc = parse_document(text);
  sim::ScenarioConfig cfg;

  const std::set<std::string> root_keys{"seed", "duration_hours", "rounds_per_hour", "lambda",
                                        "time_window_hours", "fee", "initial_points_mean",
                                        "age_init_mode", "retention_hours"};
  reject_unknown(doc.root, root_keys, "");
  for (const auto& [name, t] : doc.tables)
    if (name != "quorum" && name != "adversary")
      throw ValidationError("unknown table [" + name + "] (line " + std::to_string(t.line) + ")");
  for (const auto& [name, arr] : doc.table_arrays)
    if (name != "groups" && name != "churn")
      throw ValidationError("unknown table array [[" + name + "]]");

  const auto& root = doc.root.entries;
  auto get = [](const std::map<std::string, Value>& m, const std::string& k) -> const Value* {
    auto it = m.find(k);
    return it == m.end() ? nullptr : &it->second;
  };

  if (auto v = get(root, "seed")) {
    const auto s = as_int("seed", *v);
    if (s < 0) throw ValidationError("'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get(root, "duration_hours")) cfg.duration_hours = static_cast<int>(as_int("duration_hours", *v));
  if (auto v = get(root, "rounds_per_hour")) cfg.rounds_per_hour = static_cast<int>(as_int("rounds_per_hour", *v));
  if (auto v = get(root, "lambda")) cfg.lambda = as_real("lambda", *v);
  if (auto v = get(root, "time_window_hours")) cfg.time_window_hours = as_real("time_window_hours", *v);
  if (auto v = get(root, "fee")) cfg.fee = as_real("fee", *v);
  if (auto v = get(root, "initial_points_mean")) cfg.initial_points_mean = as_real("initial_points_mean", *v);
  if (auto v = get(root, "retention_hours")) cfg.retention_hours = as_real("retention_hours", *v);
  if (auto v = get(root, "age_init_mode")) {
    const auto mode = as_string("age_init_mode", *v);
    if (mode == "from_join_time") cfg.age_init_mode = sim::AgeInitMode::from_join_time;
    else if (mode == "uniform_random") cfg.age_init_mode = sim::AgeInitMode::uniform_random;
    else throw ValidationError(where("age_init_mode", *v) + " must be from_join_time or uniform_random");
  }

  if (auto it = doc.tables.find("quorum"); it != doc.tables.end()) {
    reject_unknown(it->second, {"total_reward", "min_reward"}, "quorum.");
    if (auto v = get(it->second.entries, "total_reward")) cfg.total_reward = as_real("quorum.total_reward", *v);
    if (auto v = get(it->second.entries, "min_reward")) cfg.min_reward = as_real("quorum.min_reward", *v);
  }

  if (auto it = doc.table_arrays.find("groups"); it != doc.table_arrays.end()) {
    cfg.groups.clear();
    for (const auto& t : it->second) {
      reject_unknown(t, {"size", "join_hour"}, "groups.");
      auto size = get(t.entries, "size");
      auto join = get(t.entries, "join_hour");
      if (!size || !join)
        throw ValidationError("[[groups]] at line " + std::to_string(t.line) + " needs size and join_hour");
      cfg.groups.push_back({static_cast<int>(as_int("groups.size", *size)),
                            static_cast<int>(as_int("groups.join_hour", *join))});
    }
  }

  if (auto it = doc.tables.find("adversary"); it != doc.tables.end()) {
    reject_unknown(it->second, {"count", "strategy", "placement"}, "adversary.");
    sim::AdversarySpec adv;
    const auto& e = it->second.entries;
    if (auto v = get(e, "count")) adv.count = static_cast<int>(as_int("adversary.count", *v));
    if (auto v = get(e, "strategy"); v && as_string("adversary.strategy", *v) != "colluding_equivocation")
      throw ValidationError(where("adversary.strategy", *v) + " must be colluding_equivocation");
    if (auto v = get(e, "placement")) {
      const auto p = as_string("adversary.placement", *v);
      if (p == "random") adv.placement = sim::AttackerPlacement::random;
      else if (p == "earliest") adv.placement = sim::AttackerPlacement::earliest;
      else if (p == "latest") adv.placement = sim::AttackerPlacement::latest;
      else throw ValidationError(where("adversary.placement", *v) + " must be random, earliest or latest");
    }
    cfg.adversary = adv;
  }

  if (auto it = doc.table_arrays.find("churn"); it != doc.table_arrays.end()) {
    for (const auto& t : it->second) {
      reject_unknown(t, {"bridge", "offline_hour", "rejoin_hour"}, "churn.");
      auto bridge = get(t.entries, "bridge");
      auto off = get(t.entries, "offline_hour");
      if (!bridge || !off)
        throw ValidationError("[[churn]] at line " + std::to_string(t.line) + " needs bridge and offline_hour");
      sim::ChurnEvent ev{static_cast<int>(as_int("churn.bridge", *bridge)),
                         static_cast<int>(as_int("churn.offline_hour", *off)), std::nullopt};
      if (auto r = get(t.entries, "rejoin_hour")) ev.rejoin_hour = static_cast<int>(as_int("churn.rejoin_hour", *r));
      cfg.churn.push_back(ev);
    }
  }

  try {
    sim::validate(cfg);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    const std::string prefix = "ConfigError: ";
    if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
    throw ValidationError(msg);
  }
  return cfg;
}

inline sim::ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace pscrd::config
