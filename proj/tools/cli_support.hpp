#pragma once

// Argument assembly for the command-line tool. Values come from three
// places, lowest precedence first: a key=value config file, GTQA_* variables
// in the environment, and the command line itself. They are folded into one
// argument list before CLI11 sees it.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gtqa/error.hpp"

namespace gtqa::cli {

inline constexpr const char* kToolName = "gtqa";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kEnvPrefix = "GTQA_";

// Thrown for anything the user typed wrong (unknown subcommand, key, flag).
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error("usage", what) {}
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines; '#' comments and blank lines ignored. Later keys win.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("config file '" + path + "' line " + std::to_string(lineno) + ": expected key=value");
    }
    entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return entries;
}

// "peak-window" -> "GTQA_PEAK_WINDOW".
inline std::string env_name(const std::string& key) {
  std::string out = kEnvPrefix;
  for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Long names of every option a subcommand accepts, minus help.
inline std::vector<std::string> option_keys(CLI::App& sub) {
  std::vector<std::string> keys;
  for (CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    keys.push_back(name);
  }
  return keys;
}

// Finds "--config <path>" or "--config=<path>" in the raw arguments.
inline std::string find_config_path(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path;
}

inline std::string key_of(const std::string& token) {
  if (token.rfind("--", 0) != 0) return {};
  return token.substr(2, token.find('=') == std::string::npos ? std::string::npos : token.find('=') - 2);
}

// Arguments for CLI11. A key set on the command line hides the same key in
// the environment, which in turn hides the config file; each key therefore
// reaches the parser from exactly one source.
inline std::vector<std::string> assemble_arguments(CLI::App& sub, const std::vector<std::string>& cli_args) {
  const auto keys = option_keys(sub);
  auto known = [&](const std::string& k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
  std::set<std::string> on_command_line;
  for (const auto& tok : cli_args) {
    if (const auto k = key_of(tok); !k.empty()) on_command_line.insert(k);
  }
  std::vector<std::string> from_env;
  std::set<std::string> in_env;
  for (const auto& key : keys) {
    if (key == "config" || on_command_line.contains(key)) continue;
    if (const char* v = std::getenv(env_name(key).c_str()); v && *v) {
      from_env.push_back("--" + key + "=" + v);
      in_env.insert(key);
    }
  }
  std::vector<std::string> out;
  const std::string config = find_config_path(cli_args);
  if (!config.empty()) {
    for (const auto& [key, value] : read_config_file(config)) {
      if (key == "subcommand") {
        if (value != sub.get_name()) {
          throw UsageError("config file '" + config + "' is for subcommand '" + value + "', not '" +
                           sub.get_name() + "'");
        }
        continue;
      }
      if (key == "config") continue;
      if (!known(key)) throw UsageError("config file '" + config + "': unknown key '" + key + "'");
      // An empty value means the default; CLI11 would read "--key=" as
      // taking the next token.
      if (value.empty() || on_command_line.contains(key) || in_env.contains(key)) continue;
      out.push_back("--" + key + "=" + value);
    }
  }
  out.insert(out.end(), from_env.begin(), from_env.end());
  out.insert(out.end(), cli_args.begin(), cli_args.end());
  return out;
}

// Resolved value of every option, as text: the parsed value when one was
// given anywhere, the default otherwise.
inline std::map<std::string, std::string> resolved_options(CLI::App& sub) {
  std::map<std::string, std::string> out;
  for (CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto r = opt->reduced_results();
      std::string joined;
      for (std::size_t i = 0; i < r.size(); ++i) joined += (i ? "," : "") + r[i];
      out[name] = joined;
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

// Manifest in the config-file format, so it can be fed back via --config.
inline std::string render_manifest(const std::string& subcommand, const std::map<std::string, std::string>& options,
                                   const std::vector<std::string>& outputs) {
  std::ostringstream m;
  m << "# run manifest\n";
  m << "# tool=" << kToolName << " version=" << kToolVersion << '\n';
  m << "# outputs=";
  for (std::size_t i = 0; i < outputs.size(); ++i) m << (i ? "," : "") << outputs[i];
  m << '\n';
  m << "subcommand=" << subcommand << '\n';
  for (const auto& [k, v] : options) m << k << '=' << v << '\n';
  return m.str();
}

// One JSON object on one line.
inline std::string error_line(const std::string& kind, const std::string& message) {
  std::string esc;
  for (char c : message) {
    if (c == '"' || c == '\\') {
      esc += '\\';
      esc += c;
    } else if (c == '\n') {
      esc += "\\n";
    } else {
      esc += c;
    }
  }
  return "{\"error\":\"" + kind + "\",\"message\":\"" + esc + "\"}";
}

}  // namespace gtqa::cli
