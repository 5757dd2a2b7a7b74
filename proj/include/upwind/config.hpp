#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "upwind/coupled_sim.hpp"
#include "upwind/csv.hpp"
#include "upwind/flux.hpp"

namespace upwind {

/// Flat key=value experiment configuration.  File values are read first,
/// command-line overrides land on top, defaults fill the rest; the resolved
/// set is echoed into every output header.
class ExperimentConfig {
 public:
  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  void set(const std::string& key, const std::string& value) {
    if (!value.empty()) kv_[key] = value;
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  double get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : std::stod(it->second);
  }
  long get_long(const std::string& key, long fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : std::stol(it->second);
  }

  FluxParams flux() const {
    return FluxParams::make(get_double("mu", 0.55),
                            static_cast<int>(get_long("lambda0_p", 3)),
                            static_cast<int>(get_long("lambda0_q", 5)));
  }

  RunConfig run_config() const {
    RunConfig cfg;
    cfg.params = flux();
    cfg.T = get_long("T", 256);
    cfg.u_star = get_double("u_star", -1.0);
    cfg.source_width = get_double("width", -1.0);
    cfg.left_margin = get_long("left_margin", 0);
    cfg.right_margin = get_long("right_margin", 64);
    cfg.quad.nodes_per_panel = static_cast<int>(get_long("quad_nodes", 24));
    cfg.quad.panel_width = get_double("panel_width", 0.5);
    return cfg;
  }

  /// Canonical "k=v k=v ..." echo (sorted keys, resolved values included).
  std::string echo() const {
    std::map<std::string, std::string> full = kv_;
    auto put = [&](const std::string& k, const std::string& v) {
      if (!full.count(k)) full[k] = v;
    };
    put("mu", "0.55");
    put("lambda0_p", "3");
    put("lambda0_q", "5");
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : full) {
      os << (first ? "" : " ") << k << "=" << v;
      first = false;
    }
    return os.str();
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  std::map<std::string, std::string> kv_;
};

}  // namespace upwind
