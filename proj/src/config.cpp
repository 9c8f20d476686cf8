#include "pairflow/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "pairflow/errors.hpp"

namespace pairflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One parsed key with position info, consumed exactly once.
struct Entry {
  std::string value;
  int line;
  bool used = false;
};

class Issues {
 public:
  void add(const std::string& msg) { list_.push_back(msg); }
  void add_at(int line, const std::string& msg) {
    list_.push_back("line " + std::to_string(line) + ": " + msg);
  }
  bool empty() const { return list_.empty(); }
  [[noreturn]] void raise() const {
    std::string what = "invalid configuration:";
    for (const std::string& s : list_) what += "\n  - " + s;
    throw ConfigError(what, list_);
  }
  std::vector<std::string> take() { return std::move(list_); }
  void absorb(std::vector<std::string> other) {
    for (auto& s : other) list_.push_back(std::move(s));
  }

 private:
  std::vector<std::string> list_;
};

class Section {
 public:
  Section(std::string name, std::map<std::string, Entry>* entries,
          Issues* issues)
      : name_(std::move(name)), entries_(entries), issues_(issues) {}

  template <typename F>
  void key(const std::string& k, F&& parse) {
    if (entries_ == nullptr) return;
    auto it = entries_->find(k);
    if (it == entries_->end()) return;
    it->second.used = true;
    parse(it->second.value, it->second.line);
  }

  void number(const std::string& k, double& target) {
    key(k, [&](const std::string& v, int line) {
      char* end = nullptr;
      const double parsed = std::strtod(v.c_str(), &end);
      if (end == v.c_str() || *end != '\0')
        issues_->add_at(line, name_ + "." + k + ": expected a number, got '" +
                                  v + "'");
      else
        target = parsed;
    });
  }

  void integer(const std::string& k, int& target) {
    key(k, [&](const std::string& v, int line) {
      char* end = nullptr;
      const long parsed = std::strtol(v.c_str(), &end, 10);
      if (end == v.c_str() || *end != '\0')
        issues_->add_at(line, name_ + "." + k + ": expected an integer, got '" +
                                  v + "'");
      else
        target = int(parsed);
    });
  }

  void unsigned64(const std::string& k, std::uint64_t& target) {
    key(k, [&](const std::string& v, int line) {
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
      if (end == v.c_str() || *end != '\0')
        issues_->add_at(line, name_ + "." + k +
                                  ": expected an unsigned integer, got '" + v +
                                  "'");
      else
        target = parsed;
    });
  }

  void boolean(const std::string& k, bool& target) {
    key(k, [&](const std::string& v, int line) {
      if (v == "true")
        target = true;
      else if (v == "false")
        target = false;
      else
        issues_->add_at(line,
                        name_ + "." + k + ": expected true or false, got '" +
                            v + "'");
    });
  }

  void number_list(const std::string& k, std::vector<double>& target) {
    key(k, [&](const std::string& v, int line) {
      std::vector<double> parsed;
      for (const std::string& tok : split(v, ',')) {
        if (tok.empty()) continue;
        char* end = nullptr;
        const double d = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') {
          issues_->add_at(line, name_ + "." + k + ": bad number '" + tok + "'");
          return;
        }
        parsed.push_back(d);
      }
      target = parsed;
    });
  }

  void integer_list(const std::string& k, std::vector<int>& target) {
    key(k, [&](const std::string& v, int line) {
      std::vector<int> parsed;
      for (const std::string& tok : split(v, ',')) {
        if (tok.empty()) continue;
        char* end = nullptr;
        const long d = std::strtol(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0') {
          issues_->add_at(line, name_ + "." + k + ": bad integer '" + tok + "'");
          return;
        }
        parsed.push_back(int(d));
      }
      target = parsed;
    });
  }

  Issues* issues() { return issues_; }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::map<std::string, Entry>* entries_;
  Issues* issues_;
};

std::vector<InitialMode> parse_modes(Section& sec, const std::string& k,
                                     const std::string& v, int line) {
  std::vector<InitialMode> modes;
  for (const std::string& group : split(v, ';')) {
    if (group.empty()) continue;
    const std::vector<std::string> parts = split(group, ',');
    if (parts.size() != 4) {
      sec.issues()->add_at(line, sec.name() + "." + k +
                                     ": each mode needs k1,k2,re,im; got '" +
                                     group + "'");
      return modes;
    }
    InitialMode im;
    im.k.k1 = std::atoi(parts[0].c_str());
    im.k.k2 = std::atoi(parts[1].c_str());
    im.a = Complex(std::atof(parts[2].c_str()), std::atof(parts[3].c_str()));
    modes.push_back(im);
  }
  return modes;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  Issues issues;
  std::map<std::string, std::map<std::string, Entry>> sections;
  static const std::vector<std::string> known_sections = {
      "simulation", "noise", "statistics", "sweep"};

  std::istringstream in(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.add_at(lineno, "malformed section header '" + line + "'");
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const std::string& s : known_sections) known |= (s == current);
      if (!known) {
        issues.add_at(lineno, "unknown section [" + current + "]");
        current.clear();
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      issues.add_at(lineno, "expected key = value, got '" + line + "'");
      continue;
    }
    if (current.empty()) {
      issues.add_at(lineno, "key outside of any section: '" + line + "'");
      continue;
    }
    const std::string k = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    auto [it, inserted] = sections[current].insert({k, Entry{v, lineno}});
    if (!inserted)
      issues.add_at(lineno, "duplicate key " + current + "." + k);
  }

  RunConfig cfg;
  auto section_of = [&](const std::string& name) -> Section {
    auto it = sections.find(name);
    return Section(name, it == sections.end() ? nullptr : &it->second, &issues);
  };

  {
    Section sec = section_of("simulation");
    SimulationConfig& sim = cfg.simulation;
    sec.number("nu", sim.nu);
    sec.number("lambda", sim.lambda);
    sec.number("dt", sim.dt);
    sec.number("t_final", sim.t_final);
    sec.integer("resolution", sim.resolution);
    sec.number("domain_size", sim.domain_size);
    sec.unsigned64("seed", sim.seed);
    sec.key("burn_in", [&](const std::string& v, int line) {
      if (v == "auto") {
        sim.burn_in_auto = true;
        sim.burn_in = 0.0;
        return;
      }
      char* end = nullptr;
      const double parsed = std::strtod(v.c_str(), &end);
      if (end == v.c_str() || *end != '\0')
        issues.add_at(line, "simulation.burn_in: expected a number or 'auto'");
      else {
        sim.burn_in_auto = false;
        sim.burn_in = parsed;
      }
    });
    sec.number("observe_interval", sim.observe_interval);
    sec.number("snapshot_interval", sim.snapshot_interval);
    sec.integer("checkpoints", sim.checkpoint_count);
    sec.boolean("nonlinear", sim.nonlinear);
    sec.key("initial_u", [&](const std::string& v, int line) {
      sim.initial_u = parse_modes(sec, "initial_u", v, line);
    });
    sec.key("initial_w", [&](const std::string& v, int line) {
      sim.initial_w = parse_modes(sec, "initial_w", v, line);
    });
  }
  {
    Section sec = section_of("noise");
    NoiseSpec& noise = cfg.simulation.noise;
    sec.key("kind", [&](const std::string& v, int line) {
      if (v == "finite_band")
        noise.kind = NoiseModel::Kind::finite_band;
      else if (v == "power_law")
        noise.kind = NoiseModel::Kind::power_law;
      else
        issues.add_at(line,
                      "noise.kind must be finite_band or power_law, got '" +
                          v + "'");
    });
    sec.integer("modes", noise.modes);
    sec.number("q", noise.q);
    sec.number("amplitude", noise.amplitude);
    sec.number("exponent", noise.exponent);
  }
  {
    Section sec = section_of("statistics");
    StatisticsConfig& st = cfg.statistics;
    sec.integer_list("p_orders", st.p_orders);
    sec.integer("batch_count", st.batch_count);
    sec.number("fit_lmin", st.fit_lmin);
    sec.number("fit_lmax", st.fit_lmax);
  }
  {
    Section sec = section_of("sweep");
    SweepConfig& sw = cfg.sweep;
    sec.number_list("lambdas", sw.lambdas);
    sec.number("lambda0", sw.lambda0);
    sec.integer("replicas", sw.replicas);
    sec.boolean("shared_noise", sw.shared_noise);
    sec.number("pathwise_horizon", sw.pathwise_horizon);
  }

  for (auto& [sname, entries] : sections)
    for (auto& [key, entry] : entries)
      if (!entry.used)
        issues.add_at(entry.line, "unknown key " + sname + "." + key);

  // Semantic validation, collected alongside the syntax issues.
  try {
    cfg.simulation.validate();
  } catch (const ConfigError& e) {
    issues.absorb(e.issues());
  }
  for (int p : cfg.statistics.p_orders)
    if (p < 2) issues.add("statistics.p_orders entries must be >= 2");
  if (cfg.statistics.p_orders.empty() || cfg.statistics.p_orders.size() > 8)
    issues.add("statistics.p_orders must hold 1 to 8 entries");
  if (cfg.statistics.batch_count < 2)
    issues.add("statistics.batch_count must be >= 2");
  if (cfg.statistics.fit_lmin < 0.0 || cfg.statistics.fit_lmax < 0.0)
    issues.add("statistics fit range bounds must be >= 0");
  if (cfg.sweep.replicas < 1) issues.add("sweep.replicas must be >= 1");
  if (cfg.sweep.pathwise_horizon < 0.0)
    issues.add("sweep.pathwise_horizon must be >= 0");

  if (!issues.empty()) issues.raise();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

std::string serialize_config(const RunConfig& cfg) {
  const SimulationConfig& sim = cfg.simulation;
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) {
    out += k + " = " + v + "\n";
  };
  out += "[simulation]\n";
  kv("nu", fmt_double(sim.nu));
  kv("lambda", fmt_double(sim.lambda));
  kv("dt", fmt_double(sim.dt));
  kv("t_final", fmt_double(sim.t_final));
  kv("resolution", std::to_string(sim.resolution));
  kv("domain_size", fmt_double(sim.domain_size));
  kv("seed", std::to_string(sim.seed));
  kv("burn_in", sim.burn_in_auto ? "auto" : fmt_double(sim.burn_in));
  kv("observe_interval", fmt_double(sim.observe_interval));
  kv("snapshot_interval", fmt_double(sim.snapshot_interval));
  kv("checkpoints", std::to_string(sim.checkpoint_count));
  kv("nonlinear", sim.nonlinear ? "true" : "false");
  auto modes_text = [](const std::vector<InitialMode>& modes) {
    std::string s;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (i > 0) s += "; ";
      s += std::to_string(modes[i].k.k1) + "," + std::to_string(modes[i].k.k2) +
           "," + fmt_double(modes[i].a.real()) + "," +
           fmt_double(modes[i].a.imag());
    }
    return s;
  };
  if (!sim.initial_u.empty()) kv("initial_u", modes_text(sim.initial_u));
  if (!sim.initial_w.empty()) kv("initial_w", modes_text(sim.initial_w));

  out += "\n[noise]\n";
  kv("kind", sim.noise.kind == NoiseModel::Kind::finite_band ? "finite_band"
                                                             : "power_law");
  kv("modes", std::to_string(sim.noise.modes));
  kv("q", fmt_double(sim.noise.q));
  kv("amplitude", fmt_double(sim.noise.amplitude));
  kv("exponent", fmt_double(sim.noise.exponent));

  out += "\n[statistics]\n";
  {
    std::string s;
    for (std::size_t i = 0; i < cfg.statistics.p_orders.size(); ++i) {
      if (i > 0) s += ",";
      s += std::to_string(cfg.statistics.p_orders[i]);
    }
    kv("p_orders", s);
  }
  kv("batch_count", std::to_string(cfg.statistics.batch_count));
  kv("fit_lmin", fmt_double(cfg.statistics.fit_lmin));
  kv("fit_lmax", fmt_double(cfg.statistics.fit_lmax));

  out += "\n[sweep]\n";
  {
    std::string s;
    for (std::size_t i = 0; i < cfg.sweep.lambdas.size(); ++i) {
      if (i > 0) s += ",";
      s += fmt_double(cfg.sweep.lambdas[i]);
    }
    kv("lambdas", s);
  }
  kv("lambda0", fmt_double(cfg.sweep.lambda0));
  kv("replicas", std::to_string(cfg.sweep.replicas));
  kv("shared_noise", cfg.sweep.shared_noise ? "true" : "false");
  kv("pathwise_horizon", fmt_double(cfg.sweep.pathwise_horizon));
  return out;
}

}  // namespace pairflow
