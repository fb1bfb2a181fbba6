#include "smatruss/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <numbers>
#include <ostream>

#include "smatruss/io.hpp"

namespace smatruss::config {

RunConfig::RunConfig() {
  // Dimensional mode has no published geometry; these defaults place it on
  // the same operating point as the nondimensional reference.
  geometry = TrussGeometry{0.5, std::numbers::pi / 6.0, 1e-6, 1.0, 0.0};
  const double w0 = natural_frequency(material, geometry);
  geometry.damping = 0.05 * geometry.mass * w0;
  temperature = 0.69 * material.t_m;
  force_amplitude = 0.02 * geometry.mass * geometry.length * w0 * w0;
  forcing_frequency = 0.5 * w0;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    return io::parse_number(v);
  } catch (const io::FormatError&) {
    throw ConfigError("key '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  }
}

struct Field {
  std::string_view section;
  std::string_view name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Access>
Field number(std::string_view section, std::string_view name, Access access) {
  return {section, name,
          [=](RunConfig& c, std::string_view v) { access(c) = to_double(name, v); },
          [=](const RunConfig& c) { return io::format_number(access(c)); }};
}

template <typename Access>
Field plant_default(std::string_view section, std::string_view name, Access access) {
  return {section, name,
          [=](RunConfig& c, std::string_view v) {
            if (v == "plant") {
              access(c).reset();
            } else {
              access(c) = to_double(name, v);
            }
          },
          [=](const RunConfig& c) { return access(c) ? io::format_number(*access(c)) : std::string("plant"); }};
}

template <typename E>
Field enumeration(std::string_view section, std::string_view name, E RunConfig::*member,
                  std::vector<std::pair<std::string_view, E>> names) {
  return {section, name,
          [=](RunConfig& c, std::string_view v) {
            for (const auto& [label, value] : names) {
              if (label == v) {
                c.*member = value;
                return;
              }
            }
            std::string expected;
            for (const auto& [label, value] : names) expected += (expected.empty() ? "" : ", ") + std::string(label);
            throw ConfigError("key '" + std::string(name) + "' expects one of " + expected + ", got '" +
                              std::string(v) + "'");
          },
          [=](const RunConfig& c) {
            for (const auto& [label, value] : names) {
              if (value == c.*member) return std::string(label);
            }
            return std::string();
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"run", "preset", [](RunConfig& c, std::string_view v) { c.preset = std::string(v); },
                 [](const RunConfig& c) { return c.preset; }});
    f.push_back(enumeration<ControlMode>("run", "mode", &RunConfig::mode,
                                         {{"none", ControlMode::none},
                                          {"fl", ControlMode::feedback_linearization},
                                          {"fuzzy-fl", ControlMode::fuzzy_feedback_linearization}}));

    f.push_back(number("material", "a1_mpa_per_k", [](auto& c) -> auto& { return c.material.a1; }));
    f.push_back(number("material", "a2_mpa", [](auto& c) -> auto& { return c.material.a2; }));
    f.push_back(number("material", "a3_mpa", [](auto& c) -> auto& { return c.material.a3; }));
    f.push_back(number("material", "t_m_k", [](auto& c) -> auto& { return c.material.t_m; }));

    f.push_back(number("geometry", "length_m", [](auto& c) -> auto& { return c.geometry.length; }));
    f.push_back(number("geometry", "phi0_rad", [](auto& c) -> auto& { return c.geometry.phi0; }));
    f.push_back(number("geometry", "area_m2", [](auto& c) -> auto& { return c.geometry.area; }));
    f.push_back(number("geometry", "mass_kg", [](auto& c) -> auto& { return c.geometry.mass; }));
    f.push_back(number("geometry", "damping_ns_per_m", [](auto& c) -> auto& { return c.geometry.damping; }));

    f.push_back(enumeration<ParamMode>("dynamics", "param_mode", &RunConfig::param_mode,
                                       {{"nondimensional", ParamMode::nondimensional},
                                        {"dimensional", ParamMode::dimensional}}));
    f.push_back(number("dynamics", "theta", [](auto& c) -> auto& { return c.dynamics.theta; }));
    f.push_back(number("dynamics", "xi", [](auto& c) -> auto& { return c.dynamics.xi; }));
    f.push_back(number("dynamics", "gamma", [](auto& c) -> auto& { return c.dynamics.gamma; }));
    f.push_back(number("dynamics", "omega", [](auto& c) -> auto& { return c.dynamics.omega; }));
    f.push_back(number("dynamics", "alpha2", [](auto& c) -> auto& { return c.dynamics.alpha2; }));
    f.push_back(number("dynamics", "alpha3", [](auto& c) -> auto& { return c.dynamics.alpha3; }));
    f.push_back(number("dynamics", "b", [](auto& c) -> auto& { return c.dynamics.b; }));
    f.push_back(number("dynamics", "temperature_k", [](auto& c) -> auto& { return c.temperature; }));
    f.push_back(number("dynamics", "force_amplitude_n", [](auto& c) -> auto& { return c.force_amplitude; }));
    f.push_back(
        number("dynamics", "forcing_frequency_rad_s", [](auto& c) -> auto& { return c.forcing_frequency; }));

    f.push_back({"controller", "order",
                 [](RunConfig& c, std::string_view v) {
                   int n = 0;
                   const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
                   if (ec != std::errc{} || p != v.data() + v.size()) {
                     throw ConfigError("key 'order' expects an integer, got '" + std::string(v) + "'");
                   }
                   c.order = n;
                 },
                 [](const RunConfig& c) { return std::to_string(c.order); }});
    f.push_back(number("controller", "lambda", [](auto& c) -> auto& { return c.lambda; }));
    f.push_back(number("controller", "alpha2_hat", [](auto& c) -> auto& { return c.alpha2_hat; }));
    f.push_back(number("controller", "alpha3_hat", [](auto& c) -> auto& { return c.alpha3_hat; }));
    f.push_back(plant_default("controller", "theta_hat", [](auto& c) -> auto& { return c.theta_hat; }));
    f.push_back(plant_default("controller", "xi_hat", [](auto& c) -> auto& { return c.xi_hat; }));
    f.push_back(plant_default("controller", "b_hat", [](auto& c) -> auto& { return c.b_hat; }));

    f.push_back({"fuzzy", "centers",
                 [](RunConfig& c, std::string_view v) {
                   std::vector<double> centers;
                   std::size_t start = 0;
                   for (;;) {
                     const auto pos = v.find(',', start);
                     centers.push_back(to_double("centers", trim(v.substr(start, pos - start))));
                     if (pos == std::string_view::npos) break;
                     start = pos + 1;
                   }
                   c.fuzzy.centers = std::move(centers);
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (double v : c.fuzzy.centers) out += (out.empty() ? "" : ", ") + io::format_number(v);
                   return out;
                 }});
    f.push_back(number("fuzzy", "phi", [](auto& c) -> auto& { return c.fuzzy.phi; }));
    f.push_back(number("fuzzy", "d_max", [](auto& c) -> auto& { return c.fuzzy.d_max; }));

    f.push_back(number("simulation", "x0", [](auto& c) -> auto& { return c.x0; }));
    f.push_back(number("simulation", "y0", [](auto& c) -> auto& { return c.y0; }));
    f.push_back(number("simulation", "setpoint", [](auto& c) -> auto& { return c.setpoint; }));
    f.push_back(number("simulation", "duration", [](auto& c) -> auto& { return c.duration; }));
    f.push_back(enumeration<RateUnit>("simulation", "rate_unit", &RunConfig::rate_unit,
                                      {{"omega_over_pi", RateUnit::omega_over_pi}, {"per_tau", RateUnit::per_tau}}));
    f.push_back(number("simulation", "plant_rate", [](auto& c) -> auto& { return c.plant_rate; }));
    f.push_back(number("simulation", "control_rate", [](auto& c) -> auto& { return c.control_rate; }));
    f.push_back(number("simulation", "transient_fraction", [](auto& c) -> auto& { return c.transient_fraction; }));
    f.push_back(number("simulation", "blowup_limit", [](auto& c) -> auto& { return c.blowup_limit; }));
    return f;
  }();
  return table;
}

const Field* find_field(std::string_view name) {
  const auto& table = fields();
  const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.name == name; });
  return it == table.end() ? nullptr : &*it;
}

bool known_section(std::string_view section) {
  const auto& table = fields();
  return std::any_of(table.begin(), table.end(), [&](const Field& f) { return f.section == section; });
}

}  // namespace

std::vector<std::string> preset_names() { return {"uncontrolled", "fl", "fuzzy-fl"}; }

RunConfig preset(std::string_view name) {
  RunConfig cfg;
  cfg.preset = std::string(name);
  if (name == "fuzzy-fl") {
    cfg.mode = ControlMode::fuzzy_feedback_linearization;
  } else if (name == "fl") {
    cfg.mode = ControlMode::feedback_linearization;
  } else if (name == "uncontrolled") {
    cfg.mode = ControlMode::none;
    // Nothing settles in an open-loop run, so the whole record is counted.
    cfg.transient_fraction = 0.0;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "' (expected uncontrolled, fl or fuzzy-fl)");
  }
  return cfg;
}

void set_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  std::string_view name = key;
  std::string_view section;
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    name = key.substr(dot + 1);
  }
  const Field* field = find_field(name);
  if (field == nullptr) throw ConfigError("unknown key '" + std::string(key) + "'");
  if (!section.empty() && field->section != section) {
    throw ConfigError("key '" + std::string(name) + "' belongs to section [" + std::string(field->section) + "]");
  }
  field->set(cfg, trim(value));
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  set_value(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

RunConfig parse(std::istream& is, RunConfig base) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where() + "unterminated section header");
      section = std::string(trim(text.substr(1, text.size() - 2)));
      if (!known_section(section)) throw ConfigError(where() + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
    const auto key = trim(text.substr(0, eq));
    const Field* field = find_field(key);
    if (field == nullptr) throw ConfigError(where() + "unknown key '" + std::string(key) + "'");
    if (field->section != section) {
      throw ConfigError(where() + "key '" + std::string(key) + "' belongs to section [" +
                        std::string(field->section) + "]");
    }
    try {
      field->set(base, trim(text.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
  }
  return base;
}

RunConfig load(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  return parse(f, std::move(base));
}

void dump(std::ostream& os, const RunConfig& cfg) {
  std::string_view section;
  bool first = true;
  for (const Field& f : fields()) {
    if (first || f.section != section) {
      section = f.section;
      os << (first ? "" : "\n") << '[' << section << "]\n";
      first = false;
    }
    os << f.name << " = " << f.get(cfg) << '\n';
  }
}

Scenario to_scenario(const RunConfig& cfg) {
  try {
    Scenario sc;
    sc.params = cfg.param_mode == ParamMode::dimensional
                    ? nondimensionalize(cfg.material, cfg.geometry, cfg.temperature, cfg.force_amplitude,
                                        cfg.forcing_frequency)
                    : cfg.dynamics;
    sc.mode = cfg.mode;
    sc.controller.order = cfg.order;
    sc.controller.lambda = cfg.lambda;
    sc.controller.estimates = ModelEstimates{cfg.theta_hat.value_or(sc.params.theta),
                                             cfg.xi_hat.value_or(sc.params.xi), cfg.alpha2_hat, cfg.alpha3_hat,
                                             cfg.b_hat.value_or(sc.params.b)};
    sc.controller.fuzzy_enabled = cfg.mode == ControlMode::fuzzy_feedback_linearization;
    sc.controller.fuzzy = cfg.fuzzy;
    sc.x0 = cfg.x0;
    sc.y0 = cfg.y0;
    sc.setpoint = cfg.setpoint;
    sc.duration = cfg.duration;
    if (cfg.rate_unit == RateUnit::omega_over_pi) {
      if (!(sc.params.omega > 0.0)) {
        throw ConfigError("rate_unit omega_over_pi needs a positive forcing frequency; use rate_unit = per_tau");
      }
      sc.plant_rate = cfg.plant_rate * sc.params.omega / std::numbers::pi;
      sc.control_rate = cfg.control_rate * sc.params.omega / std::numbers::pi;
    } else {
      sc.plant_rate = cfg.plant_rate;
      sc.control_rate = cfg.control_rate;
    }
    sc.transient_fraction = cfg.transient_fraction;
    sc.blowup_limit = cfg.blowup_limit;
    validate(sc);
    return sc;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace smatruss::config
