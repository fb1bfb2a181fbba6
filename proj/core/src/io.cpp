#include "smatruss/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace smatruss::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw FormatError("cannot format number");
  return std::string(buf.data(), end);
}

double parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void open_or_throw(std::ofstream& f, const std::filesystem::path& p) {
  f.open(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

void write_timeseries(std::ostream& os, const Series& s) {
  os << kTimeseriesHeader << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_number(s.tau[i]) << ',' << format_number(s.x[i]) << ',' << format_number(s.y[i]) << ','
       << format_number(s.u[i]) << ',' << format_number(s.d_hat[i]) << ',' << format_number(s.s[i]) << ','
       << format_number(s.xtilde[i]) << ',' << format_number(s.xtilde_dot[i]) << ','
       << format_number(s.d_tilde[i]) << '\n';
  }
}

void write_poincare(std::ostream& os, std::span<const PoincarePoint> points) {
  os << kPoincareHeader << '\n';
  for (const auto& p : points) {
    os << format_number(p.tau) << ',' << format_number(p.x) << ',' << format_number(p.y) << '\n';
  }
}

Series read_timeseries(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty time series");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');

  Series s;
  const std::array<std::pair<std::string_view, std::vector<double>*>, 9> columns{{
      {"tau", &s.tau}, {"x", &s.x}, {"y", &s.y}, {"u", &s.u}, {"d_hat", &s.d_hat}, {"s", &s.s},
      {"xtilde", &s.xtilde}, {"xtilde_dot", &s.xtilde_dot}, {"d_tilde", &s.d_tilde},
  }};
  std::vector<std::pair<std::size_t, std::vector<double>*>> index;
  for (const auto& [name, dest] : columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FormatError("time series lacks column '" + std::string(name) + "'");
    index.emplace_back(static_cast<std::size_t>(it - header.begin()), dest);
  }

  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields");
    }
    for (const auto& [col, dest] : index) dest->push_back(parse_number(fields[col]));
  }
  return s;
}

KeyValues metrics_entries(const Scenario& sc, const ScenarioResult& r, std::string_view preset) {
  const Metrics& m = r.metrics;
  KeyValues kv;
  kv["preset"] = std::string(preset);
  kv["mode"] = to_string(sc.mode);
  kv["order"] = std::to_string(sc.controller.order);
  kv["lambda"] = format_number(sc.controller.lambda);
  kv["transient_fraction"] = format_number(sc.transient_fraction);
  kv["duration"] = format_number(sc.duration);
  kv["plant_step"] = format_number(1.0 / sc.plant_rate);
  kv["control_step"] = format_number(1.0 / sc.control_rate);
  kv["steps"] = std::to_string(r.series.size() - 1);
  kv["rms_error"] = format_number(m.rms_error);
  kv["max_abs_error"] = format_number(m.max_abs_error);
  kv["snap_through_count"] = std::to_string(m.snap_through_count);
  kv["poincare_points"] = std::to_string(m.poincare_points);
  kv["distinct_poincare_points"] = std::to_string(m.distinct_poincare_points);
  for (auto& [k, v] : bounds_entries(m.bounds, sc.controller.lambda, sc.transient_fraction)) kv[k] = v;
  return kv;
}

KeyValues bounds_entries(const BoundsReport& rep, double lambda, double transient_fraction) {
  KeyValues kv;
  kv["epsilon_hat"] = format_number(rep.epsilon_hat);
  kv["box_lambda"] = format_number(lambda);
  kv["box_transient_fraction"] = format_number(transient_fraction);
  kv["box_xtilde"] = format_number(rep.box.at(0));
  kv["box_xtilde_dot"] = format_number(rep.box.at(1));
  kv["max_abs_xtilde"] = format_number(rep.max_abs.at(0));
  kv["max_abs_xtilde_dot"] = format_number(rep.max_abs.at(1));
  kv["margin_xtilde"] = format_number(rep.margin.at(0));
  kv["margin_xtilde_dot"] = format_number(rep.margin.at(1));
  kv["inside_box"] = rep.inside ? "true" : "false";
  kv["box_entry_time"] = rep.entry_time ? format_number(*rep.entry_time) : "nan";
  return kv;
}

void write_key_values(std::ostream& os, const KeyValues& kv) {
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

KeyValues read_key_values(std::istream& is) {
  KeyValues kv;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("expected key=value, got '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

void write_run(const std::filesystem::path& dir, const Scenario& sc, const ScenarioResult& r,
               std::string_view preset) {
  std::filesystem::create_directories(dir);
  std::ofstream ts, pc, mt;
  open_or_throw(ts, dir / "timeseries.csv");
  write_timeseries(ts, r.series);
  open_or_throw(pc, dir / "poincare.csv");
  write_poincare(pc, r.poincare);
  open_or_throw(mt, dir / "metrics.txt");
  write_key_values(mt, metrics_entries(sc, r, preset));
}

}  // namespace smatruss::io
