#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "smatruss/simulation.hpp"

// Flat-file artifacts of a run. Numbers are written with std::to_chars, so the
// output never depends on the global or stream locale.

namespace smatruss::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal representation that round-trips to the same double.
std::string format_number(double v);
/// Strict parse of a whole string as a double; throws FormatError.
double parse_number(std::string_view text);

inline constexpr std::string_view kTimeseriesHeader = "tau,x,y,u,d_hat,s,xtilde,xtilde_dot,d_tilde";
inline constexpr std::string_view kPoincareHeader = "tau,x,y";

void write_timeseries(std::ostream& os, const Series& series);
void write_poincare(std::ostream& os, std::span<const PoincarePoint> points);

/// Reads a time series by column name. Extra columns are ignored; a missing
/// required column throws FormatError.
Series read_timeseries(std::istream& is);

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// key=value lines describing the scenario and its metrics.
KeyValues metrics_entries(const Scenario& sc, const ScenarioResult& result, std::string_view preset);
void write_key_values(std::ostream& os, const KeyValues& kv);
KeyValues read_key_values(std::istream& is);

/// Writes timeseries.csv, poincare.csv and metrics.txt into `dir`, creating it.
void write_run(const std::filesystem::path& dir, const Scenario& sc, const ScenarioResult& result,
               std::string_view preset);

/// Human-readable/parseable verification report (key=value lines).
KeyValues bounds_entries(const BoundsReport& rep, double lambda, double transient_fraction);

}  // namespace smatruss::io
