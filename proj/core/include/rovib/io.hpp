#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rovib/analysis.hpp"
#include "rovib/dynamics.hpp"
#include "rovib/ensemble.hpp"
#include "rovib/excitation.hpp"
#include "rovib/fit.hpp"
#include "rovib/husimi.hpp"
#include "rovib/pulses.hpp"

namespace rovib {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);
/// Strict parse of a whole field; nullopt on any trailing garbage.
std::optional<double> parse_number(std::string_view text);

/// Ordered "# key: value" header lines of a CSV file.
struct CsvMetadata {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> find(std::string_view key) const;
};

/// Header key whose value changes from run to run; tools comparing outputs skip it.
inline constexpr std::string_view kCreatedKey = "created";

struct TraceRecord {
  CsvMetadata metadata;
  std::vector<double> times;
  std::vector<std::complex<double>> rho;
  std::vector<double> signal;
};

TraceRecord make_trace_record(const CoherenceTrace& trace, CsvMetadata metadata);

/// Columns time_ps,re_rho,im_rho,signal. Writing a record read back from a
/// written file reproduces it byte for byte.
void write_trace_csv(std::ostream& out, const TraceRecord& record);
/// Throws ConfigError with the line number on malformed input.
TraceRecord read_trace_csv(std::istream& in);

void write_lines_csv(std::ostream& out, const LineTable& lines);
void write_ensemble_csv(std::ostream& out, const ThermalEnsemble& ensemble);
/// Columns shift_cm1,re_a2,im_a2,power.
void write_spectrum_csv(std::ostream& out, const TwoPhotonSpectrum& spectrum, const CsvMetadata& metadata = {});
/// Matrix with a header row of times (fs); each following row starts with its frequency (cm^-1).
void write_husimi_csv(std::ostream& out, const HusimiMap& map, const CsvMetadata& metadata = {});

struct SignalData {
  std::vector<double> times;
  std::vector<double> signal;
};

/// Two-column (time_ps, signal) data; '#' lines and blank lines are skipped.
/// A header row is accepted when it names the columns; with more columns the
/// ones named time_ps and signal are used (so trace files can be read back).
SignalData read_signal_csv(std::istream& in);

std::string fit_result_json(const FitResult& result);
std::string revival_report_json(const RevivalReport& report);
/// Fixed-width table of the report entries.
std::string revival_report_table(const RevivalReport& report);

}  // namespace rovib
