#include "rovib/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rovib/errors.hpp"

namespace rovib {

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, end);
}

std::optional<double> parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

void CsvMetadata::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

std::optional<std::string> CsvMetadata::find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

namespace {

void write_metadata(std::ostream& out, const CsvMetadata& meta) {
  for (const auto& [k, v] : meta.entries) out << "# " << k << ": " << v << '\n';
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw ConfigError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

TraceRecord make_trace_record(const CoherenceTrace& trace, CsvMetadata metadata) {
  return {std::move(metadata), trace.times, trace.rho, trace.signal};
}

void write_trace_csv(std::ostream& out, const TraceRecord& r) {
  write_metadata(out, r.metadata);
  out << "time_ps,re_rho,im_rho,signal\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << format_number(r.times[i]) << ',' << format_number(r.rho[i].real()) << ','
        << format_number(r.rho[i].imag()) << ',' << format_number(r.signal[i]) << '\n';
  }
}

TraceRecord read_trace_csv(std::istream& in) {
  TraceRecord r;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (header) bad_line(line_no, "metadata after the column header");
      std::string_view body(line);
      body.remove_prefix(1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const auto colon = body.find(": ");
      if (colon == std::string_view::npos) bad_line(line_no, "metadata line without 'key: value'");
      r.metadata.entries.emplace_back(std::string(body.substr(0, colon)), std::string(body.substr(colon + 2)));
      continue;
    }
    if (!header) {
      if (line != "time_ps,re_rho,im_rho,signal") bad_line(line_no, "expected header time_ps,re_rho,im_rho,signal");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 4) bad_line(line_no, "expected 4 fields");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      auto x = parse_number(f[static_cast<std::size_t>(k)]);
      if (!x) bad_line(line_no, "invalid number '" + std::string(f[static_cast<std::size_t>(k)]) + "'");
      v[k] = *x;
    }
    if (!r.times.empty() && !(v[0] > r.times.back())) bad_line(line_no, "time must increase");
    r.times.push_back(v[0]);
    r.rho.emplace_back(v[1], v[2]);
    r.signal.push_back(v[3]);
  }
  if (!header) throw ConfigError("trace file has no column header");
  return r;
}

void write_lines_csv(std::ostream& out, const LineTable& lines) {
  out << "branch,J_lower,J_upper,wavenumber_cm1,re_amplitude,im_amplitude\n";
  for (const auto& l : lines.lines) {
    out << branch_letter(l.branch) << ',' << l.j_lower << ',' << l.j_upper << ',' << format_number(l.wavenumber_cm1)
        << ',' << format_number(l.amplitude.real()) << ',' << format_number(l.amplitude.imag()) << '\n';
  }
}

void write_ensemble_csv(std::ostream& out, const ThermalEnsemble& ensemble) {
  out << "J,weight\n";
  for (int j = 0; j <= ensemble.j_max(); ++j) out << j << ',' << format_number(ensemble.weight(j)) << '\n';
}

void write_spectrum_csv(std::ostream& out, const TwoPhotonSpectrum& spectrum, const CsvMetadata& metadata) {
  write_metadata(out, metadata);
  out << "shift_cm1,re_a2,im_a2,power\n";
  const auto g = spectrum.grid();
  const auto a = spectrum.amplitude();
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << format_number(g[i]) << ',' << format_number(a[i].real()) << ',' << format_number(a[i].imag()) << ','
        << format_number(std::norm(a[i])) << '\n';
  }
}

void write_husimi_csv(std::ostream& out, const HusimiMap& map, const CsvMetadata& metadata) {
  write_metadata(out, metadata);
  out << "frequency_cm1\\time_fs";
  for (double t : map.time_fs()) out << ',' << format_number(t);
  out << '\n';
  const auto nu = map.frequency_cm1();
  for (std::size_t i = 0; i < nu.size(); ++i) {
    out << format_number(nu[i]);
    for (std::size_t j = 0; j < map.time_fs().size(); ++j) out << ',' << format_number(map.at(i, j));
    out << '\n';
  }
}

SignalData read_signal_csv(std::istream& in) {
  SignalData d;
  std::string line;
  std::size_t line_no = 0;
  std::size_t col_t = 0, col_s = 1;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto f = split(body, ',');
    if (first_row) {
      first_row = false;
      if (!parse_number(f[0])) {
        // Header row.
        std::optional<std::size_t> t, s;
        for (std::size_t k = 0; k < f.size(); ++k) {
          const auto name = trim(f[k]);
          if (name == "time_ps" || name == "time") t = k;
          if (name == "signal") s = k;
        }
        if (f.size() == 2) {
          t = t.value_or(0);
          s = s.value_or(1);
        }
        if (!t || !s) bad_line(line_no, "header must name time_ps and signal columns");
        col_t = *t;
        col_s = *s;
        continue;
      }
      if (f.size() != 2) bad_line(line_no, "expected two columns (time_ps, signal)");
    }
    if (f.size() <= std::max(col_t, col_s)) bad_line(line_no, "too few fields");
    const auto t = parse_number(f[col_t]);
    const auto s = parse_number(f[col_s]);
    if (!t || !s) bad_line(line_no, "invalid number");
    d.times.push_back(*t);
    d.signal.push_back(*s);
  }
  if (d.times.empty()) throw ConfigError("signal file contains no data rows");
  return d;
}

namespace {

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::string fit_result_json(const FitResult& r) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json values, unc;
  for (const auto& [p, v] : r.values) values[parameter_name(p)] = v;
  for (const auto& [p, v] : r.uncertainties) unc[parameter_name(p)] = finite_or_null(v);
  nlohmann::ordered_json free = nlohmann::ordered_json::array();
  for (auto p : r.free) free.push_back(parameter_name(p));
  j["values"] = values;
  j["uncertainties"] = unc.is_null() ? nlohmann::ordered_json::object() : unc;
  j["free"] = free;
  j["rss"] = r.rss;
  j["initial_rss"] = r.initial_rss;
  j["converged"] = r.converged;
  j["identifiable"] = r.identifiable;
  j["iterations"] = r.iterations;
  j["evaluations"] = r.evaluations;
  j["message"] = r.message;
  return j.dump(2) + "\n";
}

std::string revival_report_json(const RevivalReport& r) {
  nlohmann::ordered_json j;
  j["revival_time_ps"] = r.revival_time_ps;
  j["q_max"] = r.q_max;
  j["tolerance_ps"] = r.tolerance_ps;
  j["measured_revival_ps"] = r.measured_revival_ps ? nlohmann::ordered_json(*r.measured_revival_ps) : nullptr;
  j["dephasing_time_ps"] = r.dephasing_time_ps ? nlohmann::ordered_json(*r.dephasing_time_ps) : nullptr;
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : r.entries) {
    nlohmann::ordered_json x;
    x["time_ps"] = e.time_ps;
    x["kind"] = kind_name(e.kind);
    x["prominence"] = e.prominence;
    x["fraction"] = e.fraction ? nlohmann::ordered_json(e.fraction->str()) : nullptr;
    x["match_error_ps"] = e.fraction ? nlohmann::ordered_json(e.match_error_ps) : nullptr;
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::string revival_report_table(const RevivalReport& r) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "T_RoVib = %.3f ps   q_max = %d   tolerance = %.2f ps\n", r.revival_time_ps, r.q_max,
                r.tolerance_ps);
  out << buf;
  if (r.dephasing_time_ps) {
    std::snprintf(buf, sizeof buf, "dephasing time = %.2f ps\n", *r.dephasing_time_ps);
    out << buf;
  }
  if (r.measured_revival_ps) {
    std::snprintf(buf, sizeof buf, "full revival observed at %.2f ps\n", *r.measured_revival_ps);
    out << buf;
  }
  out << "\n   time_ps  kind  prominence  fraction  error_ps\n";
  for (const auto& e : r.entries) {
    if (e.fraction) {
      std::snprintf(buf, sizeof buf, "%10.2f  %-4s  %10.4g  %8s  %+8.2f\n", e.time_ps, kind_name(e.kind), e.prominence,
                    e.fraction->str().c_str(), e.match_error_ps);
    } else {
      std::snprintf(buf, sizeof buf, "%10.2f  %-4s  %10.4g  %8s  %8s\n", e.time_ps, kind_name(e.kind), e.prominence, "-",
                    "-");
    }
    out << buf;
  }
  return out.str();
}

}  // namespace rovib
