#pragma once

#include <string>

namespace rovib::cli {

// gnuplot scripts; each expects to be run from the directory holding the CSV.
std::string trace_plot(const std::string& csv, const std::string& title);
std::string spectrum_plot(const std::string& csv);
std::string husimi_plot(const std::string& csv, const std::string& title);
std::string fit_plot(const std::string& csv);
std::string profile_plot(const std::string& csv, const std::string& parameter);

}  // namespace rovib::cli
