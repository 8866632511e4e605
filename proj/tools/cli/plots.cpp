#include "plots.hpp"

namespace rovib::cli {

namespace {

std::string preamble(const std::string& png) {
  return "set datafile separator ','\n"
         "set datafile commentschars '#'\n"
         "set key autotitle columnhead\n"
         "set terminal pngcairo size 1100,500 enhanced\n"
         "set output '" + png + "'\n";
}

std::string stem(const std::string& csv) {
  const auto dot = csv.rfind('.');
  return dot == std::string::npos ? csv : csv.substr(0, dot);
}

}  // namespace

std::string trace_plot(const std::string& csv, const std::string& title) {
  return preamble(stem(csv) + ".png") + "set title '" + title + "' noenhanced\n" +
         "set xlabel 'probe delay (ps)'\n"
         "set ylabel 'CARS signal |{/Symbol r}_{01}|^2'\n"
         "plot '" + csv + "' using 1:4 with lines lw 1 title 'signal'\n";
}

std::string spectrum_plot(const std::string& csv) {
  return preamble(stem(csv) + ".png") +
         "set xlabel 'Raman shift (cm^{-1})'\n"
         "set ylabel '|A_2|^2'\n"
         "plot '" + csv + "' using 1:4 with lines lw 2 title '|A_2|^2'\n";
}

std::string husimi_plot(const std::string& csv, const std::string& title) {
  // The corner cell of the header row is a label; gnuplot wants a number there.
  return "set datafile separator ','\n"
         "set terminal pngcairo size 800,700 enhanced\n"
         "set output '" + stem(csv) + ".png'\n"
         "set title '" + title + "' noenhanced\n"
         "set xlabel 'time (fs)'\n"
         "set ylabel 'frequency (cm^{-1})'\n"
         "set view map\n"
         "plot \"< sed -e '/^#/d' -e '1s/^[^,]*/0/' " + csv + "\" nonuniform matrix with image notitle\n";
}

std::string fit_plot(const std::string& csv) {
  return preamble(stem(csv) + ".png") +
         "set xlabel 'probe delay (ps)'\n"
         "set ylabel 'signal'\n"
         "plot '" + csv + "' using 1:2 with points pt 7 ps 0.3 title 'data', \\\n"
         "     '' using 1:3 with lines lw 2 title 'model'\n";
}

std::string profile_plot(const std::string& csv, const std::string& parameter) {
  return preamble(stem(csv) + ".png") +
         "set xlabel '" + parameter + "' noenhanced\n"
         "set ylabel 'residual sum of squares'\n"
         "plot '" + csv + "' using 1:2 with linespoints pt 7 title 'profile'\n";
}

}  // namespace rovib::cli
