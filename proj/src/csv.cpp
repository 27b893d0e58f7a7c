#include <charconv>
#include <ostream>

#include "weaktime/commands.hpp"

namespace weaktime {

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const TimeSeries& series) {
  for (std::size_t i = 0; i < series.header.size(); ++i) {
    if (i) out << ',';
    out << series.header[i];
  }
  out << '\n';
  for (const auto& row : series.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i]) out << format_real(*row[i]);
    }
    out << '\n';
  }
  if (!out) throw IOError("failed to write CSV output");
}

}  // namespace weaktime
