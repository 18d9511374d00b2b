#include "qgliss/csvio.hpp"

#include <cstdio>

#include "qgliss/errors.hpp"

namespace qgliss {

std::string fmt_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& file, const std::vector<std::string>& header)
    : out_(file), columns_(header.size()) {
  if (!out_) throw Error("cannot open output file '" + file + "'");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw Error("csv row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << fmt_sci(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

void write_json_file(const std::string& file, const nlohmann::json& j) {
  std::ofstream out(file);
  if (!out) throw Error("cannot open output file '" + file + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qgliss
