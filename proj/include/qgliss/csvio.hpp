#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace qgliss {

/// 17-significant-digit scientific notation; the fixed format keeps CSV
/// bodies byte-identical across runs and platforms.
std::string fmt_sci(double v);

class CsvWriter {
public:
  CsvWriter(const std::string& file, const std::vector<std::string>& header);
  void row(std::span<const double> values);
  void close();

private:
  std::ofstream out_;
  std::size_t columns_;
};

void write_json_file(const std::string& file, const nlohmann::json& j);

}  // namespace qgliss
