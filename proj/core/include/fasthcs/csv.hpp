#pragma once

#include "fasthcs/diagnostics.hpp"
#include "fasthcs/simharness.hpp"

#include <filesystem>
#include <string>

namespace fasthcs::io {

enum class HeaderMode : std::uint8_t { Auto, Present, Absent };

struct CsvMatrix {
  Matrix values;
  std::vector<std::string> header;  // empty when the file had none
};

/// Comma-separated numeric matrix, '.' decimal point, LF or CRLF line ends.
/// Errors name the 1-based line and column.
CsvMatrix parse_csv_matrix(const std::string& text, HeaderMode header = HeaderMode::Auto);
CsvMatrix read_csv_matrix(const std::filesystem::path& path,
                          HeaderMode header = HeaderMode::Auto);

/// Text that parses back to exactly `v` (17 significant digits,
/// "inf" / "-inf" for infinities).
std::string format_double(double v);

std::string matrix_to_csv(const Matrix& values);

/// index,od,sd,scaled_od,scaled_sd,flag
std::string report_to_csv(const DiagnosticReport& report);
DiagnosticReport report_from_csv(const std::string& text);

/// index,label with label clean|outlier.
std::string labels_to_csv(const std::vector<RowLabel>& labels);
std::vector<RowLabel> labels_from_csv(const std::string& text);

std::string summary_to_csv(const std::vector<sim::SummaryRow>& rows);
std::string records_to_csv(const std::vector<sim::BiasRecord>& records);

std::string read_text(const std::filesystem::path& path);

/// Writes `content` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace fasthcs::io
