#include "fasthcs/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace fasthcs::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // Trailing blank lines are not data.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

bool parse_number(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string location(std::size_t line, std::size_t col) {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

CsvMatrix parse_csv_matrix(const std::string& text, HeaderMode header) {
  std::string_view body = text;
  if (body.size() >= 3 && body.substr(0, 3) == "\xEF\xBB\xBF") body.remove_prefix(3);
  const auto lines = split_lines(body);
  if (lines.empty()) throw InputError("CSV input is empty");

  CsvMatrix out;
  std::size_t first = 0;
  const auto head = split_fields(lines[0]);
  bool has_header = header == HeaderMode::Present;
  if (header == HeaderMode::Auto) {
    double dummy;
    for (auto f : head) {
      if (!parse_number(f, dummy)) {
        has_header = true;
        break;
      }
    }
  }
  if (has_header) {
    for (auto f : head) out.header.emplace_back(f);
    first = 1;
  }
  if (first >= lines.size()) throw InputError("CSV input has a header but no data rows");

  const std::size_t cols = split_fields(lines[first]).size();
  if (has_header && out.header.size() != cols) {
    throw InputError("header has " + std::to_string(out.header.size()) +
                     " fields but line " + std::to_string(first + 1) + " has " +
                     std::to_string(cols));
  }
  out.values.resize(static_cast<Index>(lines.size() - first), static_cast<Index>(cols));
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != cols) {
      throw InputError("ragged CSV: line " + std::to_string(r + 1) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double v;
      if (!parse_number(fields[c], v)) {
        throw InputError("non-numeric value '" + std::string(fields[c]) + "' at " +
                         location(r + 1, c + 1));
      }
      if (!std::isfinite(v)) {
        throw InputError("non-finite value at " + location(r + 1, c + 1));
      }
      out.values(static_cast<Index>(r - first), static_cast<Index>(c)) = v;
    }
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvMatrix read_csv_matrix(const std::filesystem::path& path, HeaderMode header) {
  return parse_csv_matrix(read_text(path), header);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string matrix_to_csv(const Matrix& values) {
  std::string out;
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      if (j) out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string report_to_csv(const DiagnosticReport& report) {
  std::string out = "index,od,sd,scaled_od,scaled_sd,flag\n";
  for (Index i = 0; i < report.od.size(); ++i) {
    out += std::to_string(i);
    for (double v : {report.od(i), report.sd(i), report.scaled_od(i), report.scaled_sd(i)}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += to_string(report.flags[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  return out;
}

DiagnosticReport report_from_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw InputError("report CSV is empty");
  const auto n = static_cast<Index>(lines.size() - 1);
  DiagnosticReport rep;
  rep.od.resize(n);
  rep.sd.resize(n);
  rep.scaled_od.resize(n);
  rep.scaled_sd.resize(n);
  rep.flags.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto fields = split_fields(lines[static_cast<std::size_t>(i + 1)]);
    if (fields.size() != 6) throw InputError("report line " + std::to_string(i + 2) + " is malformed");
    double v[4];
    for (int k = 0; k < 4; ++k) {
      if (!parse_number(fields[static_cast<std::size_t>(k + 1)], v[k])) {
        throw InputError("bad number at " + location(static_cast<std::size_t>(i + 2),
                                                     static_cast<std::size_t>(k + 2)));
      }
    }
    rep.od(i) = v[0];
    rep.sd(i) = v[1];
    rep.scaled_od(i) = v[2];
    rep.scaled_sd(i) = v[3];
    rep.flags[static_cast<std::size_t>(i)] = outlier_flag_from_string(fields[5]);
  }
  return rep;
}

std::string labels_to_csv(const std::vector<RowLabel>& labels) {
  std::string out = "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i);
    out += labels[i] == RowLabel::Outlier ? ",outlier\n" : ",clean\n";
  }
  return out;
}

std::vector<RowLabel> labels_from_csv(const std::string& text) {
  const auto lines = split_lines(text);
  std::vector<RowLabel> out;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != 2) throw InputError("labels line " + std::to_string(r + 1) + " is malformed");
    if (fields[1] == "outlier") {
      out.push_back(RowLabel::Outlier);
    } else if (fields[1] == "clean") {
      out.push_back(RowLabel::Clean);
    } else {
      throw InputError("unknown label '" + std::string(fields[1]) + "' on line " +
                       std::to_string(r + 1));
    }
  }
  return out;
}

namespace {
std::string cell_prefix(const sim::ContaminationSpec& c) {
  return std::to_string(c.n) + ',' + std::to_string(c.p) + ',' + std::to_string(c.q) + ',' +
         format_double(c.epsilon) + ',' + format_double(c.nu) + ',' +
         std::string(sim::to_string(c.config));
}
}  // namespace

std::string summary_to_csv(const std::vector<sim::SummaryRow>& rows) {
  std::string out = "n,p,q,epsilon,nu,config,method,statistic,median,p75,failures,replicates\n";
  for (const auto& r : rows) {
    out += cell_prefix(r.cell);
    out += ',';
    out += sim::to_string(r.method);
    out += ',' + r.statistic + ',' + format_double(r.median) + ',' + format_double(r.p75) +
           ',' + std::to_string(r.failures) + ',' + std::to_string(r.replicates) + '\n';
  }
  return out;
}

std::string records_to_csv(const std::vector<sim::BiasRecord>& records) {
  std::string out =
      "n,p,q,epsilon,nu,config,method,replicate,seed,bias,maxsub,sumsub,chose_pp,failed\n";
  for (const auto& r : records) {
    out += cell_prefix(r.spec);
    out += ',';
    out += sim::to_string(r.method);
    out += ',' + std::to_string(r.replicate) + ',' + std::to_string(r.spec.seed) + ',' +
           format_double(r.bias_vq) + ',' + format_double(r.maxsub) + ',' +
           format_double(r.sumsub) + ',' + (r.chose_pp ? "1" : "0") + ',' +
           (r.failed ? "1" : "0") + '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fasthcs::io
