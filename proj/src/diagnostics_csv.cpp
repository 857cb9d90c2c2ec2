#include "chstab/diagnostics_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace chstab {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_row(const DiagnosticsRecord& r) {
  std::string s = std::to_string(r.step);
  for (double v : {r.t, r.k_n, r.mass, r.energy, r.h1, r.h2, r.h3, r.omega_h1, r.hm1, r.du_l2, r.du_hm1}) {
    s += ',';
    s += format_double(v);
  }
  s += ',' + std::to_string(r.solver_iters) + ',' + format_double(r.residual);
  return s;
}

void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records) {
  out << csv_header << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CsvError("cannot open " + path.string() + " for writing");
  write_csv(out, records);
  if (!out) throw CsvError("write failed for " + path.string());
}

namespace {

template <class T>
T parse_field(const std::string& text, long line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw CsvError("line " + std::to_string(line) + ": cannot parse '" + text + "'");
  return v;
}

}  // namespace

std::vector<DiagnosticsRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty CSV: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header) throw CsvError("unexpected CSV header: " + line);
  std::vector<DiagnosticsRecord> out;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 14) throw CsvError("line " + std::to_string(lineno) + ": expected 14 columns");
    DiagnosticsRecord r;
    r.step = parse_field<long>(cells[0], lineno);
    double* dst[] = {&r.t, &r.k_n, &r.mass, &r.energy, &r.h1, &r.h2, &r.h3, &r.omega_h1, &r.hm1, &r.du_l2, &r.du_hm1};
    for (std::size_t i = 0; i < 11; ++i) *dst[i] = parse_field<double>(cells[i + 1], lineno);
    r.solver_iters = parse_field<int>(cells[12], lineno);
    r.residual = parse_field<double>(cells[13], lineno);
    out.push_back(r);
  }
  return out;
}

std::vector<DiagnosticsRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());
  return read_csv(in);
}

}  // namespace chstab
