#pragma once

#include "chstab/diagnostics.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace chstab {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* csv_header =
    "step,t,k_n,mass,energy,h1,h2,h3,omega_h1,hm1,du_l2,du_hm1,solver_iters,residual";

/// %.17g formatting, independent of locale.
std::string format_double(double v);

std::string csv_row(const DiagnosticsRecord& r);
void write_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);

/// Parses a file written by write_csv. Throws CsvError on a header mismatch
/// or a malformed row.
std::vector<DiagnosticsRecord> read_csv(std::istream& in);
std::vector<DiagnosticsRecord> read_csv(const std::filesystem::path& path);

}  // namespace chstab
