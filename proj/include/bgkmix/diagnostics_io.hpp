#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "estimates.hpp"
#include "macroscopic.hpp"
#include "solver.hpp"

namespace bgkmix {

/// t,n1,n2,u1_x..,u2_x..,T1,T2,p_total_x..,E_total,entropy,min_f1,min_f2,clipped_mass
/// (vector columns have d components). Values printed with 17 significant digits.
std::string diagnostics_header(int d);
void write_diagnostics(std::ostream& out, const std::vector<DiagnosticsRow>& rows, int d);
/// Throws IoError naming the path on failure.
void emit_diagnostics(const std::vector<DiagnosticsRow>& rows, int d, const std::string& path);
/// Inverse of write_diagnostics (the global mass/momentum/energy fields are rebuilt with unit domain length).
std::vector<DiagnosticsRow> read_diagnostics(std::istream& in, int d);

/// Macroscopic trajectory in the diagnostics schema; kinetic-only columns are NaN.
std::vector<DiagnosticsRow> macro_rows(const std::vector<MacroSample>& samples);

struct ReportRow {
  int sample = 0;
  EstimateReport report;
};
/// sample,check,lhs,rhs,constant,pass,margin
void write_estimates(std::ostream& out, const std::vector<ReportRow>& rows);
void emit_estimates(const std::vector<ReportRow>& rows, const std::string& path);

} // namespace bgkmix
