#include "bgkmix/diagnostics_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "bgkmix/errors.hpp"

namespace bgkmix {

namespace {

const char* kAxes[3] = {"x", "y", "z"};

void put(std::string& line, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  if (!line.empty()) line += ',';
  line += buf;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

} // namespace

std::string diagnostics_header(int d) {
  std::string h = "t,n1,n2";
  for (const char* prefix : {"u1_", "u2_"})
    for (int a = 0; a < d; ++a) h += std::string(",") + prefix + kAxes[a];
  h += ",T1,T2";
  for (int a = 0; a < d; ++a) h += std::string(",p_total_") + kAxes[a];
  h += ",E_total,entropy,min_f1,min_f2,clipped_mass";
  return h;
}

void write_diagnostics(std::ostream& out, const std::vector<DiagnosticsRow>& rows, int d) {
  out << diagnostics_header(d) << '\n';
  for (const auto& r : rows) {
    std::string line;
    put(line, r.t);
    put(line, r.s1.n);
    put(line, r.s2.n);
    for (int a = 0; a < d; ++a) put(line, r.s1.u[a]);
    for (int a = 0; a < d; ++a) put(line, r.s2.u[a]);
    put(line, r.s1.T);
    put(line, r.s2.T);
    for (int a = 0; a < d; ++a) put(line, r.p_total[a]);
    put(line, r.E_total);
    put(line, r.entropy);
    put(line, r.min_f1);
    put(line, r.min_f2);
    put(line, r.clipped_mass);
    out << line << '\n';
  }
}

void emit_diagnostics(const std::vector<DiagnosticsRow>& rows, int d, const std::string& path) {
  std::ofstream out = open_for_write(path);
  write_diagnostics(out, rows, d);
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

std::vector<DiagnosticsRow> read_diagnostics(std::istream& in, int d) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("diagnostics: missing header");
  if (line != diagnostics_header(d)) throw IoError("diagnostics: unexpected header '" + line + "'");
  std::vector<DiagnosticsRow> rows;
  const std::size_t width = 3 + 2 * d + 2 + d + 5;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() != width) throw IoError("diagnostics: row has wrong number of columns");
    DiagnosticsRow r;
    std::size_t i = 0;
    r.t = v[i++];
    r.s1.n = v[i++];
    r.s2.n = v[i++];
    for (int a = 0; a < d; ++a) r.s1.u[a] = v[i++];
    for (int a = 0; a < d; ++a) r.s2.u[a] = v[i++];
    r.s1.T = v[i++];
    r.s2.T = v[i++];
    for (int a = 0; a < d; ++a) r.p_total[a] = v[i++];
    r.E_total = v[i++];
    r.entropy = v[i++];
    r.min_f1 = v[i++];
    r.min_f2 = v[i++];
    r.clipped_mass = v[i++];
    r.s1.mass = r.s1.n;
    r.s2.mass = r.s2.n;
    rows.push_back(r);
  }
  return rows;
}

std::vector<DiagnosticsRow> macro_rows(const std::vector<MacroSample>& samples) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<DiagnosticsRow> rows;
  for (const auto& s : samples) {
    const MacroState& m = s.state;
    DiagnosticsRow r;
    r.t = s.t;
    r.s1.n = r.s1.mass = m.n1;
    r.s2.n = r.s2.mass = m.n2;
    r.s1.u = m.u1;
    r.s2.u = m.u2;
    r.s1.T = m.T1();
    r.s2.T = m.T2();
    r.s1.momentum = (m.m1 * m.n1) * m.u1;
    r.s2.momentum = (m.m2 * m.n2) * m.u2;
    r.s1.energy = m.m1 * m.n1 * m.E1;
    r.s2.energy = m.m2 * m.n2 * m.E2;
    r.p_total = r.s1.momentum + r.s2.momentum;
    r.E_total = r.s1.energy + r.s2.energy;
    r.entropy = r.min_f1 = r.min_f2 = nan;
    r.clipped_mass = 0.0;
    rows.push_back(r);
  }
  return rows;
}

void write_estimates(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "sample,check,lhs,rhs,constant,pass,margin\n";
  for (const auto& row : rows) {
    for (const auto& c : row.report.checks) {
      std::string line = std::to_string(row.sample) + "," + c.name;
      put(line, c.lhs);
      put(line, c.rhs);
      put(line, c.constant);
      line += c.pass ? ",1" : ",0";
      put(line, c.margin);
      out << line << '\n';
    }
  }
}

void emit_estimates(const std::vector<ReportRow>& rows, const std::string& path) {
  std::ofstream out = open_for_write(path);
  write_estimates(out, rows);
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

} // namespace bgkmix
