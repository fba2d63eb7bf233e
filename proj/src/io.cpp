#include "levywalk/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace levywalk {

void Manifest::add(const std::string& key, const std::string& value) {
  if (key.find('\n') != std::string::npos || value.find('\n') != std::string::npos)
    throw domain_error("manifest entries must be single-line");
  entries.emplace_back(key, value);
}

void Manifest::add(const std::string& key, double value) { add(key, format_double(value)); }

const std::string* Manifest::find(const std::string& key) const {
  for (const auto& kv : entries)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw domain_error("not a number: '" + text + "'");
  return v;
}

std::string process_name(ProcessKind k) {
  return k == ProcessKind::wait_first ? "wait-first" : "jump-first";
}

std::string method_name(Method m) {
  switch (m) {
    case Method::automatic: return "automatic";
    case Method::quadrature: return "quadrature";
    case Method::closed_half: return "closed-half";
    case Method::meijer: return "meijer";
  }
  return "automatic";
}

ProcessKind parse_process(const std::string& name) {
  if (name == "wait-first") return ProcessKind::wait_first;
  if (name == "jump-first") return ProcessKind::jump_first;
  throw domain_error("unknown process '" + name + "' (wait-first or jump-first)");
}

Method parse_method(const std::string& name) {
  if (name == "automatic") return Method::automatic;
  if (name == "quadrature") return Method::quadrature;
  if (name == "closed-half") return Method::closed_half;
  if (name == "meijer") return Method::meijer;
  throw domain_error("unknown method '" + name +
                     "' (automatic, quadrature, closed-half, meijer)");
}

namespace {

const char* const kReservedCurveKeys[] = {"process", "alpha", "p", "t", "method"};
const char* const kReservedHistKeys[] = {"total_samples", "clipped_fraction"};

template <std::size_t N>
bool is_reserved(const std::string& key, const char* const (&list)[N]) {
  for (const char* k : list)
    if (key == k) return true;
  return false;
}

void write_manifest_line(std::ostream& os, const std::string& key, const std::string& value) {
  os << "# " << key << "=" << value << "\n";
}

// Reads the leading '# key=value' block; leaves the stream at the header row.
// Returns the header line.
std::string read_manifest_block(std::istream& is, Manifest* manifest_out) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (manifest_out) {
        std::string body = line.substr(1);
        if (!body.empty() && body.front() == ' ') body.erase(body.begin());
        const std::size_t eq = body.find('=');
        if (eq != std::string::npos)
          manifest_out->entries.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      }
      continue;
    }
    return line;
  }
  throw domain_error("file ends before the CSV header");
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_density_csv(std::ostream& os, const DensityCurve& curve, const Manifest& manifest) {
  write_manifest_line(os, "process", process_name(curve.process));
  write_manifest_line(os, "alpha", format_double(curve.alpha));
  write_manifest_line(os, "p", format_double(curve.p));
  write_manifest_line(os, "t", format_double(curve.t));
  write_manifest_line(os, "method", method_name(curve.method));
  for (const auto& kv : manifest.entries)
    if (!is_reserved(kv.first, kReservedCurveKeys)) write_manifest_line(os, kv.first, kv.second);
  os << "x,pdf,err\n";
  for (std::size_t i = 0; i < curve.abscissas.size(); ++i) {
    os << format_double(curve.abscissas[i]) << "," << format_double(curve.values[i]) << ","
       << format_double(curve.error_estimates[i]) << "\n";
  }
}

DensityCurve read_density_csv(std::istream& is, Manifest* manifest_out) {
  Manifest local;
  const std::string header = read_manifest_block(is, &local);
  if (header != "x,pdf,err") throw domain_error("expected header 'x,pdf,err', got '" + header + "'");

  DensityCurve curve;
  if (const std::string* v = local.find("process")) curve.process = parse_process(*v);
  if (const std::string* v = local.find("alpha")) curve.alpha = parse_double(*v);
  if (const std::string* v = local.find("p")) curve.p = parse_double(*v);
  if (const std::string* v = local.find("t")) curve.t = parse_double(*v);
  if (const std::string* v = local.find("method")) curve.method = parse_method(*v);

  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != 3) throw domain_error("density row needs 3 cells: '" + line + "'");
    curve.abscissas.push_back(parse_double(cells[0]));
    curve.values.push_back(parse_double(cells[1]));
    curve.error_estimates.push_back(parse_double(cells[2]));
    const double v = curve.values.back();
    curve.divergent.push_back(std::fabs(v) <= 1e12 ? 0 : 1);
  }
  if (manifest_out) *manifest_out = std::move(local);
  return curve;
}

void write_histogram_csv(std::ostream& os, const EmpiricalDensity& hist,
                         const Manifest& manifest) {
  write_manifest_line(os, "total_samples", std::to_string(hist.total_samples));
  write_manifest_line(os, "clipped_fraction", format_double(hist.clipped_fraction));
  for (const auto& kv : manifest.entries)
    if (!is_reserved(kv.first, kReservedHistKeys)) write_manifest_line(os, kv.first, kv.second);
  os << "bin_lo,bin_hi,pdf\n";
  for (std::size_t i = 0; i < hist.masses.size(); ++i) {
    os << format_double(hist.bin_edges[i]) << "," << format_double(hist.bin_edges[i + 1]) << ","
       << format_double(hist.masses[i]) << "\n";
  }
}

EmpiricalDensity read_histogram_csv(std::istream& is, Manifest* manifest_out) {
  Manifest local;
  const std::string header = read_manifest_block(is, &local);
  if (header != "bin_lo,bin_hi,pdf")
    throw domain_error("expected header 'bin_lo,bin_hi,pdf', got '" + header + "'");

  EmpiricalDensity hist;
  if (const std::string* v = local.find("total_samples")) hist.total_samples = std::atol(v->c_str());
  if (const std::string* v = local.find("clipped_fraction"))
    hist.clipped_fraction = parse_double(*v);

  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != 3) throw domain_error("histogram row needs 3 cells: '" + line + "'");
    const double lo = parse_double(cells[0]);
    const double hi = parse_double(cells[1]);
    if (hist.bin_edges.empty()) {
      hist.bin_edges.push_back(lo);
    } else if (hist.bin_edges.back() != lo) {
      throw domain_error("histogram bins are not contiguous");
    }
    hist.bin_edges.push_back(hi);
    hist.masses.push_back(parse_double(cells[2]));
  }
  if (hist.masses.empty()) throw domain_error("histogram has no bins");
  if (manifest_out) *manifest_out = std::move(local);
  return hist;
}

void write_endpoints_csv(std::ostream& os, const std::vector<double>& endpoints,
                         const Manifest& manifest) {
  for (const auto& kv : manifest.entries) write_manifest_line(os, kv.first, kv.second);
  os << "endpoint\n";
  for (double v : endpoints) os << format_double(v) << "\n";
}

}  // namespace levywalk
