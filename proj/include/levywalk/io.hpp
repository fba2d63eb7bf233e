#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "levywalk/montecarlo.hpp"
#include "levywalk/wait_first.hpp"

namespace levywalk {

// Ordered key=value metadata, serialized as '# key=value' comment lines ahead
// of the CSV header. Values must not contain newlines.
struct Manifest {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  const std::string* find(const std::string& key) const;
};

// Shortest round-trip decimal form (printf %.17g, with inf/nan spelled out).
std::string format_double(double v);
double parse_double(const std::string& text);

std::string process_name(ProcessKind k);
std::string method_name(Method m);
ProcessKind parse_process(const std::string& name);
Method parse_method(const std::string& name);

// Density curve CSV: manifest lines, then 'x,pdf,err', then one row per
// point. Divergent points serialize as pdf=inf. The writer embeds the curve
// metadata so the reader can rebuild an equivalent DensityCurve.
void write_density_csv(std::ostream& os, const DensityCurve& curve, const Manifest& manifest);
DensityCurve read_density_csv(std::istream& is, Manifest* manifest_out = nullptr);

// Histogram CSV: manifest lines, then 'bin_lo,bin_hi,pdf'.
void write_histogram_csv(std::ostream& os, const EmpiricalDensity& hist, const Manifest& manifest);
EmpiricalDensity read_histogram_csv(std::istream& is, Manifest* manifest_out = nullptr);

// Raw endpoint list: manifest lines, then 'endpoint', one value per row.
void write_endpoints_csv(std::ostream& os, const std::vector<double>& endpoints,
                         const Manifest& manifest);

}  // namespace levywalk
