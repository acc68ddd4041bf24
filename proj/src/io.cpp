#include "dcl/io.hpp"

#include "dcl/error.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dcl {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericalError("number formatting failed");
  return {buf, ptr};
}

json spectrum_to_json(const SpatialSpectrum& spec) {
  const auto& p = spec.params();
  json modes = json::array();
  for (int n = -p.modes; n <= p.modes; ++n) {
    const cplx a = spec[n];
    if (a == cplx{}) continue;
    modes.push_back({{"k", p.frequency(n)}, {"re", a.real()}, {"im", a.imag()}});
  }
  return {{"lambda", p.lambda}, {"j", p.j}, {"modes", modes}};
}

SpatialSpectrum spectrum_from_json(const json& doc, ModelParams base) {
  require(doc.is_object() && doc.contains("modes") && doc["modes"].is_array(),
          "spectrum JSON needs an object with a 'modes' array");
  if (doc.contains("lambda")) base.lambda = doc["lambda"].get<double>();
  if (doc.contains("j")) base.j = doc["j"].get<int>();
  base.validate();
  SpatialSpectrum out(base);
  for (const auto& m : doc["modes"]) {
    require(m.contains("k") && m.contains("re") && m.contains("im"), "each mode needs k, re, im");
    const double k = m["k"].get<double>();
    const double idx = k * base.lambda;
    const double n = std::round(idx);
    require(std::abs(idx - n) <= 1e-9 * std::max(1.0, std::abs(idx)),
            "mode k = " + format_number(k) + " is not on the lattice Z/lambda");
    require(n != 0.0, "the zero mode is not part of a spectrum; pass the mean separately");
    require(std::abs(n) <= base.modes, "mode k = " + format_number(k) + " exceeds the truncation K");
    out.at(static_cast<int>(n)) += cplx(m["re"].get<double>(), m["im"].get<double>());
  }
  return out;
}

void write_field_csv(std::ostream& os, const FieldSamples& f) {
  os << "x,re,im\n";
  for (std::size_t i = 0; i < f.values.size(); ++i)
    os << format_number(f.x[i]) << ',' << format_number(f.values[i].real()) << ','
       << format_number(f.values[i].imag()) << '\n';
}

void write_trajectory_csv(std::ostream& os, const std::vector<Diagnostics>& d) {
  os << "t,energy,mean,l2,hs,max_mode\n";
  for (const auto& r : d)
    os << format_number(r.t) << ',' << format_number(r.energy) << ',' << format_number(r.mean) << ','
       << format_number(r.l2) << ',' << format_number(r.hs) << ',' << format_number(r.max_mode) << '\n';
}

void write_text(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  os << contents;
  if (!os) throw ValidationError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace dcl
