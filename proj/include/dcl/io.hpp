#pragma once

// Serialization: lattice JSON for spectra, CSV for fields and trajectories.
// Numbers are printed with 17 significant digits so files round-trip and
// are byte-identical across runs.

#include "dcl/evolve.hpp"
#include "dcl/lattice.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace dcl {

using json = nlohmann::ordered_json;

/// {"lambda": ..., "j": ..., "modes": [{"k": ..., "re": ..., "im": ...}, ...]}, nonzero modes only.
json spectrum_to_json(const SpatialSpectrum& spec);

/// Parses the lattice JSON onto `base` (which supplies K, epsilon and dealiasing);
/// lambda and j are taken from the document. Every k must lie on the lattice.
SpatialSpectrum spectrum_from_json(const json& doc, ModelParams base);

void write_field_csv(std::ostream& os, const FieldSamples& f);
void write_trajectory_csv(std::ostream& os, const std::vector<Diagnostics>& d);

/// Shortest representation that round-trips a double.
std::string format_number(double v);

void write_text(const std::string& path, const std::string& contents);
std::string read_text(const std::string& path);

}  // namespace dcl
