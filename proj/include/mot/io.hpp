#pragma once

#include <string>

#include "mot/report.hpp"

namespace mot {

// %.17g: round-trips every double exactly.
std::string fmt_double(double v);

// Tensor file formats, row-major last-axis-fastest:
//  * inline JSON  {"sizes": [...], "data": [...]}  (entry count <= 1e5)
//  * manifest     {"m": int, "sizes": [...], "dtype": "f64le",
//                  "data_file": path}  + flat little-endian float64 binary
// save_tensor picks inline vs manifest by size; load_tensor accepts both.
void save_tensor(const DenseTensor& t, const std::string& path);
DenseTensor load_tensor(const std::string& path);

// Instance file: {"cost": <inline tensor or {"file": path}>,
//                 "marginals": [[...], ...]}; validated on load.
void save_instance(const MotInstance& inst, const std::string& path);
MotInstance load_instance(const std::string& path);

// SolveReport as JSON (summary + embedded trace).
std::string report_json(const SolveReport& rep);

// FNV-1a 64-bit over a file's bytes, hex-encoded; for run manifests.
std::string file_hash(const std::string& path);

}  // namespace mot
