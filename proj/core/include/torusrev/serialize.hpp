#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torusrev/harness.hpp"
#include "torusrev/limits.hpp"
#include "torusrev/phasespace.hpp"
#include "torusrev/state.hpp"

namespace torusrev {

// All emitters print floats with 17 significant digits (round-trip exact),
// '.' decimal point, LF line endings. CSV bodies get '#' comment headers
// carrying the artifact version and a config fingerprint.

std::string format_double(double x);  // %.17g, C locale

// FNV-1a 64 over the raw bytes; fingerprints configs in output headers.
std::uint64_t fnv1a64(std::string_view bytes);

// "# artifact-version: ..." / "# config-hash: ..." comment block
std::string metadata_header(std::uint64_t config_hash);

// { "d", "hbar", "window": [[lo,hi]...], "coeffs": [[re,im]...] lexicographic }
std::string state_to_json(const FourierState& state);
FourierState state_from_json(const std::string& text);

// atoms keyed by the comma-joined m-tuple, each with its offset box and
// [re,im] coefficient list
std::string wigner_to_json(const WignerField& field);

// header q1..qd,p1..pd,H; row-major lexicographic (q outer, p inner)
std::string husimi_to_csv(const HusimiGrid& grid, std::uint64_t config_hash);

// header n,hbar,alpha,t,empirical,theoretical,abs_error,flags
std::string convergence_to_csv(const std::vector<ConvergenceRow>& rows,
                               std::uint64_t config_hash);

// header t,overlap_sq
std::string scan_to_csv(const std::vector<ScanPoint>& points,
                        std::uint64_t config_hash);

// variant tag, p0, q0, width B, copy centers, copy weight
std::string measure_to_json(const LimitMeasure& measure);

// q1..qd,density rows over the inclusive-origin uniform grid
std::string density_to_csv(const std::vector<std::vector<double>>& points,
                           const std::vector<double>& values,
                           std::uint64_t config_hash);

// temp-file + rename in the destination directory; never leaves partial files
void write_atomic(const std::string& path, const std::string& content);

} // namespace torusrev
