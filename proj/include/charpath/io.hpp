#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "charpath/moments.hpp"
#include "charpath/paths.hpp"
#include "charpath/randomseries.hpp"
#include "charpath/stats.hpp"

namespace charpath {

/// `t,re,im` with 17 significant digits per value.
void write_path_csv(std::ostream& out, std::span<const double> t, std::span<const cplx> values);

/// One polyline through (re, -im) so the picture has the usual orientation.
void write_path_svg(std::ostream& out, std::span<const cplx> values);

/// `tau,prob,stderr`.
void write_tail_csv(std::ostream& out, const TailCurve& curve);

/// `s,t,moment4`.
void write_increment_csv(std::ostream& out, const IncrementReport& report);

std::string increment_json(const IncrementReport& report);

/// {q?, k, t, n, m, parity, method, re, im, error_estimate, truncation}.
std::string moment_json(const MomentSpec& spec, const MomentResult& result);

/// {seed, streams, parity, truncation, grid, mixer-id} for an ensemble.
std::string ensemble_manifest(const SeriesSpec& spec, std::uint64_t seed, std::size_t count);

std::string format_real(double x);

/// Write through a temporary file and rename into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string to_string(Parity parity);

}  // namespace charpath
