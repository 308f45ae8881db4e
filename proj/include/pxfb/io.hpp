// Deterministic file output: CSV field dumps with 17 significant digits,
// stable-key-order JSON, atomic writes (temp file + rename).
#pragma once

#include <filesystem>
#include <string>

#include "pxfb/freeboundary.hpp"
#include "pxfb/verify.hpp"

#include "json.hpp"

namespace pxfb {

using ordered_json = nlohmann::ordered_json;

// Writes content to path atomically; parent directories are created.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_g17(double v);

// Columns x[,y],value in row-major order (x slowest).
std::string field_csv(const ScalarField& f);
ScalarField field_from_csv(const Grid& g, Location loc, const std::string& text);
ScalarField load_field_csv(const Grid& g, Location loc, const std::filesystem::path& path);

// 2D: x,y,nu_x,nu_y,grad_trace,lambda_star. 1D: x,nu,grad_trace,lambda_star.
std::string freeboundary_csv(const FreeBoundary& fb, int dim);

std::string energy_trace_csv(const MinimizerResult& result);

ordered_json report_json(const VerificationReport& rep);

std::string report_summary_text(const VerificationReport& rep);

}  // namespace pxfb
