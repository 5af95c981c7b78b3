#pragma once

#include "scfde/infotheory.hpp"
#include "scfde/montecarlo.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scfde {

using ordered_json = nlohmann::ordered_json;

/// Shortest-exact decimal form of a double ("%.17g" trimmed), locale-free.
std::string format_double(double v);

/// Writes snr_db,p_hat,ci_low,ci_high,trials rows; values round-trip
/// exactly.
void write_curve_csv(const std::filesystem::path& path,
                     std::span<const EstimatePoint> points);

/// Reads a curve CSV back; successes are reconstructed as
/// round(p_hat * trials).
std::vector<EstimatePoint> read_curve_csv(const std::filesystem::path& path);

ordered_json point_json(const EstimatePoint& pt);
ordered_json slope_fit_json(const SlopeFit& fit);
ordered_json diversity_json(const DiversityReport& rep);

/// Per-curve summary: {config, points[], slope_fit, analytic_d, regime}.
/// slope_fit is null when no window was fittable.
ordered_json curve_summary_json(const ordered_json& config,
                                std::span<const EstimatePoint> points,
                                const std::optional<SlopeFit>& fit,
                                const std::optional<DiversityReport>& analytic);

void write_json(const std::filesystem::path& path, const ordered_json& doc);
ordered_json read_json(const std::filesystem::path& path);

} // namespace scfde
