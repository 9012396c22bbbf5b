#pragma once

#include <filesystem>
#include <string>

#include "pdfw/diagnostics.hpp"

namespace pdfw {

inline constexpr const char* kMetricsHeader = "k,cost,normalized_cost,rmsd,wall_seconds";

/// Header plus one row per iteration; reals printed with 17 significant digits.
std::string format_metrics_csv(const ConvergenceRecord& record);
void emit_metrics_csv(const ConvergenceRecord& record, const std::filesystem::path& path);
ConvergenceRecord read_metrics_csv(const std::filesystem::path& path);

}  // namespace pdfw
