#pragma once

#include "riskband/bootstrap.hpp"
#include "riskband/bounds.hpp"
#include "riskband/empirical.hpp"
#include "riskband/evalharness.hpp"
#include "riskband/loss_model.hpp"
#include "riskband/rrr.hpp"
#include "riskband/selection.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace riskband::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

/// Parses one decimal floating point field (locale independent).
double parse_number(std::string_view field);

/// Loss matrix CSV: a header row of grid values, then one row per sample.
/// With no orientation given, the strictest orientation the rows satisfy is used.
LossMatrix read_loss_matrix_csv(const fs::path& path,
                                std::optional<Orientation> orientation = std::nullopt);
void write_loss_matrix_csv(const fs::path& path, const LossMatrix& matrix);

/// Paired score/label CSVs with K columns each. A first row that is not
/// numeric is treated as a header and skipped.
BinaryScorePanel read_panel_csv(const fs::path& scores, const fs::path& labels);

/// Curve CSV with columns t,value.
void write_curve_csv(const fs::path& path, const RiskCurve& curve);
json curve_json(const RiskCurve& curve);

/// Band CSV with columns t,lower,upper,in_validity; absent sides are empty fields.
void write_band_csv(const fs::path& path, const ConfidenceBand& band);
json band_json(const ConfidenceBand& band);
/// Reads a band back from its CSV and JSON sidecar.
ConfidenceBand read_band(const fs::path& csv, const fs::path& sidecar);

json rrr_json(const RrrResult& result);
json selection_json(const SelectionResult& result, const ParameterGrid& grid);
json seed_json(const SeedRecord& seed);

/// One sorted supremum statistic per line under the header `sup`.
void write_sup_distribution_csv(const fs::path& path, const BootstrapSupDistribution& dist);

void write_metrics_csv(const fs::path& path, const std::vector<MetricsReport>& reports);
json metrics_json(const MetricsReport& report);

json read_json(const fs::path& path);
void write_json(const fs::path& path, const json& value);

}  // namespace riskband::io
