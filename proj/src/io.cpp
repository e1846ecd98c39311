#include "riskband/io.hpp"

#include "riskband/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace riskband::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) return fields;
    start = comma + 1;
  }
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

bool is_numeric_row(std::string_view line) {
  for (std::string_view field : split(line)) {
    double value;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) return false;
  }
  return true;
}

RowMatrix parse_rows(const std::vector<std::string>& lines, std::size_t first,
                     const fs::path& path) {
  if (first >= lines.size()) fail(ErrorCode::Parse, "'" + path.string() + "' has no data rows");
  const std::size_t cols = split(lines[first]).size();
  RowMatrix out(static_cast<Index>(lines.size() - first), static_cast<Index>(cols));
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto fields = split(lines[r]);
    if (fields.size() != cols)
      fail(ErrorCode::Parse, path.string() + ":" + std::to_string(r + 1) + ": expected " +
                                 std::to_string(cols) + " fields, found " +
                                 std::to_string(fields.size()));
    for (std::size_t c = 0; c < cols; ++c) {
      try {
        out(static_cast<Index>(r - first), static_cast<Index>(c)) = parse_number(fields[c]);
      } catch (const Error& e) {
        fail(ErrorCode::Parse, path.string() + ":" + std::to_string(r + 1) + ": " + e.what());
      }
    }
  }
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  if (ec != std::errc()) fail(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buffer, ptr);
}

double parse_number(std::string_view field) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    fail(ErrorCode::Parse, "not a number: '" + std::string(field) + "'");
  return value;
}

LossMatrix read_loss_matrix_csv(const fs::path& path, std::optional<Orientation> orientation) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) fail(ErrorCode::Parse, "'" + path.string() + "' is empty");
  Vector grid_values;
  {
    const auto header = split(lines.front());
    grid_values.resize(static_cast<Index>(header.size()));
    for (std::size_t c = 0; c < header.size(); ++c) {
      try {
        grid_values[static_cast<Index>(c)] = parse_number(header[c]);
      } catch (const Error& e) {
        fail(ErrorCode::Parse, path.string() + ":1: header must hold grid values; " + e.what());
      }
    }
  }
  RowMatrix values = parse_rows(lines, 1, path);
  const Orientation o = orientation.value_or(detect_orientation(values));
  return LossMatrix(ParameterGrid(std::move(grid_values)), std::move(values), o);
}

void write_loss_matrix_csv(const fs::path& path, const LossMatrix& matrix) {
  std::ofstream out = open_out(path);
  for (Index j = 0; j < matrix.points(); ++j)
    out << (j ? "," : "") << format_number(matrix.grid()[j]);
  out << '\n';
  for (Index i = 0; i < matrix.samples(); ++i) {
    for (Index j = 0; j < matrix.points(); ++j)
      out << (j ? "," : "") << format_number(matrix.values()(i, j));
    out << '\n';
  }
}

BinaryScorePanel read_panel_csv(const fs::path& scores, const fs::path& labels) {
  auto load = [](const fs::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) fail(ErrorCode::Parse, "'" + path.string() + "' is empty");
    return parse_rows(lines, is_numeric_row(lines.front()) ? 0 : 1, path);
  };
  return BinaryScorePanel(load(scores), load(labels));
}

void write_curve_csv(const fs::path& path, const RiskCurve& curve) {
  std::ofstream out = open_out(path);
  out << "t,value\n";
  for (Index j = 0; j < curve.size(); ++j)
    out << format_number(curve.grid()[j]) << ',' << format_number(curve[j]) << '\n';
}

json curve_json(const RiskCurve& curve) {
  json records = json::array();
  for (Index j = 0; j < curve.size(); ++j)
    records.push_back({{"t", curve.grid()[j]}, {"value", curve[j]}});
  return {{"sample_size", curve.sample_size()}, {"points", records}};
}

void write_band_csv(const fs::path& path, const ConfidenceBand& band) {
  std::ofstream out = open_out(path);
  out << "t,lower,upper,in_validity\n";
  for (Index j = 0; j < band.grid().size(); ++j) {
    out << format_number(band.grid()[j]) << ',';
    if (band.lower()) out << format_number((*band.lower())[j]);
    out << ',';
    if (band.upper()) out << format_number((*band.upper())[j]);
    out << ',' << (band.validity().contains(j) ? 1 : 0) << '\n';
  }
}

json seed_json(const SeedRecord& seed) {
  return {{"master", seed.master}, {"scheme", seed.scheme}, {"algorithm", seed.algorithm}};
}

json band_json(const ConfidenceBand& band) {
  const BandMetadata& meta = band.metadata();
  json out = {{"method", std::string(to_string(band.method()))},
              {"delta", band.delta()},
              {"n", meta.sample_size},
              {"width", band.half_width() ? json(*band.half_width()) : json(nullptr)},
              {"simultaneous", meta.simultaneous},
              {"has_lower", band.lower().has_value()},
              {"has_upper", band.upper().has_value()},
              {"validity_provenance", std::string(to_string(band.validity().provenance()))},
              {"validity", band.validity().indices()},
              {"warnings", meta.warnings}};
  if (meta.replicates) out["B"] = *meta.replicates;
  if (meta.seed) out["seed"] = seed_json(*meta.seed);
  if (meta.bisection_tolerance) out["bisection_tolerance"] = *meta.bisection_tolerance;
  if (meta.scan_resolution) out["scan_resolution"] = *meta.scan_resolution;
  if (meta.denominator_floor) out["denominator_floor"] = *meta.denominator_floor;
  return out;
}

ConfidenceBand read_band(const fs::path& csv, const fs::path& sidecar) {
  const json meta = read_json(sidecar);
  const std::vector<std::string> lines = read_lines(csv);
  if (lines.size() < 2) fail(ErrorCode::Parse, "'" + csv.string() + "' has no band rows");
  const auto m = static_cast<Index>(lines.size() - 1);
  Vector t(m), lower(m), upper(m);
  bool has_lower = true;
  bool has_upper = true;
  std::vector<Index> validity;
  for (Index j = 0; j < m; ++j) {
    const auto fields = split(lines[static_cast<std::size_t>(j) + 1]);
    if (fields.size() != 4) fail(ErrorCode::Parse, csv.string() + ": band rows need 4 fields");
    t[j] = parse_number(fields[0]);
    if (fields[1].empty()) has_lower = false; else lower[j] = parse_number(fields[1]);
    if (fields[2].empty()) has_upper = false; else upper[j] = parse_number(fields[2]);
    if (parse_number(fields[3]) != 0.0) validity.push_back(j);
  }
  try {
    ConfidenceBand band(ParameterGrid(std::move(t)),
                        has_lower ? std::optional<Vector>(lower) : std::nullopt,
                        has_upper ? std::optional<Vector>(upper) : std::nullopt,
                        IndexSet(std::move(validity), SetProvenance::Custom),
                        meta.at("delta").get<double>(),
                        parse_band_method(meta.at("method").get<std::string>()),
                        meta.contains("width") && !meta["width"].is_null()
                            ? std::optional<double>(meta["width"].get<double>())
                            : std::nullopt);
    band.metadata().sample_size = meta.value("n", Index{0});
    band.metadata().simultaneous = meta.value("simultaneous", true);
    return band;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, sidecar.string() + ": " + e.what());
  }
}

json rrr_json(const RrrResult& result) {
  json out = band_json(result.band);
  out["q_glob"] = result.q_glob;
  out["q_loc"] = result.q_loc;
  out["r"] = result.level;
  out["r_prime"] = result.adjusted_level ? json(*result.adjusted_level) : json(nullptr);
  out["sublevel_set"] = result.sublevel.indices();
  out["adjusted_sublevel_set"] = result.adjusted_sublevel.indices();
  out["empty_validity"] = result.empty_validity;
  return out;
}

json selection_json(const SelectionResult& result, const ParameterGrid& grid) {
  return {{"scheme", std::string(to_string(result.scheme))},
          {"index", result.index},
          {"t", grid[result.index]},
          {"objective", result.objective},
          {"constraint_size", result.constraint.size()},
          {"unsigned_fallback", result.unsigned_fallback}};
}

void write_sup_distribution_csv(const fs::path& path, const BootstrapSupDistribution& dist) {
  std::ofstream out = open_out(path);
  out << "sup\n";
  for (double v : dist.sorted_values()) out << format_number(v) << '\n';
}

void write_metrics_csv(const fs::path& path, const std::vector<MetricsReport>& reports) {
  std::ofstream out = open_out(path);
  out << "metric,method,n,estimate,runs,standard_error,excluded\n";
  for (const MetricsReport& r : reports) {
    std::string method;
    std::string n;
    for (const auto& [key, value] : r.config) {
      if (key == "method") method = value;
      if (key == "n") n = value;
    }
    out << r.metric << ',' << method << ',' << n << ',' << format_number(r.estimate) << ','
        << r.runs << ',' << format_number(r.standard_error) << ',' << r.excluded << '\n';
  }
}

json metrics_json(const MetricsReport& report) {
  json config = json::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  return {{"metric", report.metric},
          {"estimate", report.estimate},
          {"runs", report.runs},
          {"standard_error", report.standard_error},
          {"excluded", report.excluded},
          {"config", config}};
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& value) {
  std::ofstream out = open_out(path);
  out << value.dump(2) << '\n';
}

}  // namespace riskband::io
