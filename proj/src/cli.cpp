#include "riskband/cli.hpp"

#include "riskband/bootstrap.hpp"
#include "riskband/bounds.hpp"
#include "riskband/compose.hpp"
#include "riskband/empirical.hpp"
#include "riskband/error.hpp"
#include "riskband/evalharness.hpp"
#include "riskband/io.hpp"
#include "riskband/loss_model.hpp"
#include "riskband/rrr.hpp"
#include "riskband/selection.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace riskband::cli {

namespace {

using io::json;

constexpr std::uint64_t kComponentTag = 0x636f6d70;

ExecPolicy policy_of(const RunConfig& c) {
  ExecPolicy policy;
  if (c.threads > 0) policy.threads = c.threads;
  return policy;
}

SeedRecord seed_of(std::uint64_t master) {
  SeedRecord record;
  record.master = master;
  return record;
}

double delta_glob_of(const RunConfig& c) { return c.delta_glob.value_or(c.delta / 10.0); }
double delta_loc_of(const RunConfig& c) { return c.delta_loc.value_or(c.delta - delta_glob_of(c)); }

LossMatrix prepare(LossMatrix matrix, const RunConfig& c) {
  if (c.monotonize == "running-min") {
    matrix = monotonize(matrix, Extremum::RunningMin);
  } else if (c.monotonize == "running-max") {
    matrix = monotonize(matrix, Extremum::RunningMax);
  } else if (c.monotonize != "none") {
    fail(ErrorCode::InvalidArgument, "unknown monotonize mode '" + c.monotonize + "'");
  }
  if (c.batch < 1) fail(ErrorCode::Domain, "batch size must be at least 1");
  if (c.batch > 1) matrix = batch(matrix, c.batch).matrix;
  return matrix;
}

/// Losses from a CSV path, or from the score panel with the named loss kind.
LossMatrix load_losses(const RunConfig& c, const std::string& path, const std::string& kind) {
  std::optional<Orientation> orientation;
  if (c.orientation != "auto") orientation = parse_orientation(c.orientation);
  if (!path.empty()) return prepare(io::read_loss_matrix_csv(path, orientation), c);
  if (c.scores.empty() || c.labels.empty())
    fail(ErrorCode::InvalidArgument, "no input: give --input or both --scores and --labels");
  if (c.grid_size < 2) fail(ErrorCode::Domain, "grid size must be at least 2");
  const BinaryScorePanel panel = io::read_panel_csv(c.scores, c.labels);
  LossMatrix matrix =
      threshold_losses(panel, ParameterGrid::linspace(0.0, 1.0, c.grid_size), parse_loss_kind(kind));
  if (orientation) matrix = matrix.with_orientation(*orientation);
  return prepare(std::move(matrix), c);
}

std::optional<LossMatrix> load_tradeoff(const RunConfig& c) {
  if (!c.tradeoff_input.empty()) return load_losses(c, c.tradeoff_input, c.tradeoff_loss);
  if (!c.scores.empty() && c.input.empty()) return load_losses(c, "", c.tradeoff_loss);
  return std::nullopt;
}

json data_parameters(const RunConfig& c) {
  json p = {{"orientation", c.orientation}, {"monotonize", c.monotonize}, {"batch", c.batch}};
  if (!c.input.empty()) p["input"] = c.input;
  if (!c.scores.empty()) {
    p["scores"] = c.scores;
    p["labels"] = c.labels;
    p["loss"] = c.loss;
    p["grid_size"] = c.grid_size;
  }
  return p;
}

json method_parameters(const RunConfig& c) {
  return {{"method", c.method},
          {"delta", c.delta},
          {"delta_glob", delta_glob_of(c)},
          {"delta_loc", delta_loc_of(c)},
          {"r", c.r},
          {"B", c.replicates},
          {"seed", c.seed},
          {"side", c.side},
          {"population", c.population}};
}

void write_band_outputs(const RunConfig& c, const ConfidenceBand& band, json sidecar,
                        std::ostream& out) {
  if (c.output.empty()) fail(ErrorCode::InvalidArgument, "--output prefix is required");
  const std::string csv = c.output + ".csv";
  const std::string meta = c.output + ".json";
  io::write_band_csv(csv, band);
  io::write_json(meta, sidecar);
  out << "method=" << to_string(band.method()) << " n=" << band.metadata().sample_size
      << " delta=" << io::format_number(band.delta());
  if (band.half_width()) out << " width=" << io::format_number(*band.half_width());
  out << " validity=" << band.validity().size() << "/" << band.grid().size() << "\n"
      << "wrote " << csv << " " << meta << "\n";
  for (const std::string& w : band.metadata().warnings) out << "warning: " << w << "\n";
}

struct BandOutcome {
  ConfidenceBand band;
  json sidecar;
};

BandOutcome compute_band(const RunConfig& c, const LossMatrix& matrix) {
  const BandMethod method = parse_band_method(c.method);
  const Side side = parse_side(c.side);
  const ExecPolicy policy = policy_of(c);
  switch (method) {
    case BandMethod::Nasm: {
      ConfidenceBand band = nasm_band(empirical_risk(matrix), c.delta, side);
      json sidecar = io::band_json(band);
      return {std::move(band), std::move(sidecar)};
    }
    case BandMethod::RiskResampling: {
      ConfidenceBand band = rr_band(matrix, c.delta, c.replicates, seed_of(c.seed), side, policy);
      json sidecar = io::band_json(band);
      return {std::move(band), std::move(sidecar)};
    }
    case BandMethod::RestrictedRiskResampling: {
      if (side != Side::Upper) fail(ErrorCode::InvalidArgument, "rrr produces upper bands only");
      RrrConfig config;
      config.r = c.r;
      config.delta_glob = delta_glob_of(c);
      config.delta_loc = delta_loc_of(c);
      config.replicates = c.replicates;
      config.seed = seed_of(c.seed);
      RrrResult result = c.population ? rrr_band_population(matrix, config, policy)
                                      : rrr_band(matrix, config, policy);
      json sidecar = io::rrr_json(result);
      return {std::move(result.band), std::move(sidecar)};
    }
    case BandMethod::Pointwise: {
      if (side != Side::Upper)
        fail(ErrorCode::InvalidArgument, "pointwise produces upper bands only");
      ConfidenceBand band = wsr_band(matrix, c.delta, policy);
      json sidecar = io::band_json(band);
      return {std::move(band), std::move(sidecar)};
    }
    case BandMethod::Composed:
      break;
  }
  fail(ErrorCode::InvalidArgument, "method '" + c.method + "' is not available for band");
}

Sign sign_for(Side side) {
  switch (side) {
    case Side::Upper: return Sign::Minus;
    case Side::Lower: return Sign::Plus;
    case Side::TwoSided: return Sign::TwoSided;
  }
  return Sign::Minus;
}

int cmd_band(const RunConfig& c, std::ostream& out) {
  const LossMatrix matrix = load_losses(c, c.input, c.loss);
  BandOutcome result = compute_band(c, matrix);
  result.sidecar["parameters"] = {{"command", "band"},
                                  {"data", data_parameters(c)},
                                  {"method", method_parameters(c)}};
  if (!c.dump_sup.empty()) {
    if (parse_band_method(c.method) != BandMethod::RiskResampling)
      fail(ErrorCode::InvalidArgument, "--dump-sup applies to the rr method");
    const auto dist = sup_distribution(matrix, IndexSet::full(matrix.points()),
                                       sign_for(parse_side(c.side)), c.replicates,
                                       seed_of(c.seed), policy_of(c));
    io::write_sup_distribution_csv(c.dump_sup, dist);
    result.sidecar["parameters"]["dump_sup"] = c.dump_sup;
  }
  write_band_outputs(c, result.band, std::move(result.sidecar), out);
  return kOk;
}

int cmd_select(const RunConfig& c, std::ostream& out) {
  const LossMatrix matrix = load_losses(c, c.input, c.loss);
  const std::optional<LossMatrix> tradeoff = load_tradeoff(c);
  if (!tradeoff)
    fail(ErrorCode::InvalidArgument, "select needs --tradeoff-input or a score panel");
  if (!(tradeoff->grid() == matrix.grid()))
    fail(ErrorCode::InvalidArgument, "tradeoff losses use a different grid");

  const RiskCurve risk = empirical_risk(matrix);
  const IndexSet constraint =
      c.constraint_r ? sublevel_set(risk, *c.constraint_r) : IndexSet::full(risk.size());
  if (constraint.empty()) fail(ErrorCode::Domain, "selection constraint set is empty");
  const SelectionResult chosen =
      select(parse_selection_scheme(c.scheme), risk, empirical_risk(*tradeoff), constraint);

  BandOutcome result = compute_band(c, matrix);
  json selection = io::selection_json(chosen, matrix.grid());
  selection["empirical_risk"] = risk[chosen.index];
  selection["in_validity"] = result.band.validity().contains(chosen.index);
  if (result.band.upper() && result.band.validity().contains(chosen.index))
    selection["upper"] = (*result.band.upper())[chosen.index];
  result.sidecar["selection"] = selection;
  json data = data_parameters(c);
  if (!c.tradeoff_input.empty()) data["tradeoff_input"] = c.tradeoff_input;
  else data["tradeoff_loss"] = c.tradeoff_loss;
  result.sidecar["parameters"] = {
      {"command", "select"},
      {"data", data},
      {"method", method_parameters(c)},
      {"scheme", c.scheme},
      {"constraint_r", c.constraint_r ? json(*c.constraint_r) : json(nullptr)}};
  out << "selected index=" << chosen.index << " t=" << io::format_number(matrix.grid()[chosen.index])
      << " scheme=" << to_string(chosen.scheme) << "\n";
  write_band_outputs(c, result.band, std::move(result.sidecar), out);
  return kOk;
}

int cmd_suggest(const RunConfig& c, std::ostream& out) {
  const LossMatrix matrix = load_losses(c, c.input, c.loss);
  SuggestOptions options;
  options.dkw_alpha = c.dkw_alpha;
  options.relative_tolerance = c.relative_tolerance;
  options.cap = c.replicate_cap;
  options.sign = sign_for(parse_side(c.side));
  const ReplicateSuggestion s =
      suggest_B(matrix, c.delta, seed_of(c.seed), c.initial_replicates, options, policy_of(c));
  const json report = {
      {"B", s.replicates},
      {"q_boot", s.q_boot},
      {"bracket_low", s.bracket_low},
      {"bracket_high", std::isfinite(s.bracket_high) ? json(s.bracket_high) : json(nullptr)},
      {"bracket_width", std::isfinite(s.bracket_width) ? json(s.bracket_width) : json(nullptr)},
      {"criterion_met", s.criterion_met},
      {"degenerate", s.degenerate},
      {"cap_reached", s.cap_reached},
      {"seed", io::seed_json(seed_of(c.seed))},
      {"parameters",
       {{"command", "suggest-b"},
        {"data", data_parameters(c)},
        {"delta", c.delta},
        {"side", c.side},
        {"initial_B", c.initial_replicates},
        {"dkw_alpha", c.dkw_alpha},
        {"relative_tolerance", c.relative_tolerance},
        {"cap", c.replicate_cap},
        {"seed", c.seed}}}};
  if (!c.output.empty()) io::write_json(c.output, report);
  out << "B=" << s.replicates << " q_boot=" << io::format_number(s.q_boot)
      << (s.criterion_met ? "" : s.degenerate ? " (degenerate distribution)" : " (cap reached)")
      << "\n";
  if (c.output.empty()) out << report.dump(2) << "\n";
  return kOk;
}

// ---- experiments ----

struct Experiment {
  std::vector<MethodConfig> methods;
  std::vector<Index> n;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  EvalOptions options;
};

MethodConfig method_from(const RunConfig& c, const std::string& name) {
  MethodConfig m;
  m.method = parse_band_method(name);
  m.delta = c.delta;
  m.replicates = c.replicates;
  m.r = c.r;
  m.delta_glob = delta_glob_of(c);
  m.delta_loc = delta_loc_of(c);
  m.population = c.population;
  return m;
}

MethodConfig method_from(const RunConfig& c, const json& entry) {
  if (entry.is_string()) return method_from(c, entry.get<std::string>());
  MethodConfig m = method_from(c, entry.at("method").get<std::string>());
  m.delta = entry.value("delta", m.delta);
  m.replicates = entry.value("B", m.replicates);
  m.r = entry.value("r", m.r);
  m.population = entry.value("population", m.population);
  const double glob = entry.value("delta_glob", m.delta / 10.0);
  m.delta_glob = glob;
  m.delta_loc = entry.value("delta_loc", m.delta - glob);
  return m;
}

json method_json(const MethodConfig& m) {
  json j = {{"method", m.label()}, {"delta", m.delta}};
  if (m.method == BandMethod::RiskResampling || m.method == BandMethod::RestrictedRiskResampling)
    j["B"] = m.replicates;
  if (m.method == BandMethod::RestrictedRiskResampling) {
    j["r"] = m.r;
    j["delta_glob"] = *m.delta_glob;
    j["delta_loc"] = *m.delta_loc;
    j["population"] = m.population;
  }
  return j;
}

/// Flags first, then any fields present in the --config descriptor.
Experiment experiment_from(const RunConfig& c, const json& descriptor) {
  Experiment e;
  for (const std::string& name : c.methods) e.methods.push_back(method_from(c, name));
  for (long n : c.n) e.n.push_back(n);
  e.runs = c.runs;
  e.seed = c.seed;
  e.options.selected_r = c.selected_r;
  e.options.scheme = parse_selection_scheme(c.scheme);
  e.options.constraint_r = c.constraint_r;
  if (descriptor.is_null()) return e;

  if (descriptor.contains("methods")) {
    e.methods.clear();
    for (const json& entry : descriptor["methods"]) e.methods.push_back(method_from(c, entry));
  }
  if (descriptor.contains("n")) {
    e.n.clear();
    const json& n = descriptor["n"];
    if (n.is_array()) {
      for (const json& v : n) e.n.push_back(v.get<Index>());
    } else {
      e.n.push_back(n.get<Index>());
    }
  }
  e.runs = descriptor.value("runs", e.runs);
  e.seed = descriptor.value("seed", e.seed);
  e.options.selected_r = descriptor.value("selected_r", e.options.selected_r);
  if (descriptor.contains("scheme"))
    e.options.scheme = parse_selection_scheme(descriptor["scheme"].get<std::string>());
  if (descriptor.contains("constraint_r")) {
    const json& r = descriptor["constraint_r"];
    e.options.constraint_r = r.is_null() ? std::nullopt : std::optional<double>(r.get<double>());
  }
  return e;
}

GeneratorSpec generator_from(const RunConfig& c, const json& descriptor) {
  GeneratorSpec spec;
  spec.family = parse_generator_family(c.family);
  spec.rho = c.rho;
  spec.batch_size = c.batch_size;
  double lo = c.grid_lo;
  double hi = c.grid_hi;
  Index size = c.sim_grid_size;
  if (descriptor.is_object() && descriptor.contains("generator")) {
    const json& g = descriptor["generator"];
    if (g.contains("family")) spec.family = parse_generator_family(g["family"].get<std::string>());
    spec.rho = g.value("rho", spec.rho);
    spec.batch_size = g.value("batch_size", spec.batch_size);
    spec.constant = g.value("constant", spec.constant);
    if (g.contains("grid")) {
      lo = g["grid"].value("lo", lo);
      hi = g["grid"].value("hi", hi);
      size = g["grid"].value("size", size);
    }
  }
  spec.grid = ParameterGrid::linspace(lo, hi, size);
  spec.check();
  return spec;
}

json generator_json(const GeneratorSpec& spec) {
  json g = {{"family", std::string(to_string(spec.family))},
            {"grid",
             {{"lo", spec.grid[0]}, {"hi", spec.grid[spec.grid.size() - 1]}, {"size", spec.grid.size()}}}};
  if (spec.family == GeneratorFamily::EquicorrelatedGaussianCdf) {
    g["rho"] = spec.rho;
    g["batch_size"] = spec.batch_size;
  }
  if (spec.family == GeneratorFamily::Constant) g["constant"] = spec.constant;
  return g;
}

json experiment_json(const Experiment& e) {
  json methods = json::array();
  for (const MethodConfig& m : e.methods) methods.push_back(method_json(m));
  return {{"methods", methods},
          {"n", e.n},
          {"runs", e.runs},
          {"seed", e.seed},
          {"selected_r", e.options.selected_r},
          {"scheme", std::string(to_string(e.options.scheme))},
          {"constraint_r", e.options.constraint_r ? json(*e.options.constraint_r) : json(nullptr)}};
}

void write_trace(const std::string& prefix, const MethodConfig& m, Index n, const Evaluation& eval) {
  const std::string path = prefix + "_" + m.label() + "_n" + std::to_string(n) + ".csv";
  std::ostringstream text;
  text << "run,miss_anywhere,miss_selected,selected_index,gap,half_width,validity_size\n";
  for (std::size_t r = 0; r < eval.runs.size(); ++r) {
    const RunOutcome& o = eval.runs[r];
    text << r << ',' << o.miss_anywhere << ',' << o.miss_selected << ',';
    if (o.selected_index) text << *o.selected_index;
    text << ',';
    if (o.gap) text << io::format_number(*o.gap);
    text << ',' << io::format_number(o.half_width) << ',' << o.validity_size << '\n';
  }
  std::ofstream file(path);
  if (!file) fail(ErrorCode::Io, "cannot write '" + path + "'");
  file << text.str();
}

int run_experiment(const RunConfig& c, const Scenario& scenario, const Experiment& e,
                   json summary, std::ostream& out) {
  if (e.methods.empty()) fail(ErrorCode::InvalidArgument, "no methods to evaluate");
  if (e.n.empty()) fail(ErrorCode::InvalidArgument, "no sample sizes to evaluate");
  std::vector<MetricsReport> reports;
  for (const MethodConfig& m : e.methods) {
    for (Index n : e.n) {
      const Evaluation eval = evaluate(m, scenario, n, e.runs, e.seed, e.options, policy_of(c));
      for (const MetricsReport* r : {&eval.anywhere, &eval.selected, &eval.conservatism}) {
        reports.push_back(*r);
        out << r->metric << " method=" << m.label() << " n=" << n
            << " estimate=" << io::format_number(r->estimate)
            << " se=" << io::format_number(r->standard_error) << " runs=" << r->runs;
        if (r->excluded > 0) out << " excluded=" << r->excluded;
        out << "\n";
      }
      if (!c.trace.empty()) write_trace(c.trace, m, n, eval);
    }
  }
  if (!c.output.empty()) {
    json rows = json::array();
    for (const MetricsReport& r : reports) rows.push_back(io::metrics_json(r));
    summary["experiment"] = experiment_json(e);
    summary["reports"] = rows;
    io::write_metrics_csv(c.output + ".csv", reports);
    io::write_json(c.output + ".json", summary);
    out << "wrote " << c.output << ".csv " << c.output << ".json\n";
  }
  return kOk;
}

json load_descriptor(const RunConfig& c) {
  if (c.config.empty()) return json();
  json d = io::read_json(c.config);
  if (!d.is_object()) fail(ErrorCode::Parse, c.config + ": descriptor must be a JSON object");
  return d;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const json descriptor = load_descriptor(c);
  try {
    const GeneratorSpec spec = generator_from(c, descriptor);
    const Experiment e = experiment_from(c, descriptor);
    json summary = {{"command", "simulate"}, {"generator", generator_json(spec)}};
    if (!c.config.empty()) summary["config"] = c.config;
    return run_experiment(c, SyntheticScenario(spec), e, std::move(summary), out);
  } catch (const json::exception& ex) {
    fail(ErrorCode::Parse, "experiment descriptor: " + std::string(ex.what()));
  }
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  const json descriptor = load_descriptor(c);
  LossMatrix population = load_losses(c, c.input, c.loss);
  std::optional<LossMatrix> partner = load_tradeoff(c);
  json data = data_parameters(c);
  if (partner) {
    if (!c.tradeoff_input.empty()) data["tradeoff_input"] = c.tradeoff_input;
    else data["tradeoff_loss"] = c.tradeoff_loss;
  }
  try {
    const Experiment e = experiment_from(c, descriptor);
    json summary = {{"command", "eval"}, {"data", data}, {"population", population.samples()}};
    if (!c.config.empty()) summary["config"] = c.config;
    return run_experiment(c, SurrogateScenario(std::move(population), std::move(partner)), e,
                          std::move(summary), out);
  } catch (const json::exception& ex) {
    fail(ErrorCode::Parse, "experiment descriptor: " + std::string(ex.what()));
  }
}

int cmd_combine(const RunConfig& c, std::ostream& out) {
  if (c.inputs.empty()) fail(ErrorCode::InvalidArgument, "combine needs at least one --input");
  const std::size_t k = c.inputs.size();
  const double component_delta = c.delta / static_cast<double>(k);
  const BandMethod method = parse_band_method(c.method);
  if (method != BandMethod::Nasm && method != BandMethod::RiskResampling)
    fail(ErrorCode::InvalidArgument, "combine supports the nasm and rr component methods");

  std::vector<ConfidenceBand> bands;
  Index smallest_n = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const LossMatrix matrix = load_losses(c, c.inputs[i], c.loss);
    smallest_n = i == 0 ? matrix.samples() : std::min(smallest_n, matrix.samples());
    if (method == BandMethod::Nasm) {
      bands.push_back(nasm_band(empirical_risk(matrix), component_delta, Side::TwoSided));
    } else {
      bands.push_back(rr_band(matrix, component_delta, c.replicates,
                              seed_of(derive_seed(c.seed, kComponentTag, i)), Side::TwoSided,
                              policy_of(c)));
    }
  }

  const double floor = c.floor.value_or(1.0 / (2.0 * static_cast<double>(smallest_n)));
  NamedRiskMap psi;
  if (c.psi == "ratio") {
    if (k != 2) fail(ErrorCode::InvalidArgument, "ratio needs exactly two inputs");
    psi = ratio_map(floor);
  } else if (c.psi == "sum") {
    psi = sum_map(k);
  } else if (c.psi == "weighted-sum") {
    if (c.weights.size() != k)
      fail(ErrorCode::InvalidArgument, "weighted-sum needs one weight per input");
    psi = weighted_sum_map(c.weights);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown psi '" + c.psi + "'");
  }

  const ConfidenceBand band =
      combine(ComponentBandSet(std::move(bands)), psi.map, psi.monotonicity, c.scan_resolution);
  json sidecar = io::band_json(band);
  json data = data_parameters(c);
  data.erase("input");
  data["inputs"] = c.inputs;
  json parameters = {{"command", "combine"},
                     {"data", data},
                     {"psi", c.psi},
                     {"component_method", c.method},
                     {"delta", c.delta},
                     {"component_delta", component_delta},
                     {"seed", c.seed},
                     {"scan_resolution", c.scan_resolution}};
  if (method == BandMethod::RiskResampling) parameters["B"] = c.replicates;
  if (c.psi == "ratio") parameters["floor"] = floor;
  if (c.psi == "weighted-sum") parameters["weights"] = c.weights;
  sidecar["parameters"] = parameters;
  write_band_outputs(c, band, std::move(sidecar), out);
  return kOk;
}

// ---- argument parsing ----

void add_data_options(CLI::App& cmd, RunConfig& c) {
  cmd.add_option("--input", c.input, "Loss matrix CSV (header row holds the grid)");
  cmd.add_option("--scores", c.scores, "Score panel CSV");
  cmd.add_option("--labels", c.labels, "Label panel CSV");
  cmd.add_option("--loss", c.loss, "Loss for a panel: FNP, FPP, FDP, SetSize")->capture_default_str();
  cmd.add_option("--grid-size", c.grid_size, "Panel threshold grid size on [0,1]")->capture_default_str();
  cmd.add_option("--orientation", c.orientation,
                 "auto, nonincreasing, nondecreasing or unconstrained")
      ->capture_default_str();
  cmd.add_option("--monotonize", c.monotonize, "none, running-min or running-max")
      ->capture_default_str();
  cmd.add_option("--batch", c.batch, "Average consecutive rows in batches of k")->capture_default_str();
}

void add_method_options(CLI::App& cmd, RunConfig& c) {
  cmd.add_option("--method", c.method, "nasm, rr, rrr or pointwise")->capture_default_str();
  cmd.add_option("--delta", c.delta, "Confidence parameter")->capture_default_str();
  cmd.add_option_function<double>("--delta-glob", [&c](double v) { c.delta_glob = v; },
                                  "RRR global delta (default delta/10)");
  cmd.add_option_function<double>("--delta-loc", [&c](double v) { c.delta_loc = v; },
                                  "RRR local delta (default delta - delta_glob)");
  cmd.add_option("--r", c.r, "RRR risk level")->capture_default_str();
  cmd.add_option("--B", c.replicates, "Bootstrap replicates")->capture_default_str();
  cmd.add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd.add_option("--side", c.side, "upper, lower or two-sided")->capture_default_str();
  cmd.add_flag("--population", c.population, "RRR population-set variant");
}

void add_selection_options(CLI::App& cmd, RunConfig& c) {
  cmd.add_option("--scheme", c.scheme, "even-tradeoff or elbow")->capture_default_str();
  cmd.add_option_function<double>("--constraint-r", [&c](double v) { c.constraint_r = v; },
                                  "Restrict selection to {t : L_n(t) <= r} (default 0.1)");
  cmd.add_flag_callback("--no-constraint", [&c] { c.constraint_r.reset(); },
                        "Select over the whole grid");
  cmd.add_option("--tradeoff-input", c.tradeoff_input, "Loss CSV of the tradeoff risk");
  cmd.add_option("--tradeoff-loss", c.tradeoff_loss, "Tradeoff loss for a panel")
      ->capture_default_str();
}

void add_experiment_options(CLI::App& cmd, RunConfig& c) {
  cmd.add_option("--config", c.config, "Experiment descriptor JSON");
  cmd.add_option("--n", c.n, "Sample sizes")->capture_default_str();
  cmd.add_option("--runs", c.runs, "Monte Carlo runs")->capture_default_str();
  cmd.add_option("--methods", c.methods, "Methods to evaluate")->capture_default_str();
  cmd.add_option("--selected-r", c.selected_r, "Selected set level for miscoverage")
      ->capture_default_str();
  cmd.add_option("--trace", c.trace, "Per-run trace CSV prefix");
}

}  // namespace

int execute(const RunConfig& c, std::ostream& out) {
  if (c.command == "band") return cmd_band(c, out);
  if (c.command == "select") return cmd_select(c, out);
  if (c.command == "suggest-b") return cmd_suggest(c, out);
  if (c.command == "simulate") return cmd_simulate(c, out);
  if (c.command == "eval") return cmd_eval(c, out);
  if (c.command == "combine") return cmd_combine(c, out);
  fail(ErrorCode::InvalidArgument, "unknown command '" + c.command + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Simultaneous confidence bands on monotone risk curves", "riskband"};
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "Worker threads (results do not depend on it)");
  std::string output_help = "Output prefix for <prefix>.csv and <prefix>.json";

  CLI::App* band = app.add_subcommand("band", "Confidence band for one loss matrix");
  add_data_options(*band, c);
  add_method_options(*band, c);
  band->add_option("--output", c.output, output_help);
  band->add_option("--dump-sup", c.dump_sup, "Write the bootstrap supremum sample (rr)");

  CLI::App* sel = app.add_subcommand("select", "Data-dependent threshold selection plus band");
  add_data_options(*sel, c);
  add_method_options(*sel, c);
  add_selection_options(*sel, c);
  sel->add_option("--output", c.output, output_help);

  CLI::App* suggest = app.add_subcommand("suggest-b", "Recommend a bootstrap replicate count");
  add_data_options(*suggest, c);
  suggest->add_option("--delta", c.delta, "Confidence parameter")->capture_default_str();
  suggest->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  suggest->add_option("--side", c.side, "upper, lower or two-sided")->capture_default_str();
  suggest->add_option("--initial-B", c.initial_replicates, "Starting B (>= 100)")
      ->capture_default_str();
  suggest->add_option("--dkw-alpha", c.dkw_alpha, "DKW bracket level")->capture_default_str();
  suggest->add_option("--tolerance", c.relative_tolerance, "Relative bracket width target")
      ->capture_default_str();
  suggest->add_option("--cap", c.replicate_cap, "Largest B tried")->capture_default_str();
  suggest->add_option("--output", c.output, "JSON report path");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo evaluation on synthetic data");
  add_method_options(*sim, c);
  add_experiment_options(*sim, c);
  sim->add_option("--scheme", c.scheme, "Selection scheme for conservatism")->capture_default_str();
  sim->add_option_function<double>("--constraint-r", [&c](double v) { c.constraint_r = v; },
                                   "Selection constraint level (default 0.1)");
  sim->add_option("--family", c.family, "equicorrelated or constant")->capture_default_str();
  sim->add_option("--rho", c.rho, "Equicorrelation")->capture_default_str();
  sim->add_option("--batch-size", c.batch_size, "Coordinates per batch")->capture_default_str();
  sim->add_option("--grid-lo", c.grid_lo)->capture_default_str();
  sim->add_option("--grid-hi", c.grid_hi)->capture_default_str();
  sim->add_option("--grid-size", c.sim_grid_size)->capture_default_str();
  sim->add_option("--output", c.output, output_help);

  CLI::App* ev = app.add_subcommand("eval", "Holdout/sampling surrogate evaluation on real losses");
  add_data_options(*ev, c);
  add_method_options(*ev, c);
  add_experiment_options(*ev, c);
  add_selection_options(*ev, c);
  ev->add_option("--output", c.output, output_help);

  CLI::App* comb = app.add_subcommand("combine", "Band for a combination of component risks");
  add_data_options(*comb, c);
  comb->remove_option(comb->get_option("--input"));
  comb->add_option("--input", c.inputs, "Component loss CSVs")->required();
  comb->add_option("--method", c.method, "Component method: nasm or rr")->capture_default_str();
  comb->add_option("--delta", c.delta, "Total delta, split evenly across components")
      ->capture_default_str();
  comb->add_option("--B", c.replicates, "Bootstrap replicates")->capture_default_str();
  comb->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  comb->add_option("--psi", c.psi, "ratio, sum or weighted-sum")->capture_default_str();
  comb->add_option("--weights", c.weights, "Weights for weighted-sum");
  comb->add_option_function<double>("--floor", [&c](double v) { c.floor = v; },
                                    "Ratio denominator floor (default 1/(2n))");
  comb->add_option("--scan-resolution", c.scan_resolution)->capture_default_str();
  comb->add_option("--output", c.output, output_help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }
  for (CLI::App* sub : app.get_subcommands()) c.command = sub->get_name();

  try {
    return execute(c, out);
  } catch (const Error& e) {
    err << "error " << static_cast<int>(e.code()) << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace riskband::cli
