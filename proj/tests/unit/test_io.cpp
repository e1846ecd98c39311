#include "riskband/error.hpp"
#include "riskband/io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <functional>
#include <limits>
#include <random>

using namespace riskband;
using testing::scratch_dir;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected riskband::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_number round trips") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen);
    CHECK(io::parse_number(io::format_number(x)) == x);
  }
  for (double x : {0.0, 1.0, 0.1, 1e-300, std::numeric_limits<double>::denorm_min()})
    CHECK(io::parse_number(io::format_number(x)) == x);
  CHECK(io::parse_number(" 0.25 ") == 0.25);
  CHECK(code_of([] { io::parse_number("abc"); }) == ErrorCode::Parse);
  CHECK(code_of([] { io::parse_number("1.5x"); }) == ErrorCode::Parse);
}

TEST_CASE("loss matrix round trip") {
  const auto dir = scratch_dir("io_loss");
  const LossMatrix original = testing::step_losses(37, 11, 3);
  io::write_loss_matrix_csv(dir / "l.csv", original);
  const LossMatrix back = io::read_loss_matrix_csv(dir / "l.csv");
  CHECK(back.grid() == original.grid());
  CHECK(back.values() == original.values());
  CHECK(back.orientation() == Orientation::NonDecreasing);

  const LossMatrix forced = io::read_loss_matrix_csv(dir / "l.csv", Orientation::Unconstrained);
  CHECK(forced.orientation() == Orientation::Unconstrained);
}

TEST_CASE("loss matrix orientation detection") {
  const auto dir = scratch_dir("io_orient");
  write_text(dir / "down.csv", "0,0.5,1\n1,0.5,0\n0.7,0.7,0.2\n");
  CHECK(io::read_loss_matrix_csv(dir / "down.csv").orientation() == Orientation::NonIncreasing);
  write_text(dir / "free.csv", "0,0.5,1\n0.1,0.5,0.2\n");
  CHECK(io::read_loss_matrix_csv(dir / "free.csv").orientation() == Orientation::Unconstrained);
}

TEST_CASE("loss matrix errors") {
  const auto dir = scratch_dir("io_errors");
  CHECK(code_of([&] { io::read_loss_matrix_csv(dir / "missing.csv"); }) == ErrorCode::Io);
  write_text(dir / "ragged.csv", "0,1\n0.1,0.2\n0.3\n");
  CHECK(code_of([&] { io::read_loss_matrix_csv(dir / "ragged.csv"); }) == ErrorCode::Parse);
  write_text(dir / "text.csv", "0,1\n0.1,oops\n");
  CHECK(code_of([&] { io::read_loss_matrix_csv(dir / "text.csv"); }) == ErrorCode::Parse);
  write_text(dir / "range.csv", "0,1\n0.1,1.5\n");
  CHECK(code_of([&] { io::read_loss_matrix_csv(dir / "range.csv"); }) != ErrorCode::Io);
  write_text(dir / "empty.csv", "");
  CHECK(code_of([&] { io::read_loss_matrix_csv(dir / "empty.csv"); }) == ErrorCode::Parse);
}

TEST_CASE("parse errors name the line") {
  const auto dir = scratch_dir("io_line");
  write_text(dir / "bad.csv", "0,1\n0.1,0.2\n0.1,zz\n");
  try {
    io::read_loss_matrix_csv(dir / "bad.csv");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
}

TEST_CASE("panel with and without header") {
  const std::filesystem::path data = RISKBAND_TEST_DATA;
  const BinaryScorePanel panel =
      io::read_panel_csv(data / "panel_scores.csv", data / "panel_labels.csv");
  CHECK(panel.samples() == 10);
  CHECK(panel.classes() == 3);
  CHECK(panel.scores()(0, 0) == 0.90);
  CHECK(panel.labels()(9, 2) == 1.0);

  const auto dir = scratch_dir("io_panel");
  write_text(dir / "s.csv", "0.1,0.2\n");
  write_text(dir / "l.csv", "1,0\n0,1\n");
  CHECK(code_of([&] { io::read_panel_csv(dir / "s.csv", dir / "l.csv"); }) != ErrorCode::Io);
}

TEST_CASE("band round trip through csv and sidecar") {
  const auto dir = scratch_dir("io_band");
  const ParameterGrid grid = ParameterGrid::linspace(0.0, 1.0, 5);
  Vector upper(5);
  upper << 0.1, 0.2, 0.3, 0.4, 1.0 / 3.0;
  ConfidenceBand band(grid, std::nullopt, upper, IndexSet({1, 2, 4}, SetProvenance::Sublevel),
                      0.1, BandMethod::RiskResampling, 0.05);
  band.metadata().sample_size = 40;
  band.metadata().replicates = 200;
  band.metadata().seed = SeedRecord{17};
  band.metadata().warnings.push_back("note");

  io::write_band_csv(dir / "b.csv", band);
  io::write_json(dir / "b.json", io::band_json(band));
  const ConfidenceBand back = io::read_band(dir / "b.csv", dir / "b.json");
  CHECK(back.grid() == grid);
  CHECK(!back.lower().has_value());
  CHECK(*back.upper() == upper);
  CHECK(back.validity() == band.validity());
  CHECK(back.delta() == 0.1);
  CHECK(back.method() == BandMethod::RiskResampling);

  const auto j = io::read_json(dir / "b.json");
  CHECK(j.at("n") == 40);
  CHECK(j.at("B") == 200);
  CHECK(j.at("seed").at("master") == 17);
  CHECK(j.at("width") == 0.05);
  CHECK(j.at("has_lower") == false);
  CHECK(j.at("validity_provenance") == "sublevel");
  CHECK(j.at("warnings").size() == 1);
}

TEST_CASE("json errors") {
  const auto dir = scratch_dir("io_json");
  CHECK(code_of([&] { io::read_json(dir / "nope.json"); }) == ErrorCode::Io);
  write_text(dir / "bad.json", "{ not json");
  CHECK(code_of([&] { io::read_json(dir / "bad.json"); }) == ErrorCode::Parse);
}

TEST_CASE("metrics csv header") {
  const auto dir = scratch_dir("io_metrics");
  io::write_metrics_csv(dir / "m.csv", {});
  std::ifstream in(dir / "m.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "metric,method,n,estimate,runs,standard_error,excluded");
}

}  // TEST_SUITE
