#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "horoflow/config.hpp"
#include "horoflow/errors.hpp"
#include "horoflow/flow.hpp"
#include "horoflow/io.hpp"

using namespace horoflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path dir =
      fs::temp_directory_path() / ("horoflow_" + std::string(info->name()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& key) {
  for (const auto& p : problems) {
    if (p.find(key) != std::string::npos) return true;
  }
  return false;
}

const char* kMinimal = R"(
[params]
n = 2
m = 1
beta = 1
kappa = -1

[initial]
shape = sphere
r0 = 1
)";

}  // namespace

TEST(Config, MinimalConfigIsAccepted) {
  const RunConfig c = parse_config_text(kMinimal);
  EXPECT_EQ(c.params.n, 2);
  EXPECT_EQ(c.params.m, 1);
  EXPECT_EQ(c.params.beta, 1.0);
  EXPECT_EQ(c.params.ac.kappa(), -1.0);
  EXPECT_EQ(c.initial.kind, InitialShape::Kind::sphere);
  EXPECT_EQ(c.mode, GridMode::axisymmetric);
  EXPECT_EQ(c.n_theta, 256);
  EXPECT_EQ(c.control.scheme, Scheme::heun);
  EXPECT_FALSE(c.renormalize_volume);
}

TEST(Config, DottedKeysAndCommentsAreEquivalent) {
  const RunConfig c = parse_config_text(R"(
; comment
# another
params.n = 3
params.m = 2
params.beta = 1
params.kappa = -0.5
grid.n_theta = 128
initial.shape = perturbed_sphere
initial.r0 = 1.0
initial.amplitude = 0.05
control.scheme = rk4
run.renormalize_volume = true
run.t_end = 2.5
)");
  EXPECT_EQ(c.params.n, 3);
  EXPECT_EQ(c.params.ac.kappa(), -0.5);
  EXPECT_EQ(c.n_theta, 128);
  EXPECT_EQ(c.initial.kind, InitialShape::Kind::perturbed_sphere);
  EXPECT_EQ(c.initial.mode_l, 2);
  EXPECT_EQ(c.control.scheme, Scheme::rk4);
  EXPECT_TRUE(c.renormalize_volume);
  EXPECT_EQ(c.settings(0.01).t_end, 2.5);
  EXPECT_EQ(c.settings(0.01).c_star, 0.01);
}

TEST(Config, RejectsSubcriticalHomogeneity) {
  const auto p = problems_of(std::string(kMinimal) + "");
  EXPECT_TRUE(p.empty());
  const auto q = problems_of(R"(
params.n = 2
params.m = 2
params.beta = 0.4
)");
  EXPECT_TRUE(mentions(q, "params.beta"));
}

TEST(Config, RejectsTranslationMode) {
  const auto p = problems_of(R"(
initial.shape = perturbed_sphere
initial.mode_l = 1
initial.amplitude = 0.05
)");
  EXPECT_TRUE(mentions(p, "initial.mode_l"));
}

TEST(Config, RejectsNonNegativeCurvature) {
  EXPECT_TRUE(mentions(problems_of("params.kappa = 0\n"), "params.kappa"));
  EXPECT_TRUE(mentions(problems_of("params.kappa = 1\n"), "params.kappa"));
}

TEST(Config, ListsEveryProblem) {
  const auto p = problems_of(R"(
params.n = 2
params.m = 3
grid.n_theta = 8
initial.shape = perturbed_sphere
initial.amplitude = 0.5
control.scheme = euler
run.t_end = -1
run.colour = blue
[extra]
x = 1
)");
  for (const char* key : {"params.m", "grid.n_theta", "initial.amplitude", "control.scheme",
                          "run.t_end", "run.colour", "[extra]"}) {
    EXPECT_TRUE(mentions(p, key)) << key;
  }
  EXPECT_GE(p.size(), 7u);
}

TEST(Config, RejectsBadValuesAndMissingFile) {
  EXPECT_TRUE(mentions(problems_of("params.n = two\n"), "params.n"));
  EXPECT_TRUE(mentions(problems_of("run.renormalize_volume = maybe\n"), "run.renormalize_volume"));
  EXPECT_TRUE(mentions(problems_of("grid.mode = full2d\nparams.n = 3\nparams.m = 1\n"), "full2d"));
  EXPECT_THROW(parse_config("/nonexistent/horoflow.ini"), ConfigError);
}

TEST(Io, SnapshotRoundTrip) {
  for (const GraphState& s :
       {make_perturbed_sphere(GridSpec::axisymmetric(3, 32), 1.0, 2, 0.1),
        make_perturbed_sphere(GridSpec::full2d(16, 32), 0.7, 3, 0.05)}) {
    GraphState src = s;
    src.t = 0.1 + 0.2;
    std::stringstream buf;
    write_snapshot(buf, src);
    const GraphState back = read_snapshot(buf);
    EXPECT_EQ(back.t, src.t);
    EXPECT_EQ(back.grid->mode(), src.grid->mode());
    EXPECT_EQ(back.grid->n(), src.grid->n());
    EXPECT_EQ(back.grid->node_count(), src.grid->node_count());
    EXPECT_EQ(back.r, src.r);
  }
  std::stringstream bad("# not a snapshot\n0,1\n");
  EXPECT_THROW(read_snapshot(bad), DomainError);
}

TEST(Io, DiagnosticsRoundTrip) {
  DiagnosticsRecord a;
  a.t = 0.05;
  a.V = 1.0 / 3.0;
  a.Fbar = 1.2;
  a.Fmin = 1.1;
  a.Fmax = 1.3;
  a.Qtilde_min = 0.2499;
  a.f_max = 1e-4;
  a.Htilde_min = 0.6;
  a.lambda_tilde_min = 0.3;
  a.Phi_min = 1.1;
  a.Z_max = 2.0 / 3.0;
  a.h_convex = true;
  a.dt = 1e-4;
  DiagnosticsRecord b = a;
  b.Z_max.reset();
  b.lambda_tilde_min = -0.1;
  std::stringstream buf;
  buf << kDiagnosticsHeader << '\n' << diagnostics_row(a) << '\n' << diagnostics_row(b) << '\n';
  const auto recs = read_diagnostics(buf);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].V, a.V);
  EXPECT_EQ(recs[0].Z_max, a.Z_max);
  EXPECT_TRUE(recs[0].h_convex);
  EXPECT_FALSE(recs[1].Z_max.has_value());
  EXPECT_FALSE(recs[1].h_convex);
  EXPECT_EQ(recs[1].dt, 1e-4);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Integration, ResumeFromSnapshotReproducesContinuation) {
  const fs::path dir = scratch_dir();
  const RunConfig cfg = parse_config_text(R"(
params.n = 2
params.m = 2
params.beta = 1
grid.n_theta = 64
initial.shape = perturbed_sphere
initial.amplitude = 0.05
run.t_end = 0.2
run.record_interval = 0.05
run.snapshot_interval = 0.1
)");
  const RunSettings st = cfg.settings(0.0);
  std::vector<GraphState> snaps;
  RunHooks hooks;
  hooks.on_snapshot = [&](const GraphState& s) { snaps.push_back(s); };
  const RunOutcome full = run(cfg.initial_state(), st, hooks);
  ASSERT_GE(snaps.size(), 2u);
  ASSERT_EQ(snaps[1].t, 0.1);
  write_snapshot((dir / "mid.csv").string(), snaps[1]);

  std::ofstream(dir / "resume.ini") << R"(
params.n = 2
params.m = 2
params.beta = 1
grid.n_theta = 64
initial.shape = custom
initial.snapshot = mid.csv
run.t_end = 0.2
run.record_interval = 0.05
run.snapshot_interval = 0.1
)";
  const RunConfig resumed_cfg = parse_config((dir / "resume.ini").string());
  const GraphState mid = resumed_cfg.initial_state();
  EXPECT_EQ(mid.t, 0.1);
  const RunOutcome part = run(mid, resumed_cfg.settings(0.0));
  ASSERT_EQ(part.final_state.t, full.final_state.t);
  double diff = 0.0;
  for (std::size_t i = 0; i < mid.r.size(); ++i) {
    diff = std::max(diff, std::abs(part.final_state.r[i] - full.final_state.r[i]));
  }
  EXPECT_LE(diff, 1e-12);

  std::ofstream(dir / "mismatch.ini") << "grid.n_theta = 128\ninitial.shape = custom\n"
                                         "initial.snapshot = mid.csv\n";
  EXPECT_THROW(parse_config((dir / "mismatch.ini").string()).initial_state(), ConfigError);
}

TEST(Integration, IdenticalRunsWriteIdenticalDiagnostics) {
  const fs::path dir = scratch_dir();
  const RunConfig cfg = parse_config_text(R"(
params.n = 3
params.m = 2
params.beta = 1
grid.n_theta = 48
initial.shape = perturbed_sphere
initial.amplitude = 0.05
run.t_end = 0.1
run.record_interval = 0.01
)");
  for (const char* name : {"a.csv", "b.csv"}) {
    DiagnosticsWriter w((dir / name).string());
    RunHooks hooks;
    hooks.on_record = [&](const DiagnosticsRecord& r) { w.append(r); };
    run(cfg.initial_state(), cfg.settings(0.0), hooks);
  }
  const std::string a = slurp(dir / "a.csv");
  EXPECT_GT(a.size(), 500u);
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  EXPECT_EQ(read_diagnostics((dir / "a.csv").string()).size(), 11u);
}
