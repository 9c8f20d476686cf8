#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pairflow/checkpoint.hpp"
#include "pairflow/config.hpp"
#include "pairflow/errors.hpp"
#include "pairflow/hash.hpp"
#include "pairflow/manifest.hpp"
#include "pairflow/structure.hpp"

using namespace pairflow;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pairflow_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("config parse -> serialize -> parse is the identity") {
  const std::string text = R"(
# sample run
[simulation]
nu = 0.02
lambda = 0.25
dt = 0.005
t_final = 12.5
resolution = 64
seed = 987654321
burn_in = auto
observe_interval = 0.1
snapshot_interval = 0.5
nonlinear = true
initial_u = 1,0,0.125,0; 2,1,-0.5,0.25

[noise]
kind = finite_band
modes = 4
q = 0.001

[statistics]
p_orders = 2,4
batch_count = 24

[sweep]
lambdas = 0.4,0.2,0.1
lambda0 = 0
replicas = 2
shared_noise = true
)";
  const RunConfig cfg = parse_config_text(text);
  CHECK(cfg.simulation.nu == 0.02);
  CHECK(cfg.simulation.lambda == 0.25);
  CHECK(cfg.simulation.burn_in_auto);
  CHECK(cfg.simulation.initial_u.size() == 2);
  CHECK(cfg.simulation.initial_u[1].a == Complex(-0.5, 0.25));
  CHECK(cfg.statistics.p_orders == std::vector<int>{2, 4});
  CHECK(cfg.sweep.lambdas == std::vector<double>{0.4, 0.2, 0.1});

  const std::string canonical = serialize_config(cfg);
  const RunConfig reparsed = parse_config_text(canonical);
  CHECK(serialize_config(reparsed) == canonical);
}

TEST_CASE("config errors are collected exhaustively") {
  const std::string text = R"(
[simulation]
nu = -1
dt = bogus
resolution = 17
mystery_key = 3

[noise]
kind = power_law
amplitude = 1.0
exponent = 3.0

[nonsense]
a = b
)";
  try {
    parse_config_text(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(e.issues().size() >= 5);
    CHECK(what.find("nu must be > 0") != std::string::npos);
    CHECK(what.find("dt") != std::string::npos);
    CHECK(what.find("resolution") != std::string::npos);
    CHECK(what.find("mystery_key") != std::string::npos);
    CHECK(what.find("unknown section [nonsense]") != std::string::npos);
    // the power-law exponent message names the admissible range
    CHECK(what.find("1 < a < 2") != std::string::npos);
  }
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  TempDir tmp;
  SimulationConfig cfg;
  cfg.resolution = 16;
  cfg.nu = 0.07;
  cfg.lambda = -0.375;
  cfg.seed = 0xDEADBEEFCAFEull;
  const Lattice lat(cfg.resolution);
  PairState state(lat);
  state.u = gaussian_random_field(
      lat, [](double g) { return std::pow(g, -1.1); }, 5, 0, false);
  state.w = gaussian_random_field(
      lat, [](double g) { return std::pow(g, -0.9); }, 5, 1, false);
  state.t = 3.25;

  const Checkpoint out = make_checkpoint(cfg, state, 1234567, 89, 0xABCDEF);
  const std::string path = (tmp.path / "state.pfck").string();
  write_checkpoint(path, out);
  const Checkpoint in = read_checkpoint(path);

  CHECK(in.resolution == cfg.resolution);
  CHECK(in.nu == cfg.nu);
  CHECK(in.lambda == cfg.lambda);
  CHECK(in.seed == cfg.seed);
  CHECK(in.t == state.t);
  CHECK(in.stream_pos_u == 1234567);
  CHECK(in.stream_pos_w == 89);
  CHECK(in.noise_hash == 0xABCDEF);
  CHECK(in.u == out.u);
  CHECK(in.w == out.w);

  const PairState restored = restore_state(in, lat);
  CHECK(restored.u == state.u);
  CHECK(restored.w == state.w);
  CHECK(restored.t == state.t);

  // byte-identical rewrite
  const std::string path2 = (tmp.path / "state2.pfck").string();
  write_checkpoint(path2, in);
  CHECK(fnv1a_file(path) == fnv1a_file(path2));

  const Lattice other(32);
  CHECK_THROWS_AS(restore_state(in, other), ConfigError);
}

TEST_CASE("checkpoint reader rejects damaged files") {
  TempDir tmp;
  const std::string path = (tmp.path / "bad.pfck").string();
  {
    std::ofstream out(path, std::ios::binary);
    out << "not a checkpoint at all";
  }
  CHECK_THROWS_AS(read_checkpoint(path), ConfigError);
  CHECK_THROWS_AS(read_checkpoint((tmp.path / "missing.pfck").string()),
                  ConfigError);
}

TEST_CASE("manifest round-trips and records artifact checksums") {
  TempDir tmp;
  const std::string artifact = (tmp.path / "data.csv").string();
  {
    std::ofstream out(artifact);
    out << "# schema: a,b\n1,2\n";
  }
  RunManifest m;
  m.created = utc_timestamp();
  m.seed = 42;
  m.build = build_identity();
  m.threads = 3;
  m.config_text = "[simulation]\nnu = 0.1\n";
  m.artifacts.push_back({"data.csv", fnv1a_file(artifact)});

  const std::string path = (tmp.path / "manifest.json").string();
  write_manifest(path, m);
  const RunManifest back = read_manifest(path);
  CHECK(back.seed == m.seed);
  CHECK(back.threads == m.threads);
  CHECK(back.config_text == m.config_text);
  REQUIRE(back.artifacts.size() == 1);
  CHECK(back.artifacts[0].checksum == m.artifacts[0].checksum);
}
