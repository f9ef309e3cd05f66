#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hybent/cli.hpp"
#include "hybent/io.hpp"
#include "hybent/states.hpp"

using namespace hybent;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run(const std::string& args) {
  const std::string cmd =
      std::string(HYBENT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/hybent_cli_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("fig2 command produces the boundary grid") {
  TempFile out("fig2.csv");
  cli::RunConfig cfg;
  cfg.out_path = out.path;
  REQUIRE(cli::cmd_fig2(0.0, 2.0, 21, cfg) == cli::kExitOk);

  const std::string body = slurp(out.path);
  CHECK(body.find("# hybent fig2") != std::string::npos);
  CHECK(body.find("# config:") != std::string::npos);
  CHECK(body.find("r,bound_number,") != std::string::npos);

  // Count data rows; the r = 0 row must carry the guarded limit values.
  int rows = 0;
  std::string first_row;
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 'r') {
      if (rows == 0) first_row = line;
      ++rows;
    }
  }
  CHECK(rows == 21);
  CHECK(first_row.substr(0, 6) == "0,1,0.");  // r=0: bound_number = 1
}

TEST_CASE("fig2 output is byte-identical across runs") {
  TempFile a("fig2_a.csv");
  TempFile b("fig2_b.csv");
  cli::RunConfig cfg;
  cfg.out_path = a.path;
  REQUIRE(cli::cmd_fig2(0.0, 1.5, 101, cfg) == cli::kExitOk);
  cfg.out_path = b.path;
  REQUIRE(cli::cmd_fig2(0.0, 1.5, 101, cfg) == cli::kExitOk);
  CHECK(slurp(a.path) == slurp(b.path));
}

TEST_CASE("witness command on state files") {
  TempFile state("mbs.json");
  save_state_file(state.path, state_to_json(mbs_singlet({0.5, 0.0}, 10)));

  TempFile out("witness.json");
  cli::RunConfig cfg;
  cfg.out_path = out.path;

  SUBCASE("explicit reference squeezing") {
    REQUIRE(cli::cmd_witness(state.path, 0.5, cfg) == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j.at("report").at("verdict") == "hybrid-entangled");
    CHECK(j.at("report").at("witness_value").get<double>() ==
          doctest::Approx(-0.3076).epsilon(1e-3));
  }
  SUBCASE("squeezing estimated from the state") {
    REQUIRE(cli::cmd_witness(state.path, std::nullopt, cfg) == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j.at("report").at("r").get<double>() == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(j.at("report").at("verdict") == "hybrid-entangled");
  }
  SUBCASE("ensemble input stays inconclusive") {
    TempFile mix("blind.json");
    save_state_file(mix.path, ensemble_to_json(blind_mixture(
                                  {{1, 0.6}, {2, 0.4}}, 10)));
    REQUIRE(cli::cmd_witness(mix.path, 0.5, cfg) == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j.at("report").at("verdict") == "inconclusive");
  }
  SUBCASE("missing file") {
    CHECK(cli::cmd_witness("/nonexistent/state.json", 0.5, cfg) ==
          cli::kExitBadInput);
  }
  SUBCASE("state without weight in the subspace") {
    TempFile vac("vac.json");
    save_state_file(vac.path,
                    state_to_json(PureState::basis_state(OccupationQuad(0, 0, 0, 0), 6)));
    CHECK(cli::cmd_witness(vac.path, 0.5, cfg) == cli::kExitEmptySubspace);
  }
}

TEST_CASE("oracle command") {
  TempFile out("oracle.json");
  cli::RunConfig cfg;
  cfg.out_path = out.path;
  cfg.restarts = 8;
  cfg.n_max = 8;

  SUBCASE("sector kind") {
    REQUIRE(cli::cmd_oracle("sector", 0.5, 2, 0, cfg) == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j.at("result").at("achieved").get<double>() ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(j.at("sound").get<bool>());
  }
  SUBCASE("chain kind") {
    REQUIRE(cli::cmd_oracle("chain", 0.5, 0, 25, cfg) == cli::kExitOk);
    const auto j = nlohmann::json::parse(slurp(out.path));
    CHECK(j.at("violations").get<int>() == 0);
  }
  SUBCASE("unknown kind") {
    CHECK(cli::cmd_oracle("frobnicate", 0.5, 0, 0, cfg) == cli::kExitBadInput);
  }
}

TEST_CASE("noise sweep command") {
  TempFile out("sweep.csv");
  cli::RunConfig cfg;
  cfg.out_path = out.path;
  cfg.n_max = 8;
  REQUIRE(cli::cmd_noise_sweep("visibility", 0.5, 5, cfg) == cli::kExitOk);
  const std::string body = slurp(out.path);
  CHECK(body.find("critical_visibility:") != std::string::npos);
  CHECK(body.find("noise_value") != std::string::npos);
}

TEST_CASE("binary exit codes") {
  CHECK(run("witness /nonexistent/state.json --r 0.5") == cli::kExitBadInput);
  CHECK(run("fig2 --r-min 1.0 --r-max 0.5") == cli::kExitBadInput);

  TempFile state("cli_mbs.json");
  save_state_file(state.path, state_to_json(mbs_singlet({0.5, 0.0}, 8)));
  CHECK(run("witness " + state.path + " --r 0.5 --n-max 8") == cli::kExitOk);

  TempFile vac("cli_vac.json");
  save_state_file(vac.path,
                  state_to_json(PureState::basis_state(OccupationQuad(0, 0, 0, 0), 6)));
  CHECK(run("witness " + vac.path + " --r 0.5") == cli::kExitEmptySubspace);

  CHECK(run("oracle sector --sector 1 --restarts 4") == cli::kExitOk);
  CHECK(run("make-state mbs --r 0.4 --n-max 6 --out /tmp/hybent_cli_make.json") ==
        cli::kExitOk);
  CHECK(run("witness /tmp/hybent_cli_make.json --n-max 6") == cli::kExitOk);
  std::remove("/tmp/hybent_cli_make.json");
}

TEST_CASE("observables command") {
  TempFile state("obs.json");
  save_state_file(state.path, state_to_json(sector_singlet(1, 6)));
  TempFile out("obs_out.json");
  cli::RunConfig cfg;
  cfg.out_path = out.path;
  REQUIRE(cli::cmd_observables(state.path, "total", cfg) == cli::kExitOk);
  const auto j = nlohmann::json::parse(slurp(out.path));
  CHECK(j.at("s2").get<double>() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(j.at("variances").at("z").get<double>() ==
        doctest::Approx(0.0).epsilon(1e-10));
}
