#ifndef HYBENT_CLI_HPP
#define HYBENT_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "hybent/fock.hpp"

// Command implementations behind the hybent binary. Each command builds
// its complete output (CSV with a config-echo header, or JSON with an
// embedded config object) and writes it to the configured path or stdout,
// returning a process exit code.
//
// Exit codes: 0 success (regardless of scientific verdict), 2 malformed
// input, 3 no weight in the requested subspace, 4 oracle soundness
// violation (a bug sentinel).

namespace hybent::cli {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitEmptySubspace = 3;
inline constexpr int kExitSoundness = 4;

struct RunConfig {
  int n_max = 10;
  std::string subspace = "nonvacuum";
  std::uint64_t seed = 12345;
  int restarts = 32;
  double prune = kPruneThreshold;
  double branch_prune = 1e-10;
  double residual_tol = 1e-13;  // optimizer convergence
  std::string out_path;  // empty -> stdout
  std::string format;    // "csv" | "json" | empty for the command default

  SectorSet sectors() const { return SectorSet::parse(subspace); }
  std::string echo() const;
};

// Sweep of the separability bounds versus squeezing (CSV by default).
int cmd_fig2(double r_min, double r_max, int steps, const RunConfig& cfg);

// Witness evaluation of a serialized state; r estimated from the mean
// per-mode photon number when absent (JSON by default).
int cmd_witness(const std::string& state_path, std::optional<double> r,
                const RunConfig& cfg);

// kind: number | polarization | sector | chain.
int cmd_oracle(const std::string& kind, double r, int sector, int chain_trials,
               const RunConfig& cfg);

// parameter: loss | visibility. Sweeps the channel strength and reports
// the bisected critical value in the header (CSV by default).
int cmd_noise_sweep(const std::string& parameter, double r, int points,
                    const RunConfig& cfg);

// Stokes expectations, total-spin square and variances of a state file.
int cmd_observables(const std::string& state_path, const std::string& party,
                    const RunConfig& cfg);

// kind: mbs | sector | tmsv | blind | cross-layer | beam-splitter.
// Writes a state file in the JSON schema.
int cmd_make_state(const std::string& kind, double r, int sector, double alpha,
                   double beta, const RunConfig& cfg);

}  // namespace hybent::cli

#endif
