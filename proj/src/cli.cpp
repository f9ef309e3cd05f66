#include "hybent/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "hybent/channels.hpp"
#include "hybent/io.hpp"
#include "hybent/oracles.hpp"
#include "hybent/states.hpp"
#include "hybent/stokes.hpp"
#include "hybent/witness.hpp"

namespace hybent::cli {

namespace {

constexpr const char* kCsvColumns =
    "r,bound_number,bound_polarization,threshold,argmax_sector,fidelity,"
    "witness_value,conditioning_probability,tail_weight,noise_value";

struct CsvRow {
  std::optional<double> r, bound_number, bound_polarization, threshold;
  std::optional<int> argmax_sector;
  std::optional<double> fidelity, witness_value, conditioning_probability,
      tail_weight, noise_value;
};

std::string csv_cell(const std::optional<double>& v) {
  return v ? format_g12(*v) : std::string();
}

std::string csv_line(const CsvRow& row) {
  std::string out = csv_cell(row.r);
  out += ',' + csv_cell(row.bound_number);
  out += ',' + csv_cell(row.bound_polarization);
  out += ',' + csv_cell(row.threshold);
  out += ',' + (row.argmax_sector ? std::to_string(*row.argmax_sector) : std::string());
  out += ',' + csv_cell(row.fidelity);
  out += ',' + csv_cell(row.witness_value);
  out += ',' + csv_cell(row.conditioning_probability);
  out += ',' + csv_cell(row.tail_weight);
  out += ',' + csv_cell(row.noise_value);
  return out;
}

std::string header_block(const std::string& command, const RunConfig& cfg,
                         const std::vector<std::string>& extra = {}) {
  std::string out;
  out += "# hybent " + command + "\n";
  out += "# version: " + std::string(kVersion) + "\n";
  out += "# config: " + cfg.echo() + "\n";
  for (const auto& line : extra) out += "# " + line + "\n";
  out += "# columns: " + std::string(kCsvColumns) + "\n";
  out += std::string(kCsvColumns) + "\n";
  return out;
}

int write_output(const RunConfig& cfg, const std::string& body) {
  if (cfg.out_path.empty()) {
    std::cout << body;
    return kExitOk;
  }
  std::ofstream out(cfg.out_path);
  if (!out) {
    std::cerr << "cannot open output file: " << cfg.out_path << "\n";
    return kExitBadInput;
  }
  out << body;
  return kExitOk;
}

nlohmann::json config_json(const RunConfig& cfg) {
  return {{"n_max", cfg.n_max},       {"subspace", cfg.subspace},
          {"seed", cfg.seed},         {"restarts", cfg.restarts},
          {"prune", cfg.prune},       {"branch_prune", cfg.branch_prune},
          {"residual_tol", cfg.residual_tol}, {"version", kVersion}};
}

std::string effective_format(const RunConfig& cfg, const char* fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

// Dispatches grid points to a small worker pool; results land in index
// order so the output is deterministic.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, 8);
  if (count < 64 || workers < 2) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::string RunConfig::echo() const {
  std::ostringstream out;
  out << "n_max=" << n_max << " subspace=" << subspace << " seed=" << seed
      << " restarts=" << restarts << " prune=" << format_g12(prune)
      << " branch_prune=" << format_g12(branch_prune)
      << " residual_tol=" << format_g12(residual_tol)
      << " format=" << (format.empty() ? "default" : format);
  return out.str();
}

//-------------------------------------------------------------------------
// fig2
//-------------------------------------------------------------------------

int cmd_fig2(double r_min, double r_max, int steps, const RunConfig& cfg) {
  if (!(r_min >= 0.0) || !(r_max > r_min) || steps < 2) {
    std::cerr << "fig2: need 0 <= r_min < r_max and steps >= 2\n";
    return kExitBadInput;
  }
  SectorSet sectors = SectorSet::full();
  try {
    sectors = cfg.sectors();
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }

  struct Point {
    double r, bn, bp;
    int argmax;
  };
  std::vector<Point> points(steps);
  parallel_for(steps, [&](int i) {
    const double r = r_min + (r_max - r_min) * i / (steps - 1);
    const BoundDetail number = bound_number_detail(r, sectors);
    points[i] = {r, number.value, bound_polarization(r, sectors),
                 number.argmax_sector};
  });

  const std::string format = effective_format(cfg, "csv");
  if (format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : points) {
      rows.push_back({{"r", p.r},
                      {"bound_number", p.bn},
                      {"bound_polarization", p.bp},
                      {"threshold", std::max(p.bn, p.bp)},
                      {"argmax_sector", p.argmax}});
    }
    nlohmann::json out{{"config", config_json(cfg)}, {"rows", std::move(rows)}};
    return write_output(cfg, out.dump(2) + "\n");
  }

  std::string body = header_block("fig2", cfg);
  for (const auto& p : points) {
    CsvRow row;
    row.r = p.r;
    row.bound_number = p.bn;
    row.bound_polarization = p.bp;
    row.threshold = std::max(p.bn, p.bp);
    row.argmax_sector = p.argmax;
    body += csv_line(row) + "\n";
  }
  return write_output(cfg, body);
}

//-------------------------------------------------------------------------
// witness
//-------------------------------------------------------------------------

namespace {

double ensemble_mean_photon(const StateEnsemble& ensemble, Mode mode) {
  double out = 0.0;
  for (const auto& branch : ensemble.branches()) {
    out += branch.weight * mean_photon(branch.state, mode);
  }
  return out / ensemble.total_weight();
}

double estimate_r_for(const LoadedState& state) {
  double mean = 0.0;
  for (Mode m : {Mode::AH, Mode::AV, Mode::BH, Mode::BV}) {
    if (std::holds_alternative<PureState>(state)) {
      mean += mean_photon(std::get<PureState>(state), m);
    } else {
      mean += ensemble_mean_photon(std::get<StateEnsemble>(state), m);
    }
  }
  return estimate_squeezing(mean / 4.0);
}

}  // namespace

int cmd_witness(const std::string& state_path, std::optional<double> r,
                const RunConfig& cfg) {
  try {
    const LoadedState state = load_state_file(state_path);
    const SectorSet sectors = cfg.sectors();
    const double r_eff = r ? *r : estimate_r_for(state);

    const WitnessEvaluation eval = std::visit(
        [&](const auto& s) { return evaluate_witness_detail(s, r_eff, sectors); },
        state);

    const std::string format = effective_format(cfg, "json");
    if (format == "csv") {
      std::string body = header_block("witness", cfg, {"state: " + state_path});
      CsvRow row;
      row.r = eval.report.r;
      row.bound_number = eval.report.bound_number;
      row.bound_polarization = eval.report.bound_polarization;
      row.threshold = eval.report.threshold;
      row.argmax_sector = eval.argmax_sector;
      row.fidelity = eval.report.fidelity;
      row.witness_value = eval.report.witness_value;
      row.conditioning_probability = eval.report.conditioning_probability;
      row.tail_weight = eval.report.tail_weight;
      body += csv_line(row) + "\n";
      return write_output(cfg, body);
    }
    nlohmann::json out{{"config", config_json(cfg)},
                       {"report", report_to_json(eval.report)}};
    return write_output(cfg, out.dump(2) + "\n");
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  } catch (const EmptySubspaceError& e) {
    std::cerr << e.what() << "\n";
    return kExitEmptySubspace;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
}

//-------------------------------------------------------------------------
// oracle
//-------------------------------------------------------------------------

int cmd_oracle(const std::string& kind, double r, int sector, int chain_trials,
               const RunConfig& cfg) {
  constexpr double kSoundnessSlack = 1e-9;
  try {
    const SectorSet sectors = cfg.sectors();
    nlohmann::json out{{"config", config_json(cfg)}, {"kind", kind}};

    bool soundness_violated = false;
    if (kind == "number" || kind == "polarization" || kind == "sector") {
      OracleResult result;
      if (kind == "number") {
        result = oracle_number_sup(r, sectors, cfg.n_max);
      } else if (kind == "polarization") {
        result = oracle_polarization_sup(r, sectors, cfg.n_max, cfg.restarts,
                                         cfg.seed, cfg.residual_tol);
      } else {
        result = sector_product_max(sector, cfg.restarts, cfg.seed, cfg.residual_tol);
        out["sector"] = sector;
      }
      out["result"] = oracle_to_json(result);
      soundness_violated = result.achieved > result.bound + kSoundnessSlack;
      out["sound"] = !soundness_violated;
    } else if (kind == "chain") {
      int violations = 0;
      int links_checked = 0;
      std::string first;
      for (int trial = 0; trial < chain_trials; ++trial) {
        const ProductAnsatz ansatz = random_product_ansatz(
            sectors, cfg.n_max, cfg.seed + static_cast<std::uint64_t>(trial));
        const ChainReport report = verify_appendix_chain(ansatz, r, cfg.n_max);
        links_checked += static_cast<int>(report.links.size());
        if (!report.all_hold) {
          ++violations;
          if (first.empty()) first = report.first_violation;
        }
      }
      out["trials"] = chain_trials;
      out["links_checked"] = links_checked;
      out["violations"] = violations;
      if (!first.empty()) out["first_violation"] = first;
      soundness_violated = violations > 0;
    } else {
      std::cerr << "oracle: unknown kind '" << kind << "'\n";
      return kExitBadInput;
    }

    const int rc = write_output(cfg, out.dump(2) + "\n");
    if (rc != kExitOk) return rc;
    return soundness_violated ? kExitSoundness : kExitOk;
  } catch (const EmptySubspaceError& e) {
    std::cerr << e.what() << "\n";
    return kExitEmptySubspace;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
}

//-------------------------------------------------------------------------
// noise-sweep
//-------------------------------------------------------------------------

int cmd_noise_sweep(const std::string& parameter, double r, int points,
                    const RunConfig& cfg) {
  if (parameter != "loss" && parameter != "visibility") {
    std::cerr << "noise-sweep: parameter must be loss or visibility\n";
    return kExitBadInput;
  }
  if (points < 2) {
    std::cerr << "noise-sweep: need at least 2 points\n";
    return kExitBadInput;
  }
  try {
    const SectorSet sectors = cfg.sectors();
    const NoiseParameter param = parameter == "loss" ? NoiseParameter::Loss
                                                     : NoiseParameter::Visibility;
    const PureState clean = mbs_singlet({r, 0.0}, cfg.n_max);
    // Visibility noise mixes within the accessible subspace (see channels).
    const PureState conditioned = param == NoiseParameter::Visibility
                                      ? project_subspace(clean, sectors).state
                                      : clean;

    std::vector<std::string> extra;
    extra.push_back("parameter: " + parameter);
    try {
      const double critical =
          robustness_threshold(param, r, sectors, cfg.n_max, 1e-4);
      extra.push_back("critical_" + parameter + ": " + format_g12(critical));
    } catch (const std::runtime_error& e) {
      extra.push_back("critical_" + parameter + ": none (" + std::string(e.what()) + ")");
    }

    std::string body = header_block("noise-sweep", cfg, extra);
    for (int i = 0; i < points; ++i) {
      const double value = static_cast<double>(i) / (points - 1);
      CsvRow row;
      row.r = r;
      row.noise_value = value;
      try {
        const StateEnsemble noisy =
            param == NoiseParameter::Loss
                ? photon_loss(clean, value, cfg.branch_prune)
                : white_noise_mix(conditioned, value, sectors);
        const WitnessEvaluation eval = evaluate_witness_detail(noisy, r, sectors);
        row.bound_number = eval.report.bound_number;
        row.bound_polarization = eval.report.bound_polarization;
        row.threshold = eval.report.threshold;
        row.argmax_sector = eval.argmax_sector;
        row.fidelity = eval.report.fidelity;
        row.witness_value = eval.report.witness_value;
        row.conditioning_probability = eval.report.conditioning_probability;
        row.tail_weight = eval.report.tail_weight;
      } catch (const EmptySubspaceError&) {
        // no weight left in the subspace at this noise level; row stays sparse
      }
      body += csv_line(row) + "\n";
    }
    return write_output(cfg, body);
  } catch (const EmptySubspaceError& e) {
    std::cerr << e.what() << "\n";
    return kExitEmptySubspace;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
}

//-------------------------------------------------------------------------
// observables
//-------------------------------------------------------------------------

namespace {

struct StokesSummary {
  double sx, sy, sz, s2;
  double var_x, var_y, var_z;
};

Scope parse_scope(const std::string& party) {
  if (party == "alice") return Scope::Alice;
  if (party == "bob") return Scope::Bob;
  if (party == "total") return Scope::Total;
  throw std::invalid_argument("observables: party must be alice, bob or total");
}

StokesSummary summarize(const PureState& state, Scope scope) {
  const PureState unit = normalized(state);
  const StokesVector v = stokes_vector(unit, scope);
  return {v.sx, v.sy, v.sz, total_spin_squared(unit),
          stokes_variance(unit, StokesAxis::X, scope),
          stokes_variance(unit, StokesAxis::Y, scope),
          stokes_variance(unit, StokesAxis::Z, scope)};
}

StokesSummary summarize(const StateEnsemble& ensemble, Scope scope) {
  // Ensemble moments: first and second moments average over branches,
  // variances recombine from those.
  double sx = 0, sy = 0, sz = 0, s2 = 0;
  double mx = 0, my = 0, mz = 0;  // second moments
  for (const auto& branch : ensemble.branches()) {
    const PureState unit = normalized(branch.state);
    const StokesVector v = stokes_vector(unit, scope);
    sx += branch.weight * v.sx;
    sy += branch.weight * v.sy;
    sz += branch.weight * v.sz;
    s2 += branch.weight * total_spin_squared(unit);
    mx += branch.weight * (stokes_variance(unit, StokesAxis::X, scope) + v.sx * v.sx);
    my += branch.weight * (stokes_variance(unit, StokesAxis::Y, scope) + v.sy * v.sy);
    mz += branch.weight * (stokes_variance(unit, StokesAxis::Z, scope) + v.sz * v.sz);
  }
  const double w = ensemble.total_weight();
  sx /= w; sy /= w; sz /= w; s2 /= w; mx /= w; my /= w; mz /= w;
  return {sx, sy, sz, s2, mx - sx * sx, my - sy * sy, mz - sz * sz};
}

}  // namespace

int cmd_observables(const std::string& state_path, const std::string& party,
                    const RunConfig& cfg) {
  try {
    const Scope scope = parse_scope(party);
    const LoadedState state = load_state_file(state_path);
    const StokesSummary s = std::visit(
        [&](const auto& st) { return summarize(st, scope); }, state);
    nlohmann::json out{{"config", config_json(cfg)},
                       {"party", party},
                       {"sx", s.sx},
                       {"sy", s.sy},
                       {"sz", s.sz},
                       {"s2", s.s2},
                       {"variances", {{"x", s.var_x}, {"y", s.var_y}, {"z", s.var_z}}}};
    return write_output(cfg, out.dump(2) + "\n");
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
}

//-------------------------------------------------------------------------
// make-state
//-------------------------------------------------------------------------

int cmd_make_state(const std::string& kind, double r, int sector, double alpha,
                   double beta, const RunConfig& cfg) {
  try {
    nlohmann::json payload;
    if (kind == "mbs") {
      payload = state_to_json(mbs_singlet({r, 0.0}, cfg.n_max));
    } else if (kind == "sector") {
      payload = state_to_json(sector_singlet(sector, cfg.n_max));
    } else if (kind == "tmsv") {
      payload = state_to_json(tmsv({r, 0.0}, Mode::AH, Mode::BV, +1, cfg.n_max));
    } else if (kind == "blind") {
      const SectorSet sectors = cfg.sectors();
      const SectorWeights weights =
          sector_probabilities({r, 0.0}, sectors, /*renormalize=*/true);
      std::map<int, double> usable;
      double total = 0.0;
      for (const auto& [s, w] : weights.weights) {
        if (s <= cfg.n_max) {
          usable[s] = w;
          total += w;
        }
      }
      for (auto& [s, w] : usable) w /= total;
      payload = ensemble_to_json(blind_mixture(usable, cfg.n_max));
    } else if (kind == "cross-layer" || kind == "beam-splitter") {
      const ExemplarKind ek = kind == "cross-layer" ? ExemplarKind::CrossLayer
                                                    : ExemplarKind::BeamSplitter;
      payload = state_to_json(exemplar_state(ek, alpha, beta, cfg.n_max));
    } else {
      std::cerr << "make-state: unknown kind '" << kind << "'\n";
      return kExitBadInput;
    }
    if (cfg.out_path.empty()) {
      std::cout << payload.dump(2) << "\n";
    } else {
      save_state_file(cfg.out_path, payload);
    }
    return kExitOk;
  } catch (const EmptySubspaceError& e) {
    std::cerr << e.what() << "\n";
    return kExitEmptySubspace;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
}

}  // namespace hybent::cli
