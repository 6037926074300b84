#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xbarsim/clements.hpp"
#include "xbarsim/mzi.hpp"

namespace xbarsim {

enum class Architecture { xbar, svd_clements };

std::string_view to_string(Architecture arch);
/// "xbar" or "svd-clements"; throws ConfigError otherwise.
Architecture parse_architecture(std::string_view name);

struct SweepConfig {
  std::vector<Architecture> architectures{Architecture::xbar, Architecture::svd_clements};
  std::vector<int> n_values;
  std::vector<double> il_node_grid;  ///< dB
  std::vector<double> sigma_grid;    ///< rad
  int n_matrices = 500;
  int n_phase_trials = 100;
  LossModel passive_losses = LossModel::silicon_passives();
  std::uint64_t master_seed = 0;
  PhaseErrorModel phase_model = PhaseErrorModel::shared_per_trial;
  /// Worker threads; <= 0 picks the hardware concurrency. Never affects results.
  int threads = 1;
};

struct FidelityReport {
  Architecture arch = Architecture::xbar;
  int n = 0;
  double sweep_value = 0.0;  ///< IL_node in dB or sigma in rad
  double fidelity_mean = 0.0;
  double fidelity_std = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t master_seed = 0;
};

struct InsertionLossRow {
  Architecture arch = Architecture::xbar;
  std::string path_case;  ///< "best" / "worst" for svd-clements, "balanced" for xbar
  int n = 0;
  double il_node_db = 0.0;
  double il_total_db = 0.0;
};

/// Seed of the m-th target matrix for size n. Shared by every architecture
/// and sweep point so curves are compared on common random numbers.
std::uint64_t target_seed(std::uint64_t master, int n, int matrix_index);

/// Seed of phase-error trial (matrix_index, trial_index) for size n.
std::uint64_t phase_trial_seed(std::uint64_t master, int n, int matrix_index,
                               int trial_index);

/// Per (arch, N, IL_node): compile n_matrices targets, evaluate the lossy
/// device and average the fidelity. Crossbar devices use balanced splitters.
std::vector<FidelityReport> loss_fidelity_sweep(const SweepConfig& cfg);

/// Per (arch, N, sigma): lossless devices, n_matrices x n_phase_trials
/// perturbed evaluations averaged together.
std::vector<FidelityReport> phase_fidelity_sweep(const SweepConfig& cfg);

/// Closed-form insertion losses over n_values x il_node_grid. Crossbar
/// passives stay at cfg.passive_losses while IL_node varies.
std::vector<InsertionLossRow> insertion_loss_sweep(const SweepConfig& cfg);

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation (n - 1); 0 for one sample
};

/// Mean and standard deviation using pairwise summation in index order.
SampleStats summarize(std::span<const double> values);

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace xbarsim
