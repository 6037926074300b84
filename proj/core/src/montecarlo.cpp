#include "xbarsim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "xbarsim/errors.hpp"
#include "xbarsim/linalg.hpp"
#include "xbarsim/rng.hpp"
#include "xbarsim/xbar.hpp"

namespace xbarsim {
namespace {

// Domain tags keep target and phase streams disjoint.
constexpr std::uint64_t kTargetTag = 0x7461726765740000ULL;
constexpr std::uint64_t kPhaseTag = 0x7068617365000000ULL;

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void validate_common(const SweepConfig& cfg) {
  if (cfg.architectures.empty()) throw ConfigError("no architectures selected");
  if (cfg.n_values.empty()) throw ConfigError("n_values is empty");
  for (int n : cfg.n_values) {
    if (n < 2) throw ConfigError("matrix size must be >= 2, got " + std::to_string(n));
  }
  try {
    cfg.passive_losses.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void validate_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw ConfigError(std::string(name) + " is empty");
  for (double v : grid) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError(std::string(name) + " values must be finite and >= 0");
    }
  }
}

std::string point_label(Architecture arch, int n, const char* what, double value) {
  std::ostringstream s;
  s << to_string(arch) << " n=" << n << " " << what << "=" << value;
  return s.str();
}

/// Runs `sample(i)` for every index, then aggregates. Failures are re-raised
/// as NumericalFailure naming the sweep point.
FidelityReport run_point(const SweepConfig& cfg, Architecture arch, int n, double value,
                         const char* what, std::size_t count,
                         const std::function<double(std::size_t)>& sample) {
  std::vector<double> values(count);
  try {
    parallel_for(count, cfg.threads, [&](std::size_t i) {
      const double f = sample(i);
      if (!std::isfinite(f)) throw NumericalFailure("non-finite fidelity");
      values[i] = f;
    });
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalFailure("sweep point " + point_label(arch, n, what, value) +
                           " failed: " + e.what());
  }
  const SampleStats stats = summarize(values);
  return FidelityReport{arch,       n,         value, stats.mean, stats.std,
                        static_cast<std::int64_t>(count), cfg.master_seed};
}

std::vector<ComplexMatrix> make_targets(const SweepConfig& cfg, int n) {
  std::vector<ComplexMatrix> targets(static_cast<std::size_t>(cfg.n_matrices),
                                     ComplexMatrix(1, 1));
  parallel_for(targets.size(), cfg.threads, [&](std::size_t m) {
    targets[m] = random_target_matrix(n, target_seed(cfg.master_seed, n, static_cast<int>(m)));
  });
  return targets;
}

std::vector<ClementsDevice> compile_clements(const SweepConfig& cfg,
                                             const std::vector<ComplexMatrix>& targets) {
  std::vector<ClementsDevice> devices(targets.size());
  parallel_for(targets.size(), cfg.threads, [&](std::size_t m) {
    devices[m] = build_svd_clements(targets[m], LossModel::lossless());
  });
  return devices;
}

}  // namespace

std::string_view to_string(Architecture arch) {
  return arch == Architecture::xbar ? "xbar" : "svd-clements";
}

Architecture parse_architecture(std::string_view name) {
  if (name == "xbar") return Architecture::xbar;
  if (name == "svd-clements") return Architecture::svd_clements;
  throw ConfigError("unknown architecture '" + std::string(name) + "'");
}

std::uint64_t target_seed(std::uint64_t master, int n, int matrix_index) {
  return derive_seed(master, {kTargetTag, static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(matrix_index)});
}

std::uint64_t phase_trial_seed(std::uint64_t master, int n, int matrix_index,
                               int trial_index) {
  return derive_seed(master, {kPhaseTag, static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(matrix_index),
                              static_cast<std::uint64_t>(trial_index)});
}

std::vector<FidelityReport> loss_fidelity_sweep(const SweepConfig& cfg) {
  validate_common(cfg);
  validate_grid(cfg.il_node_grid, "il_node_grid");
  if (cfg.n_matrices < 1) throw ConfigError("n_matrices must be >= 1");

  std::vector<FidelityReport> reports;
  for (Architecture arch : cfg.architectures) {
    for (int n : cfg.n_values) {
      const std::vector<ComplexMatrix> targets = make_targets(cfg, n);
      std::vector<ClementsDevice> compiled;
      if (arch == Architecture::svd_clements) compiled = compile_clements(cfg, targets);
      for (double il : cfg.il_node_grid) {
        const LossModel loss = cfg.passive_losses.with_node_loss(il);
        reports.push_back(run_point(
            cfg, arch, n, il, "il_node_db", targets.size(), [&](std::size_t m) {
              if (arch == Architecture::svd_clements) {
                ClementsDevice dev = compiled[m];
                dev.loss = loss;
                return fidelity(evaluate_svd_clements(dev), targets[m]);
              }
              const XbarDevice dev =
                  build_xbar(targets[m].transpose(), loss, XbarMode::balanced);
              return fidelity(realized_matrix(dev), targets[m]);
            }));
      }
    }
  }
  return reports;
}

std::vector<FidelityReport> phase_fidelity_sweep(const SweepConfig& cfg) {
  validate_common(cfg);
  validate_grid(cfg.sigma_grid, "sigma_grid");
  if (cfg.n_matrices < 1) throw ConfigError("n_matrices must be >= 1");
  if (cfg.n_phase_trials < 1) throw ConfigError("n_phase_trials must be >= 1");

  const auto trials = static_cast<std::size_t>(cfg.n_phase_trials);
  std::vector<FidelityReport> reports;
  for (Architecture arch : cfg.architectures) {
    for (int n : cfg.n_values) {
      const std::vector<ComplexMatrix> targets = make_targets(cfg, n);
      std::vector<ClementsDevice> clements;
      std::vector<XbarDevice> xbars;
      if (arch == Architecture::svd_clements) {
        clements = compile_clements(cfg, targets);
      } else {
        xbars.reserve(targets.size());
        for (const ComplexMatrix& y : targets) {
          xbars.push_back(build_xbar(y.transpose(), LossModel::lossless(), XbarMode::balanced));
        }
      }
      for (double sigma : cfg.sigma_grid) {
        reports.push_back(run_point(
            cfg, arch, n, sigma, "sigma_rad", targets.size() * trials, [&](std::size_t i) {
              const std::size_t m = i / trials;
              const std::size_t t = i % trials;
              RandomStream stream(phase_trial_seed(cfg.master_seed, n, static_cast<int>(m),
                                                   static_cast<int>(t)));
              if (arch == Architecture::svd_clements) {
                const ClementsDevice dev =
                    perturb_device(clements[m], cfg.phase_model, sigma, stream);
                return fidelity(evaluate_svd_clements(dev), targets[m]);
              }
              const XbarDevice dev = perturb_xbar(xbars[m], cfg.phase_model, sigma, stream);
              return fidelity(realized_matrix(dev), targets[m]);
            }));
      }
    }
  }
  return reports;
}

std::vector<InsertionLossRow> insertion_loss_sweep(const SweepConfig& cfg) {
  validate_common(cfg);
  validate_grid(cfg.il_node_grid, "il_node_grid");

  std::vector<InsertionLossRow> rows;
  for (Architecture arch : cfg.architectures) {
    for (int n : cfg.n_values) {
      for (double il : cfg.il_node_grid) {
        if (arch == Architecture::svd_clements) {
          rows.push_back({arch, "best", n, il, svd_insertion_loss(n, il, PathCase::best)});
          rows.push_back({arch, "worst", n, il, svd_insertion_loss(n, il, PathCase::worst)});
        } else {
          const double total =
              xbar_insertion_loss(build_topology(n, n), cfg.passive_losses, il);
          rows.push_back({arch, "balanced", n, il, total});
        }
      }
    }
  }
  return rows;
}

SampleStats summarize(std::span<const double> values) {
  SampleStats s;
  if (values.empty()) return s;
  const double count = static_cast<double>(values.size());
  s.mean = pairwise_sum(values) / count;
  if (values.size() > 1) {
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - s.mean;
      dev[i] = d * d;
    }
    s.std = std::sqrt(pairwise_sum(dev) / (count - 1.0));
  }
  return s;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace xbarsim
