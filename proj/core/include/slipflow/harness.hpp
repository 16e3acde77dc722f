#pragma once

#include "slipflow/config.hpp"
#include "slipflow/diagnostics.hpp"
#include "slipflow/pde_ops.hpp"

namespace slipflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSoftFailure = 2;   // order fits and monotonicity checks
inline constexpr int kExitHardFailure = 3;   // mass, positivity, Ito sandwich

/// Runs n_paths trajectories (parallel across workers, deterministic
/// regardless of their count), writes one ledger CSV per path, field
/// snapshots and increments per the config, and a JSON summary with the
/// acceptance metrics. Nonzero status iff a hard assertion fails.
int run_command(const RunConfig& cfg, uint64_t seed, int n_paths, const std::string& outdir);

/// Re-runs the config with one key swept over the given values; for h sweeps
/// with noise the Brownian path is refined dyadically so every run shares
/// one realization. Emits per-value summaries and cross-value comparisons.
int sweep_command(const RunConfig& cfg, const std::string& param,
                  const std::vector<double>& values, uint64_t seed, const std::string& outdir);

/// Audits a stored record directory: suite in {energy, mass, friction,
/// weakforms, ops}.
int check_command(const std::string& record_dir, const std::string& suite);

/// Worker count: SLIPFLOW_WORKERS, else hardware concurrency.
int worker_count();

// --- artifact I/O (CSV ledgers, binary field snapshots with JSON headers) ---

void write_ledger_csv(const std::string& path, const TrajectoryRecord& rec);
std::vector<LedgerRow> read_ledger_csv(const std::string& path);

void write_trajectory_artifacts(const std::string& dir, const TrajectoryRecord& rec,
                                const RunConfig& cfg);

/// Reloads what write_trajectory_artifacts stored (rows always; snapshots
/// and increments when present).
TrajectoryRecord read_trajectory_artifacts(const std::string& dir, const SimSetup& setup);

}  // namespace slipflow
