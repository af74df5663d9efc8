#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dpa/config.hpp"
#include "dpa/solver.hpp"

namespace dpa {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitViolation = 2, kExitNumerical = 3 };

/// Particles from the configured initial density, then integrated.
Trajectory simulate(const ProblemSpec& spec, std::size_t N, const IntegrateOptions& options);

/// ||rho_a - rho_b||_{L1([0,T] x R)}; both trajectories must share their
/// stored times. Simpson in time over the exact spatial L1 distances.
double space_time_l1(const Trajectory& a, const Trajectory& b);

struct ConvergeRow {
  std::size_t N = 0;
  /// Distance to the run with the next N; NaN for the last row.
  double cauchy_diff = 0.0;
  double bv_max = 0.0;
  double edb_residual = 0.0;
};

/// Runs every N concurrently with a common RK4 step (options.dt, or the
/// default step of the finest run) and every step stored.
std::vector<ConvergeRow> converge_table(const ProblemSpec& spec, const std::vector<std::size_t>& Ns,
                                        const IntegrateOptions& options);

/// Checks mass, the density cap, the cell lower bound, energy decay and,
/// when every step is stored, the energy-dissipation balance.
std::vector<std::string> run_invariants(const Trajectory& traj, const ProblemSpec& spec,
                                        EnergyRange range, bool with_edb);

int run_command(const RunConfig& cfg, std::ostream& log);
int converge_command(const RunConfig& cfg, const std::vector<std::size_t>& Ns, std::ostream& log);
int oracle_compare_command(const RunConfig& cfg, std::ostream& log);
int entropy_check_command(const RunConfig& cfg, std::ostream& log);
int edb_check_command(const RunConfig& cfg, std::ostream& log);

}  // namespace dpa
