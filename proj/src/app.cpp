#include "dpa/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

#include "dpa/csv.hpp"
#include "dpa/diagnostics.hpp"
#include "dpa/fv_oracle.hpp"
#include "dpa/quadrature.hpp"
#include "dpa/reconstruct.hpp"
#include "dpa/variational.hpp"

namespace dpa {

namespace {

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

int report(const std::vector<std::string>& violations, const std::filesystem::path& dir,
           std::ostream& log) {
  if (violations.empty()) return kExitOk;
  auto out = open_output(dir, "violations.txt");
  for (const auto& v : violations) {
    log << "violation: " << v << '\n';
    out << v << '\n';
  }
  return kExitViolation;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double entropy_level(const ProblemSpec& spec, double fraction) {
  const double cap = spec.mobility.cap();
  return fraction * (std::isfinite(cap) ? cap : spec.M());
}

}  // namespace

Trajectory simulate(const ProblemSpec& spec, std::size_t N, const IntegrateOptions& options) {
  validate(spec);
  return integrate(quantile_partition(spec.initial, N), spec, options);
}

double space_time_l1(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("space_time_l1: time grids differ");
  std::vector<double> t(a.size());
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.states[k].t - b.states[k].t) > 1e-12 * std::max(1.0, std::abs(a.states[k].t))) {
      throw std::invalid_argument("space_time_l1: time grids differ");
    }
    t[k] = a.states[k].t;
    d[k] = l1_distance(to_profile(a.states[k]), to_profile(b.states[k]));
  }
  return simpson(t, d);
}

std::vector<ConvergeRow> converge_table(const ProblemSpec& spec, const std::vector<std::size_t>& Ns,
                                        const IntegrateOptions& options) {
  if (Ns.empty()) throw std::invalid_argument("converge: empty N list");
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    if (Ns[k] < 2) throw std::invalid_argument("converge: N must be >= 2");
    if (k > 0 && (Ns[k] <= Ns[k - 1] || Ns[k] % Ns[k - 1] != 0)) {
      throw std::invalid_argument("converge: N list must be ascending, each dividing the next");
    }
  }
  validate(spec);
  IntegrateOptions opt = options;
  opt.scheme = Scheme::RK4;
  opt.output_intervals = 0;
  if (!opt.dt) opt.dt = default_time_step(quantile_partition(spec.initial, Ns.back()), spec);

  std::vector<std::future<Trajectory>> jobs;
  for (std::size_t N : Ns) {
    jobs.push_back(std::async(std::launch::async, [&spec, &opt, N] {
      return integrate(quantile_partition(spec.initial, N), spec, opt);
    }));
  }
  std::vector<Trajectory> runs;
  for (auto& j : jobs) runs.push_back(j.get());

  std::vector<ConvergeRow> rows(Ns.size());
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    auto& r = rows[k];
    r.N = Ns[k];
    r.cauchy_diff = k + 1 < Ns.size() ? space_time_l1(runs[k], runs[k + 1])
                                      : std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : runs[k].states) r.bv_max = std::max(r.bv_max, bv_norm(s));
    r.edb_residual = edb_residual(runs[k], spec, runs[k].states.front().t, runs[k].t_end());
  }
  return rows;
}

std::vector<std::string> run_invariants(const Trajectory& traj, const ProblemSpec& spec,
                                        EnergyRange range, bool with_edb) {
  std::vector<std::string> out;
  const double m = spec.mass();
  const double M = spec.M();
  double prev_energy = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& s = traj.states[k];
    const Snapshot snap{s.t, s.x, traj.velocities[k], s.h};
    const double mass = total_mass(snap);
    if (std::abs(mass - m) > 1e-12 * m) {
      out.push_back("mass " + fmt(mass) + " differs from " + fmt(m) + " at t = " + fmt(s.t));
    }
    const auto d = diagnose(s, to_profile(traj.states.front()), M);
    if (d.max_density > M * (1.0 + 1e-9)) {
      out.push_back("density " + fmt(d.max_density) + " exceeds " + fmt(M) + " at t = " + fmt(s.t));
    }
    if (d.min_cell_ratio < 1.0 - 1e-6) {
      out.push_back("cell ratio " + fmt(d.min_cell_ratio) + " below 1 at t = " + fmt(s.t));
    }
    const double energy = energy_Fh(s, spec.V, spec.W, range);
    if (k > 0 && energy - prev_energy > 1e-8) {
      out.push_back("energy increased by " + fmt(energy - prev_energy) + " at t = " + fmt(s.t));
    }
    prev_energy = energy;
  }
  if (with_edb && traj.size() > 2) {
    const double F0 = energy_Fh(traj.states.front(), spec.V, spec.W, range);
    const double res = edb_residual(traj, spec, traj.states.front().t, traj.t_end(), range);
    if (res > 1e-6 * (std::abs(F0) + 1.0)) out.push_back("EDB residual " + fmt(res));
  }
  return out;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  const auto traj = simulate(cfg.problem, cfg.N, cfg.integrate);
  {
    auto out = open_output(cfg.out_dir, "snapshots.csv");
    write_snapshot_csv(out, ReconstructedFields(traj));
  }
  {
    auto records = diagnostics_series(traj, cfg.problem);
    // switched-off diagnostics are written as nan
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (auto& r : records) {
      if (!cfg.bv) r.bv_norm = r.tv_only = nan;
      if (!cfg.h1) r.h1_proxy = nan;
      if (!cfg.w1) r.w1_from_initial = nan;
    }
    auto out = open_output(cfg.out_dir, "diagnostics.csv");
    write_diagnostics_csv(out, records);
  }
  {
    auto out = open_output(cfg.out_dir, "variational.csv");
    write_gradient_csv(out, gradient_series(traj, cfg.problem, {cfg.energy_range, true}));
  }
  const bool every_step = cfg.integrate.output_intervals == 0;
  log << "run: N = " << cfg.N << ", " << traj.size() << " stored states, t_end = " << traj.t_end()
      << '\n';
  return report(run_invariants(traj, cfg.problem, cfg.energy_range, cfg.edb && every_step),
                cfg.out_dir, log);
}

int converge_command(const RunConfig& cfg, const std::vector<std::size_t>& Ns, std::ostream& log) {
  const auto rows = converge_table(cfg.problem, Ns, cfg.integrate);
  auto out = open_output(cfg.out_dir, "converge.csv");
  out.precision(17);
  out << "N,cauchy_diff,bv_max,edb_residual\n";
  std::vector<std::string> violations;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    out << r.N << ',' << r.cauchy_diff << ',' << r.bv_max << ',' << r.edb_residual << '\n';
    log << "N = " << r.N << "  cauchy = " << fmt(r.cauchy_diff) << "  bv_max = " << fmt(r.bv_max)
        << "  edb = " << fmt(r.edb_residual) << '\n';
    if (k > 0 && k + 1 < rows.size() && !(r.cauchy_diff < rows[k - 1].cauchy_diff)) {
      violations.push_back("Cauchy difference did not decrease at N = " + std::to_string(r.N));
    }
  }
  return report(violations, cfg.out_dir, log);
}

int oracle_compare_command(const RunConfig& cfg, std::ostream& log) {
  IntegrateOptions opt = cfg.integrate;
  opt.output_intervals = cfg.compare_intervals;
  const auto traj = simulate(cfg.problem, cfg.N, opt);

  const auto cells = static_cast<std::size_t>(std::llround((cfg.fv.b - cfg.fv.a) / cfg.fv.dx));
  FvOptions fo;
  fo.t_end = opt.t_end;
  fo.boundary = cfg.fv.boundary;
  fo.output_intervals = cfg.compare_intervals;
  const auto fv = fv_solve(make_grid(cfg.problem.initial, cfg.fv.a, cfg.fv.b, cells), cfg.problem, fo);

  auto out = open_output(cfg.out_dir, "oracle_compare.csv");
  CsvWriter csv(out, {"t", "l1_error"});
  const double m = cfg.problem.mass();
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const FvGrid grid{cfg.fv.a, cfg.fv.b, fv.frames[k].rho.values(), fv.frames[k].t};
    const double e = l1_compare(to_profile(traj.states[k]), grid);
    csv.row({traj.states[k].t, e});
    worst = std::max(worst, e);
  }
  log << "oracle-compare: max L1 distance " << fmt(worst) << " (" << fmt(worst / m) << " m)\n";
  std::vector<std::string> violations;
  if (!(worst <= 0.05 * m)) violations.push_back("L1 distance to the finite-volume solution " + fmt(worst) + " exceeds 0.05 m");
  return report(violations, cfg.out_dir, log);
}

int entropy_check_command(const RunConfig& cfg, std::ostream& log) {
  const auto traj = simulate(cfg.problem, cfg.N, cfg.integrate);
  const auto frames = frames_of(traj);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : traj.states) {
    lo = std::min(lo, s.x.front());
    hi = std::max(hi, s.x.back());
  }
  const double T = traj.t_end();
  std::vector<EntropyRow> rows;
  std::vector<std::string> violations;
  for (double frac : cfg.entropy.c_fractions) {
    const double c = entropy_level(cfg.problem, frac);
    for (const auto& test : entropy_test_grid(lo, hi, T)) {
      const double r = entropy_residual(frames, cfg.problem, c, test.phi, lo, hi);
      rows.push_back({c, test.id, r});
      if (r < -cfg.entropy.tolerance) {
        violations.push_back("entropy residual " + fmt(r) + " for c = " + fmt(c) + ", " + test.id);
      }
    }
  }
  auto out = open_output(cfg.out_dir, "entropy.csv");
  write_entropy_csv(out, rows);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) worst = std::min(worst, r.residual);
  log << "entropy-check: " << rows.size() << " residuals, most negative " << fmt(worst) << '\n';
  return report(violations, cfg.out_dir, log);
}

int edb_check_command(const RunConfig& cfg, std::ostream& log) {
  IntegrateOptions opt = cfg.integrate;
  opt.output_intervals = 0;
  const auto traj = simulate(cfg.problem, cfg.N, opt);
  const auto records = gradient_series(traj, cfg.problem, {cfg.energy_range, false});
  auto out = open_output(cfg.out_dir, "variational.csv");
  write_gradient_csv(out, records);
  const double res = std::abs(records.back().edb_partial);
  const double bound = 1e-6 * (std::abs(records.front().F_h) + 1.0);
  log << "edb-check: residual " << fmt(res) << ", bound " << fmt(bound) << '\n';
  std::vector<std::string> violations;
  if (!(res <= bound)) violations.push_back("EDB residual " + fmt(res) + " exceeds " + fmt(bound));
  return report(violations, cfg.out_dir, log);
}

}  // namespace dpa
