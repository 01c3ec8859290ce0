#pragma once

#include <functional>
#include <vector>

#include "grid.hpp"
#include "errors.hpp"
#include "maxwellian.hpp"
#include "mixture.hpp"
#include "moments.hpp"

namespace bgkmix {

struct SolverOptions {
  MaxwellianMode maxwellian = MaxwellianMode::conservative;
  /// Rebalance the second species' mixture target so the discrete exchange is
  /// exactly conservative even when the two exponential factors differ.
  /// Only applied with conservative Maxwellians.
  bool balance_exchange = true;
};

struct StepRecord {
  double clipped_mass = 0.0;  // mass removed by clipping negative values after transport
  double min_f1 = 0.0;
  double min_f2 = 0.0;
};

struct SolverState {
  DistributionField f1;
  DistributionField f2;
  double t = 0.0;
  StepRecord last;
};

/// One Strang step: transport dt/2, relax dt, transport dt/2.
SolverState step(const SolverState& state, const MixtureParameters& p, const PhaseGrid& grid, double dt,
                 const SolverOptions& options = {});
void step_in_place(SolverState& state, const MixtureParameters& p, const PhaseGrid& grid, double dt,
                   const SolverOptions& options = {});

/// Semi-Lagrangian shift of every velocity slice along the spatial axis by v_x * tau,
/// linear interpolation, periodic wrap. Returns the clipped mass (always 0 for linear interpolation
/// of nonnegative data, kept as a monitor).
double transport(DistributionField& f, const PhaseGrid& grid, double tau);

/// Relaxation substep of one cell. coeff1/coeff2 supply the densities, frequencies and targets;
/// f1/f2 are relaxed in place. With coeff == f this is the ordinary step.
void relax_cell(std::span<double> f1, std::span<double> f2, std::span<const double> coeff1,
                std::span<const double> coeff2, const MixtureParameters& p, const PhaseGrid& grid, double dt,
                const SolverOptions& options);

/// Both relaxation targets of one cell, already scaled so that
/// f_k <- exp(-A_k dt) f_k + target_k.
struct RelaxationPlan {
  double decay1 = 1.0;
  double decay2 = 1.0;
  std::vector<double> gain1;
  std::vector<double> gain2;
};
RelaxationPlan relaxation_plan(std::span<const double> coeff1, std::span<const double> coeff2,
                               const MixtureParameters& p, const PhaseGrid& grid, double dt,
                               const SolverOptions& options);

// ---- initial data -------------------------------------------------------

struct MaxwellianComponent {
  double n = 1.0;
  Vec3 u{0.0, 0.0, 0.0};
  double T = 1.0;
};

/// Sum of Maxwellian components with density modulation 1 + amplitude sin(2 pi k x / L).
struct SpeciesInitial {
  std::vector<MaxwellianComponent> components;
  double amplitude = 0.0;
  int wavenumber = 1;
};

DistributionField initial_field(const SpeciesInitial& init, double mass, const PhaseGrid& grid,
                                MaxwellianMode mode = MaxwellianMode::sampled);
SolverState initial_state(const SpeciesInitial& s1, const SpeciesInitial& s2, const MixtureParameters& p,
                          const PhaseGrid& grid, MaxwellianMode mode = MaxwellianMode::sampled);

// ---- diagnostics --------------------------------------------------------

/// Moments of the spatially integrated distributions (global per-species quantities).
struct GlobalMoments {
  double mass = 0.0;      // int int f dv dx
  Vec3 momentum{};        // m int int v f
  double energy = 0.0;    // m/2 int int |v|^2 f
  double n = 0.0;         // mass / domain length
  Vec3 u{};
  double T = 0.0;
};
GlobalMoments global_moments(const DistributionField& f, const PhaseGrid& grid);

struct DiagnosticsRow {
  double t = 0.0;
  GlobalMoments s1;
  GlobalMoments s2;
  Vec3 p_total{};
  double E_total = 0.0;
  double entropy = 0.0;
  double min_f1 = 0.0;
  double min_f2 = 0.0;
  double clipped_mass = 0.0;
};
DiagnosticsRow diagnostics_row(const SolverState& state, const PhaseGrid& grid);

/// Per-tick quantities consumed by the envelope checks.
struct EnvelopeSample {
  double t = 0.0;
  double Nq1 = 0.0, Nq2 = 0.0;     // sup over cells and velocities of |v|^q f_k
  double N01 = 0.0, N02 = 0.0;     // sup of f_k
  double min_n1 = 0.0, min_n2 = 0.0;
  double min_T1 = 0.0, min_T2 = 0.0;
  double min_T12 = 0.0, min_T21 = 0.0;
  double max_cap1 = 0.0, max_cap2 = 0.0;      // max over cells of T_k + |u_k|^2
  double max_cap12 = 0.0, max_cap21 = 0.0;    // same for the mixture parameters
};
EnvelopeSample envelope_sample(const SolverState& state, const MixtureParameters& p, const PhaseGrid& grid, double q);

struct EnvelopeTrace {
  double q = 0.0;
  std::vector<EnvelopeSample> samples;
};

// ---- driver -------------------------------------------------------------

struct SimulationSettings {
  MixtureParameters params;
  GridConfig grid;
  SpeciesInitial initial1;
  SpeciesInitial initial2;
  double dt = 0.01;
  double t_end = 1.0;
  int cadence = 1;               // diagnostics every `cadence` steps (and at t_end)
  double envelope_q = -1.0;      // < 0: no envelope trace
  SolverOptions options;
};

struct SimulationResult {
  std::vector<DiagnosticsRow> rows;
  EnvelopeTrace envelopes;
  SolverState final_state;
  double max_clipped_per_step = 0.0;
  int steps = 0;
};

/// Called after every step with the new state (for per-step monitors).
using StepObserver = std::function<void(const SolverState&)>;

SimulationResult run_simulation(const SimulationSettings& settings, const StepObserver& observer = {});

// ---- Picard iteration ----------------------------------------------------

struct PicardTrace {
  std::vector<double> distances;  // distance between iterate n and n-1, n = 1, 2, ...
  std::vector<double> ratios;     // distances[n] / distances[n-1]
  bool converged = false;
};

class NonConvergenceError : public NumericsError {
public:
  NonConvergenceError(const std::string& what, PicardTrace trace)
      : NumericsError(what), trace_(std::move(trace)) {}
  const PicardTrace& trace() const { return trace_; }

private:
  PicardTrace trace_;
};

struct PicardResult {
  SolverState state;  // final time level of the converged iterate
  PicardTrace trace;
};

/// Iterates whole trajectories on [0, t_end] with step dt. Iterate 0 holds the initial data
/// constant in time; iterate n is transported and relaxed with densities, frequencies and
/// Maxwellians taken from iterate n-1 at the same time level. The fixed point is the
/// trajectory produced by `step`.
PicardResult picard_solve(const SolverState& initial, const MixtureParameters& p, const PhaseGrid& grid,
                          double t_end, double tol, int max_iter, double dt, const SolverOptions& options = {});

} // namespace bgkmix
