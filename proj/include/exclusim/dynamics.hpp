#pragma once

#include <functional>
#include <span>
#include <vector>

#include "exclusim/ring_config.hpp"
#include "exclusim/velocity.hpp"

namespace exclusim {

/// Conflict-resolution rule applied to the desired local velocities.
/// All four are nonanticipating: the displacement of particle i depends
/// only on the time-t gaps and velocities of i and its immediate
/// neighbours, and lies in [min(0, v_i), max(0, v_i)].
enum class NormalizationKind {
    weak_nonneg,
    strong_nonneg,
    weak_both_continuous,
    strong_both,
};

const char* to_string(NormalizationKind kind);
bool is_signed_kind(NormalizationKind kind);

double normalize_weak_nonneg(double v_i, double gap_right);
double normalize_strong_nonneg(double v_i, double gap_right);

/// No conflict across gap j: gap_j >= max(v_j, -v_{j+1}, v_j - v_{j+1}).
bool admissible_signed(double gap_j, double v_j, double v_j1);

double normalize_weak_both_continuous(double v_i, double gap_left, double gap_right,
                                      double v_left, double v_right);
double normalize_strong_both(double v_i, double gap_left, double gap_right,
                             double v_left, double v_right);

/// One synchronous update of every particle from time-t data.
/// Returns the applied displacements through `displacements` when non-null.
RingConfiguration step(const RingConfiguration& c, std::span<const double> velocities,
                       NormalizationKind kind, std::vector<double>* displacements = nullptr);

struct StepStats {
    double min_gap = 0.0;
    double max_gap = 0.0;
};

struct Trajectory {
    RingConfiguration start;
    RingConfiguration end;
    long steps = 0;
    long burn_in = 0;
    std::vector<StepStats> gap_stats;              // one entry per step
    std::vector<double> disp_at_burn_in;           // unwrapped snapshot at t = burn_in
    std::vector<std::vector<double>> disp_history; // optional, per-step unwrapped
};

struct StepContext {
    long t = 0;  // step just applied took the state from t to t+1
    const RingConfiguration& before;
    const RingConfiguration& after;
    std::span<const double> velocities;
    std::span<const double> displacements;
};

using StepHook = std::function<void(const StepContext&)>;

struct EvolveOptions {
    long T = 0;
    long burn_in = 0;
    bool record_history = false;
    Stream stream = Stream::flow;
    std::vector<StepHook> hooks;
};

Trajectory evolve(RingConfiguration c, const VelocityModel& model, NormalizationKind kind,
                  const EvolveOptions& opts);

/// V(x, i, t) from the unwrapped displacement, never from mod-L positions.
double average_velocity(const Trajectory& traj, int i, long t);

/// Mean over particles of the post-burn-in average velocity.
double mean_velocity(const Trajectory& traj);

}  // namespace exclusim
