#include "exclusim/dynamics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "exclusim/errors.hpp"

namespace exclusim {

const char* to_string(NormalizationKind kind) {
    switch (kind) {
        case NormalizationKind::weak_nonneg: return "weak-nonneg";
        case NormalizationKind::strong_nonneg: return "strong-nonneg";
        case NormalizationKind::weak_both_continuous: return "weak-both-continuous";
        case NormalizationKind::strong_both: return "strong-both";
    }
    return "?";
}

bool is_signed_kind(NormalizationKind kind) {
    return kind == NormalizationKind::weak_both_continuous ||
           kind == NormalizationKind::strong_both;
}

double normalize_weak_nonneg(double v_i, double gap_right) {
    return std::min(v_i, gap_right);
}

double normalize_strong_nonneg(double v_i, double gap_right) {
    return v_i <= gap_right ? v_i : 0.0;
}

bool admissible_signed(double gap_j, double v_j, double v_j1) {
    return gap_j >= std::max({v_j, -v_j1, v_j - v_j1});
}

double normalize_weak_both_continuous(double v_i, double gap_left, double gap_right,
                                      double v_left, double v_right) {
    if (v_i == 0.0) {
        return 0.0;
    }
    if (v_i > 0.0) {
        if (admissible_signed(gap_right, v_i, v_right)) {
            return v_i;
        }
        if (v_right >= 0.0) {
            return gap_right;  // stop at the neighbour's time-t position
        }
        // head-on: meet where continuous motion would collide
        assert(v_i - v_right > 0.0);
        return gap_right / (v_i - v_right) * v_i;
    }
    if (admissible_signed(gap_left, v_left, v_i)) {
        return v_i;
    }
    if (v_left <= 0.0) {
        return -gap_left;
    }
    assert(v_left - v_i > 0.0);
    return gap_left / (v_left - v_i) * v_i;
}

double normalize_strong_both(double v_i, double gap_left, double gap_right, double v_left,
                             double v_right) {
    if (v_i == 0.0) {
        return 0.0;
    }
    if (v_i > 0.0) {
        return admissible_signed(gap_right, v_i, v_right) ? v_i : 0.0;
    }
    return admissible_signed(gap_left, v_left, v_i) ? v_i : 0.0;
}

RingConfiguration step(const RingConfiguration& c, std::span<const double> velocities,
                       NormalizationKind kind, std::vector<double>* displacements) {
    const int n = c.size();
    if (static_cast<int>(velocities.size()) != n) {
        throw InfeasibleSpec("velocity vector length does not match particle count");
    }
    if (!is_signed_kind(kind)) {
        for (double v : velocities) {
            if (v < 0.0) {
                throw SignViolation("negative velocity fed to a nonnegative kind");
            }
        }
    }

    std::vector<double> d(n);
    if (n == 1) {
        // single particle: every normalization reduces to the free walk
        d[0] = velocities[0];
    } else {
        for (int i = 0; i < n; ++i) {
            const int left = (i + n - 1) % n;
            const int right = (i + 1) % n;
            switch (kind) {
                case NormalizationKind::weak_nonneg:
                    d[i] = normalize_weak_nonneg(velocities[i], c.gaps[i]);
                    break;
                case NormalizationKind::strong_nonneg:
                    d[i] = normalize_strong_nonneg(velocities[i], c.gaps[i]);
                    break;
                case NormalizationKind::weak_both_continuous:
                    d[i] = normalize_weak_both_continuous(velocities[i], c.gaps[left],
                                                          c.gaps[i], velocities[left],
                                                          velocities[right]);
                    break;
                case NormalizationKind::strong_both:
                    d[i] = normalize_strong_both(velocities[i], c.gaps[left], c.gaps[i],
                                                 velocities[left], velocities[right]);
                    break;
            }
        }
    }

    RingConfiguration out = c;
    const double slack = c.slack();
    for (int i = 0; i < n; ++i) {
        const int right = (i + 1) % n;
        double g = c.gaps[i] - d[i] + d[right];
        if (n == 1) {
            g = c.gaps[0];
        }
        if (g < 0.0) {
            if (g < -slack) {
                throw PostAdmissibilityFailure("gap " + std::to_string(i) +
                                               " negative after step: " + std::to_string(g));
            }
            g = 0.0;
        }
        out.gaps[i] = g;
        out.positions[i] = wrap_position(c.positions[i] + d[i], c.circumference);
        out.unwrapped_disp[i] = c.unwrapped_disp[i] + d[i];
    }
    if (displacements) {
        *displacements = std::move(d);
    }
    return out;
}

Trajectory evolve(RingConfiguration c, const VelocityModel& model, NormalizationKind kind,
                  const EvolveOptions& opts) {
    if (opts.T < 0 || opts.burn_in < 0 || opts.burn_in > opts.T) {
        throw InfeasibleSpec("evolve needs 0 <= burn_in <= T");
    }
    Trajectory traj;
    traj.start = c;
    traj.steps = opts.T;
    traj.burn_in = opts.burn_in;
    traj.gap_stats.reserve(opts.T);
    if (opts.burn_in == 0) {
        traj.disp_at_burn_in = c.unwrapped_disp;
    }
    if (opts.record_history) {
        traj.disp_history.reserve(opts.T + 1);
        traj.disp_history.push_back(c.unwrapped_disp);
    }

    std::vector<double> vel;
    std::vector<double> disp;
    for (long t = 0; t < opts.T; ++t) {
        model.sample_step(t, c.size(), opts.stream, vel);
        RingConfiguration next = step(c, vel, kind, &disp);
        const auto [lo, hi] = std::minmax_element(next.gaps.begin(), next.gaps.end());
        traj.gap_stats.push_back({*lo, *hi});
        if (!opts.hooks.empty()) {
            StepContext ctx{t, c, next, vel, disp};
            for (const auto& hook : opts.hooks) {
                hook(ctx);
            }
        }
        c = std::move(next);
        if (t + 1 == opts.burn_in) {
            traj.disp_at_burn_in = c.unwrapped_disp;
        }
        if (opts.record_history) {
            traj.disp_history.push_back(c.unwrapped_disp);
        }
    }
    traj.end = std::move(c);
    return traj;
}

double average_velocity(const Trajectory& traj, int i, long t) {
    if (t < 1 || t > traj.steps) {
        throw InfeasibleSpec("average_velocity needs 1 <= t <= T");
    }
    if (t == traj.steps) {
        return traj.end.unwrapped_disp[i] / static_cast<double>(t);
    }
    if (traj.disp_history.empty()) {
        throw InfeasibleSpec("intermediate average_velocity needs record_history");
    }
    return traj.disp_history[t][i] / static_cast<double>(t);
}

double mean_velocity(const Trajectory& traj) {
    const long span = traj.steps - traj.burn_in;
    if (span < 1) {
        throw InfeasibleSpec("no post-burn-in steps to average over");
    }
    double sum = 0.0;
    const int n = traj.end.size();
    for (int i = 0; i < n; ++i) {
        sum += (traj.end.unwrapped_disp[i] - traj.disp_at_burn_in[i]) /
               static_cast<double>(span);
    }
    return sum / n;
}

}  // namespace exclusim
