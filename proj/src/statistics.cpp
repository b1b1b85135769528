#include "exclusim/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "exclusim/errors.hpp"

namespace exclusim {

double HysteresisRegion::lower(double rho) const { return std::max(1.0 / rho - v, 0.0); }
double HysteresisRegion::upper(double rho) const { return std::min(1.0 / rho, v); }

bool HysteresisRegion::contains(double rho, double V, double tol) const {
    return V >= lower(rho) - tol && V <= upper(rho) + tol;
}

bool HysteresisRegion::nonempty_interior(double rho) const { return rho > 1.0 / (2.0 * v); }

namespace {

bool is_integral(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) <= tol;
}

// Rebuild the gap sequence at step t from the initial gaps and the recorded
// cumulative displacements: gap_i picks up -d_i + d_{i+1} each step.
std::vector<double> gaps_at(const Trajectory& traj, long t) {
    if (traj.disp_history.empty()) {
        throw InfeasibleSpec("per-step replay needs a trajectory recorded with history");
    }
    const int n = traj.start.size();
    const auto& g0 = traj.start.gaps;
    const auto& base = traj.disp_history[0];
    const auto& now = traj.disp_history[t];
    std::vector<double> g(n);
    const double slack = traj.start.slack();
    for (int i = 0; i < n; ++i) {
        const int right = (i + 1) % n;
        double gi = g0[i] - (now[i] - base[i]) + (now[right] - base[right]);
        if (gi < 0.0) {
            if (gi < -slack) {
                throw PostAdmissibilityFailure("negative gap during replay");
            }
            gi = 0.0;
        }
        g[i] = gi;
    }
    return g;
}

std::vector<Cluster> decompose_gaps(const std::vector<double>& gaps, double v) {
    const int n = static_cast<int>(gaps.size());
    std::vector<int> seps;
    for (int i = 0; i < n; ++i) {
        if (gaps[i] >= v) {
            seps.push_back(i);
        }
    }
    std::vector<Cluster> out;
    if (seps.empty()) {
        Cluster whole;
        whole.start = 0;
        whole.length = n;
        whole.gaps = gaps;
        out.push_back(std::move(whole));
        return out;
    }
    // Particles (s_prev+1 .. s) form one cluster for each consecutive pair
    // of separators in cyclic order.
    for (std::size_t k = 0; k < seps.size(); ++k) {
        const int s_prev = seps[(k + seps.size() - 1) % seps.size()];
        const int s = seps[k];
        Cluster cl;
        cl.start = (s_prev + 1) % n;
        cl.length = (s - s_prev + n - 1) % n + 1;
        for (int j = 1; j < cl.length; ++j) {
            cl.gaps.push_back(gaps[(cl.start + j - 1) % n]);
        }
        out.push_back(std::move(cl));
    }
    std::sort(out.begin(), out.end(),
              [](const Cluster& a, const Cluster& b) { return a.start < b.start; });
    return out;
}

long count_in_window(const std::vector<double>& positions, double L, double a, double len) {
    const double a0 = wrap_position(a, L);
    long count = 0;
    for (double x : positions) {
        double d = x - a0;
        if (d < 0.0) {
            d += L;
        }
        if (d <= len) {
            ++count;
        }
    }
    return count;
}

}  // namespace

std::vector<FDPoint> fd_sweep(NormalizationKind kind, const VelocityModel& model,
                              const std::vector<double>& rho_grid, double L, long T,
                              InitFamily family, const std::vector<std::uint64_t>& seeds,
                              double radius) {
    if (T < 1) {
        throw InfeasibleSpec("fd_sweep needs T >= 1");
    }
    std::vector<FDPoint> out;
    for (double rho : rho_grid) {
        if (rho <= 0.0 || !is_integral(rho * L)) {
            throw InfeasibleGrid("rho*L must be a positive integer, got rho=" +
                                 std::to_string(rho));
        }
        for (std::uint64_t seed : seeds) {
            InitSpec spec;
            spec.kind = family == InitFamily::uniform ? InitSpec::Kind::uniform
                                                      : InitSpec::Kind::random_admissible;
            spec.L = L;
            spec.r = radius;
            spec.rho = rho;
            spec.seed = seed;
            RingConfiguration c = generate(spec);

            VelocityModel m = model;
            m.seed = seed;
            EvolveOptions opts;
            opts.T = T;
            opts.burn_in = T / 2;
            Trajectory traj = evolve(std::move(c), m, kind, opts);

            FDPoint p;
            p.kind = kind;
            p.density = rho;
            p.circumference = L;
            p.steps = T;
            p.seed = seed;
            p.v_measured = mean_velocity(traj);
            if (kind == NormalizationKind::weak_nonneg &&
                m.kind == VelocityModel::Kind::deterministic_common) {
                p.v_theory = m.capped_mean(1.0 / rho, T);
            }
            out.push_back(p);
        }
    }
    return out;
}

double lattice_corollary_velocity(double v, double rho) {
    return rho <= 1.0 / (v + 1.0) ? v : 1.0 / rho - 1.0;
}

std::vector<LatticeFDRow> lattice_fd_check(double v, const std::vector<double>& rho_grid,
                                           double L, long T) {
    if (!is_integral(v) || v < 1.0 || !is_integral(L)) {
        throw NonLatticeInput("lattice check needs integer speed >= 1 and integer length");
    }
    std::vector<LatticeFDRow> out;
    for (double rho : rho_grid) {
        const double n_real = rho * L;
        if (!is_integral(n_real) || n_real < 1.0 || rho > 1.0) {
            throw NonLatticeInput("rho*L must be a positive integer with rho <= 1");
        }
        const int n = static_cast<int>(std::llround(n_real));
        // Spread n particles as evenly as the integer lattice allows.
        std::vector<double> positions(n);
        for (int i = 0; i < n; ++i) {
            positions[i] = std::floor(static_cast<double>(i) * L / n);
        }
        RingConfiguration c = from_positions(std::move(positions), 0.5, L, true);

        VelocityModel m;
        m.kind = VelocityModel::Kind::deterministic_common;
        m.cap = v;
        m.sequence.type = SequenceSpec::Type::constant;
        m.sequence.value = v;

        EvolveOptions opts;
        opts.T = T;
        opts.burn_in = T / 2;
        Trajectory traj = evolve(std::move(c), m, NormalizationKind::weak_nonneg, opts);

        LatticeFDRow row;
        row.rho = rho;
        row.v_measured = mean_velocity(traj);
        row.v_corollary = lattice_corollary_velocity(v, rho);
        row.abs_err = std::abs(row.v_measured - row.v_corollary);
        out.push_back(row);
    }
    return out;
}

std::vector<Cluster> cluster_decompose(const RingConfiguration& c, double v) {
    return decompose_gaps(c.gaps, v);
}

int max_cluster_length(const RingConfiguration& c, double v) {
    int best = 0;
    for (const auto& cl : cluster_decompose(c, v)) {
        best = std::max(best, cl.length);
    }
    return best;
}

ClusterMonitorResult cluster_length_monitor(const Trajectory& traj, double v) {
    ClusterMonitorResult res;
    const long last = static_cast<long>(traj.disp_history.size()) - 1;
    if (last < 0) {
        throw InfeasibleSpec("cluster monitor needs a trajectory recorded with history");
    }
    for (long t = 0; t <= last; ++t) {
        const auto gaps = gaps_at(traj, t);
        int best = 0;
        for (const auto& cl : decompose_gaps(gaps, v)) {
            best = std::max(best, cl.length);
        }
        if (!res.max_lengths.empty() && best > res.max_lengths.back() &&
            res.monotone_nonincreasing) {
            res.monotone_nonincreasing = false;
            res.first_violation = t;
        }
        res.max_lengths.push_back(best);
    }
    return res;
}

double two_gap_velocity(double L, int m, int n, double v, double radius) {
    if (m < 0 || n < 0 || m + n < 1) {
        throw InfeasibleSpec("two-gap family needs m, n >= 0 and m+n >= 1");
    }
    if (m > 0 && n > 0 && !two_gap_lengths(L, m, n, v, radius)) {
        throw InfeasibleSpec("no admissible two-gap lengths for these (L, m, n, v)");
    }
    return n * v / static_cast<double>(m + n);
}

std::vector<HysteresisPoint> hysteresis_scan(double v, double rho, double L, long T,
                                             const std::vector<std::pair<int, int>>& families,
                                             double radius) {
    if (rho <= 1.0 / (2.0 * v)) {
        throw InfeasibleSpec("hysteresis scan needs rho > 1/(2v)");
    }
    if (!is_integral(rho * L)) {
        throw InfeasibleGrid("rho*L must be an integer");
    }
    const HysteresisRegion region{v};
    const double tol = v / (rho * L) + 2.0 * v / static_cast<double>(T);
    std::vector<HysteresisPoint> out;
    for (auto [m, n] : families) {
        if (m + n != static_cast<int>(std::llround(rho * L))) {
            throw InfeasibleSpec("family (m, n) does not match rho*L particles");
        }
        double g_small = 0.0, g_large = 0.0;
        if (m > 0 && n > 0) {
            auto lens = two_gap_lengths(L, m, n, v, radius);
            if (!lens) {
                continue;  // family not realizable at this density
            }
            std::tie(g_small, g_large) = *lens;
        } else {
            const double g = (L - 2.0 * radius * (m + n)) / (m + n);
            if (n == 0 && g >= v) {
                continue;  // nominally jammed family is actually free-flowing
            }
            if (m == 0 && (g < v || g >= 2.0 * v)) {
                continue;
            }
            g_small = g_large = g;
        }
        InitSpec spec;
        spec.kind = InitSpec::Kind::two_gap;
        spec.L = L;
        spec.r = radius;
        spec.m = m;
        spec.n = n;
        spec.g_small = g_small;
        spec.g_large = g_large;
        RingConfiguration c = generate(spec);

        VelocityModel model;
        model.kind = VelocityModel::Kind::deterministic_common;
        model.cap = v;
        model.sequence.type = SequenceSpec::Type::constant;
        model.sequence.value = v;

        EvolveOptions opts;
        opts.T = T;
        opts.burn_in = T / 2;
        Trajectory traj = evolve(std::move(c), model, NormalizationKind::strong_nonneg, opts);

        HysteresisPoint p;
        p.rho = rho;
        p.m = m;
        p.n = n;
        p.v_exact = two_gap_velocity(L, m, n, v, radius);
        p.v_measured = mean_velocity(traj);
        p.in_region = region.contains(rho, p.v_measured, tol);
        p.margin = std::min(p.v_measured - region.lower(rho),
                            region.upper(rho) - p.v_measured);
        out.push_back(p);
    }
    return out;
}

DriftCheckResult density_drift_check(const Trajectory& traj,
                                     const std::vector<std::pair<double, double>>& windows) {
    if (traj.disp_history.empty()) {
        throw InfeasibleSpec("drift check needs a trajectory recorded with history");
    }
    const int n = traj.start.size();
    const double L = traj.start.circumference;
    DriftCheckResult res;
    std::vector<double> pos(n);
    std::vector<long> prev(windows.size(), 0);
    const long last = static_cast<long>(traj.disp_history.size()) - 1;
    for (long t = 0; t <= last; ++t) {
        for (int i = 0; i < n; ++i) {
            pos[i] = wrap_position(
                traj.start.positions[i] + traj.disp_history[t][i] - traj.disp_history[0][i],
                L);
        }
        for (std::size_t w = 0; w < windows.size(); ++w) {
            const long count = count_in_window(pos, L, windows[w].first, windows[w].second);
            if (t > 0) {
                const int change = static_cast<int>(std::labs(count - prev[w]));
                if (change > res.max_abs_change) {
                    res.max_abs_change = change;
                    res.worst_step = t;
                }
            }
            prev[w] = count;
        }
    }
    return res;
}

GapDecayResult strong_max_gap_decay(const Trajectory& traj, double v) {
    GapDecayResult res;
    // Per-step extrema: the start configuration, then one entry per step.
    const long total = traj.steps + 1;
    auto extrema = [&](long t) -> std::pair<double, double> {
        if (t == 0) {
            const auto [lo, hi] =
                std::minmax_element(traj.start.gaps.begin(), traj.start.gaps.end());
            return {*lo, *hi};
        }
        const auto& s = traj.gap_stats[t - 1];
        return {s.min_gap, s.max_gap};
    };
    bool hypothesis_ok = true;
    for (long t = 0; t < total; ++t) {
        const auto [min_gap, max_gap] = extrema(t);
        if (min_gap >= v && res.hypothesis_broken_at < 0) {
            res.hypothesis_broken_at = t;
        }
        if (max_gap < 2.0 * v) {
            if (!res.t_star) {
                res.t_star = t;
                hypothesis_ok = res.hypothesis_broken_at < 0;
            }
        } else if (res.t_star) {
            res.stayed_below = false;
        }
    }
    if (!res.t_star) {
        hypothesis_ok = res.hypothesis_broken_at < 0;
    }
    res.applicable = hypothesis_ok;
    return res;
}

}  // namespace exclusim
