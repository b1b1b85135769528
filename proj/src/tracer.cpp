#include "exclusim/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exclusim/errors.hpp"

namespace exclusim {

namespace {

void require_strict_order(const RingConfiguration& c) {
    if (c.radius > 0.0) {
        return;  // positive radius forbids coincident centers by admissibility
    }
    for (double g : c.gaps) {
        if (g <= 0.0) {
            throw DegenerateOrdering("coincident particle centers break tracer jumps");
        }
    }
}

}  // namespace

double tracer_jump(const RingConfiguration& c, double y, TracerDirection dir) {
    require_strict_order(c);
    const double L = c.circumference;
    const double y0 = wrap_position(y, L);
    double best = std::numeric_limits<double>::infinity();
    double target = y0;
    for (double x : c.positions) {
        double d = dir == TracerDirection::forward ? x - y0 : y0 - x;
        d = std::fmod(d, L);
        if (d < 0.0) {
            d += L;
        }
        if (d > 0.0 && d < best) {
            best = d;
            target = x;
        }
    }
    if (!std::isfinite(best)) {
        throw EmptyConfiguration("tracer jump needs at least one particle away from y");
    }
    return target;
}

TracerRun tracer_evolve(RingConfiguration c, const VelocityModel& model,
                        NormalizationKind kind, TracerDirection dir, double y0, long T) {
    require_strict_order(c);
    TracerRun run;
    run.y0 = y0;
    run.flow.start = c;
    run.flow.steps = T;
    run.flow.burn_in = 0;
    run.flow.disp_at_burn_in = c.unwrapped_disp;
    run.series.reserve(T);

    const double L = c.circumference;
    double y = wrap_position(y0, L);
    double y_un = y0;
    long encounters = 0;

    std::vector<double> vel;
    for (long t = 0; t < T; ++t) {
        // jump on the current configuration, then advance the flow
        const double target = tracer_jump(c, y, dir);
        double d = dir == TracerDirection::forward ? target - y : y - target;
        d = std::fmod(d, L);
        if (d < 0.0) {
            d += L;
        }
        y_un += dir == TracerDirection::forward ? d : -d;
        y = target;
        ++encounters;

        model.sample_step(t, c.size(), Stream::flow, vel);
        c = step(c, vel, kind);
        const auto [lo, hi] = std::minmax_element(c.gaps.begin(), c.gaps.end());
        run.flow.gap_stats.push_back({*lo, *hi});

        run.series.push_back({t + 1, y_un, (y_un - y0) / (t + 1), encounters});
    }
    run.flow.end = std::move(c);
    run.v_tr_final = run.series.empty() ? 0.0 : run.series.back().v_tr;
    return run;
}

}  // namespace exclusim
