#pragma once

#include <vector>

#include "exclusim/dynamics.hpp"
#include "exclusim/ring_config.hpp"
#include "exclusim/velocity.hpp"

namespace exclusim {

enum class TracerDirection { forward, backward };

struct TracerSample {
    long t;
    double y_unwrapped;
    double v_tr;       // (y_unwrapped - y0) / t, 0 at t = 0
    long encounters;   // particles met so far (jumps performed)
};

struct TracerRun {
    Trajectory flow;
    std::vector<TracerSample> series;  // one entry per step, t = 1..T
    double y0 = 0.0;
    double v_tr_final = 0.0;
};

// Strictly nearest particle center in the chosen cyclic direction.
double tracer_jump(const RingConfiguration& c, double y, TracerDirection dir);

// Skew product: each step the tracer jumps, then the flow advances.
TracerRun tracer_evolve(RingConfiguration c, const VelocityModel& model,
                        NormalizationKind kind, TracerDirection dir, double y0, long T);

}  // namespace exclusim
