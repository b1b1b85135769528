#pragma once

#include <vector>

#include "exclusim/dynamics.hpp"
#include "exclusim/ring_config.hpp"
#include "exclusim/velocity.hpp"

namespace exclusim {

struct AccelSpec {
    enum class Kind { constant, iid_uniform };
    Kind kind = Kind::constant;
    double a = 0.0;      // constant value / lower bound, must be > 0
    double a_max = 0.0;  // upper bound for iid_uniform
    std::uint64_t seed = 0;
};

// Per-particle carried velocity: each step a particle proposes
// w_i = min(v, u_i + a_i), the normalization turns that into the realized
// displacement, and the displacement becomes the next carried velocity.
struct NSState {
    double v_cap = 1.0;
    AccelSpec accel;
    std::vector<double> u;  // in [0, v_cap]
};

NSState make_ns_state(int n, double v_cap, const AccelSpec& accel, double u0 = 0.0);

// One synchronous update; kind must be one of the nonnegative normalizations.
RingConfiguration ns_step(const RingConfiguration& c, NSState& s, NormalizationKind kind,
                          long t);

}  // namespace exclusim
