#include "exclusim/ns_model.hpp"

#include <algorithm>

#include "exclusim/errors.hpp"
#include "exclusim/rng.hpp"

namespace exclusim {

NSState make_ns_state(int n, double v_cap, const AccelSpec& accel, double u0) {
    if (accel.a <= 0.0) {
        throw InfeasibleSpec("acceleration lower bound must be positive");
    }
    if (accel.kind == AccelSpec::Kind::iid_uniform && accel.a_max < accel.a) {
        throw InfeasibleSpec("acceleration range needs a_max >= a");
    }
    if (u0 < 0.0 || u0 > v_cap) {
        throw InfeasibleSpec("carried velocity must start in [0, v]");
    }
    NSState s;
    s.v_cap = v_cap;
    s.accel = accel;
    s.u.assign(n, u0);
    return s;
}

RingConfiguration ns_step(const RingConfiguration& c, NSState& s, NormalizationKind kind,
                          long t) {
    if (is_signed_kind(kind)) {
        throw WrongModelKind("carried-velocity dynamics support nonnegative kinds only");
    }
    const int n = c.size();
    if (static_cast<int>(s.u.size()) != n) {
        throw InfeasibleSpec("carried-velocity vector length does not match config");
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        double a = s.accel.a;
        if (s.accel.kind == AccelSpec::Kind::iid_uniform) {
            a = s.accel.a +
                (s.accel.a_max - s.accel.a) *
                    uniform01(s.accel.seed, Stream::accel, t, i);
        }
        w[i] = std::min(s.v_cap, s.u[i] + a);
    }
    std::vector<double> d;
    RingConfiguration next = step(c, w, kind, &d);
    s.u = std::move(d);  // realized displacement is the next carried velocity
    return next;
}

}  // namespace exclusim
