#pragma once

#include <cstdint>
#include <vector>

#include "exclusim/rng.hpp"

namespace exclusim {

/// Generator of the common velocity sequence v_0^t for the
/// deterministic-common setting.
struct SequenceSpec {
    enum class Type { constant, periodic, logistic_map };
    Type type = Type::constant;
    double value = 0.0;               // constant
    std::vector<double> values;       // periodic
    double v0 = 0.0;                  // logistic_map start point
};

struct DistributionSpec {
    enum class Type { constant, uniform, discrete };
    Type type = Type::constant;
    double value = 0.0;               // constant
    double a = 0.0, b = 0.0;          // uniform
    std::vector<double> values;       // discrete
    std::vector<double> weights;
};

/// Local-velocity field v_i^t: either one common sequence shared by every
/// particle, or an i.i.d. draw per (i, t). Draws are pure functions of
/// (seed, stream, t, i), so replay is exact under any evaluation order.
struct VelocityModel {
    enum class Kind { deterministic_common, iid };
    Kind kind = Kind::deterministic_common;
    double cap = 1.0;
    bool is_signed = false;
    std::uint64_t seed = 0;
    SequenceSpec sequence;
    DistributionSpec distribution;

    double common_value(long t) const;
    double draw(long t, long i, Stream stream) const;
    void sample_step(long t, int n, Stream stream, std::vector<double>& out) const;
    double capped_mean(double gamma, long T) const;

    double min_value() const { return is_signed ? -cap : 0.0; }

  private:
    // logistic_map values are produced by iterating the map; the cache
    // makes sequential access O(1) per step.
    mutable long cache_t_ = -1;
    mutable double cache_v_ = 0.0;
};

void validate(const VelocityModel& m);

}  // namespace exclusim
