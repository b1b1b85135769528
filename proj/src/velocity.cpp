#include "exclusim/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exclusim/errors.hpp"

namespace exclusim {

void validate(const VelocityModel& m) {
    if (m.cap <= 0.0) {
        throw InfeasibleSpec("speed cap must be positive");
    }
    const double lo = m.min_value();
    auto in_range = [&](double v) { return v >= lo && v <= m.cap; };
    if (m.kind == VelocityModel::Kind::deterministic_common) {
        switch (m.sequence.type) {
            case SequenceSpec::Type::constant:
                if (!in_range(m.sequence.value)) {
                    throw InfeasibleSpec("constant sequence value out of range");
                }
                break;
            case SequenceSpec::Type::periodic:
                if (m.sequence.values.empty()) {
                    throw InfeasibleSpec("periodic sequence needs values");
                }
                for (double v : m.sequence.values) {
                    if (!in_range(v)) {
                        throw InfeasibleSpec("periodic sequence value out of range");
                    }
                }
                break;
            case SequenceSpec::Type::logistic_map:
                if (m.sequence.v0 < 0.0 || m.sequence.v0 > m.cap) {
                    throw InfeasibleSpec("logistic start point out of [0, cap]");
                }
                break;
        }
    } else {
        switch (m.distribution.type) {
            case DistributionSpec::Type::constant:
                if (!in_range(m.distribution.value)) {
                    throw InfeasibleSpec("constant distribution value out of range");
                }
                break;
            case DistributionSpec::Type::uniform:
                if (m.distribution.a > m.distribution.b || !in_range(m.distribution.a) ||
                    !in_range(m.distribution.b)) {
                    throw InfeasibleSpec("uniform distribution bounds out of range");
                }
                break;
            case DistributionSpec::Type::discrete:
                if (m.distribution.values.empty() ||
                    m.distribution.values.size() != m.distribution.weights.size()) {
                    throw InfeasibleSpec("discrete distribution needs matching values/weights");
                }
                for (double v : m.distribution.values) {
                    if (!in_range(v)) {
                        throw InfeasibleSpec("discrete distribution value out of range");
                    }
                }
                for (double w : m.distribution.weights) {
                    if (w < 0.0) {
                        throw InfeasibleSpec("discrete weight must be nonnegative");
                    }
                }
                break;
        }
    }
}

double VelocityModel::common_value(long t) const {
    switch (sequence.type) {
        case SequenceSpec::Type::constant:
            return sequence.value;
        case SequenceSpec::Type::periodic:
            return sequence.values[static_cast<std::size_t>(t) % sequence.values.size()];
        case SequenceSpec::Type::logistic_map: {
            // v^{t+1} = cap * f(v^t / cap), f(u) = 4u(1-u)
            long s = 0;
            double v = sequence.v0;
            if (cache_t_ >= 0 && cache_t_ <= t) {
                s = cache_t_;
                v = cache_v_;
            }
            for (; s < t; ++s) {
                const double u = v / cap;
                v = cap * 4.0 * u * (1.0 - u);
            }
            cache_t_ = t;
            cache_v_ = v;
            return v;
        }
    }
    return 0.0;
}

double VelocityModel::draw(long t, long i, Stream stream) const {
    switch (distribution.type) {
        case DistributionSpec::Type::constant:
            return distribution.value;
        case DistributionSpec::Type::uniform: {
            const double u = uniform01(seed, stream, static_cast<std::uint64_t>(t),
                                       static_cast<std::uint64_t>(i));
            return distribution.a + u * (distribution.b - distribution.a);
        }
        case DistributionSpec::Type::discrete: {
            const double total = std::accumulate(distribution.weights.begin(),
                                                 distribution.weights.end(), 0.0);
            double u = uniform01(seed, stream, static_cast<std::uint64_t>(t),
                                 static_cast<std::uint64_t>(i)) *
                       total;
            for (std::size_t k = 0; k < distribution.values.size(); ++k) {
                u -= distribution.weights[k];
                if (u < 0.0) {
                    return distribution.values[k];
                }
            }
            return distribution.values.back();
        }
    }
    return 0.0;
}

void VelocityModel::sample_step(long t, int n, Stream stream,
                                std::vector<double>& out) const {
    out.resize(n);
    if (kind == Kind::deterministic_common) {
        const double v = common_value(t);
        std::fill(out.begin(), out.end(), v);
    } else {
        for (int i = 0; i < n; ++i) {
            out[i] = draw(t, i, stream);
        }
    }
}

double VelocityModel::capped_mean(double gamma, long T) const {
    if (kind != Kind::deterministic_common) {
        throw WrongModelKind("capped_mean requires the deterministic-common model");
    }
    if (gamma <= 0.0 || T < 1) {
        throw InfeasibleSpec("capped_mean needs gamma > 0 and T >= 1");
    }
    double sum = 0.0;
    for (long s = 0; s < T; ++s) {
        sum += std::min(common_value(s), gamma);
    }
    return sum / static_cast<double>(T);
}

}  // namespace exclusim
