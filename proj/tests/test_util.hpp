#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "exclusim/velocity.hpp"

namespace testutil {

inline exclusim::VelocityModel constant_model(double v) {
    exclusim::VelocityModel m;
    m.kind = exclusim::VelocityModel::Kind::deterministic_common;
    m.cap = v;
    m.sequence.type = exclusim::SequenceSpec::Type::constant;
    m.sequence.value = v;
    return m;
}

inline exclusim::VelocityModel uniform_iid_model(double a, double b, std::uint64_t seed) {
    exclusim::VelocityModel m;
    m.kind = exclusim::VelocityModel::Kind::iid;
    m.cap = b;
    m.seed = seed;
    m.distribution.type = exclusim::DistributionSpec::Type::uniform;
    m.distribution.a = a;
    m.distribution.b = b;
    return m;
}

// Two-sample Kolmogorov-Smirnov p-value (asymptotic tail formula).
inline double ks_p_value(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < na && ib < nb) {
        if (a[ia] <= b[ib]) {
            ++ia;
        } else {
            ++ib;
        }
        d = std::max(d, std::abs(static_cast<double>(ia) / na -
                                 static_cast<double>(ib) / nb));
    }
    const double ne = std::sqrt(static_cast<double>(na) * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        sum += 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Least-squares slope and R^2 of y against t = 0..n-1.
struct LinearFit {
    double slope = 0.0;
    double r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += i;
        sy += y[i];
        sxx += static_cast<double>(i) * i;
        sxy += i * y[i];
        syy += y[i] * y[i];
    }
    const double cov = n * sxy - sx * sy;
    const double varx = n * sxx - sx * sx;
    const double vary = n * syy - sy * sy;
    LinearFit f;
    f.slope = cov / varx;
    f.r2 = vary > 0.0 ? cov * cov / (varx * vary) : 1.0;
    return f;
}

}  // namespace testutil
