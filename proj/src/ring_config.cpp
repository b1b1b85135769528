#include "exclusim/ring_config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exclusim/errors.hpp"
#include "exclusim/rng.hpp"

namespace exclusim {

double GapSequence::sum() const {
    return std::accumulate(gaps.begin(), gaps.end(), 0.0);
}

double wrap_position(double x, double L) {
    double y = std::fmod(x, L);
    if (y < 0.0) {
        y += L;
    }
    // fmod may return L - eps rounding up to L for inputs just below 0
    if (y >= L) {
        y -= L;
    }
    return y;
}

GapSequence gaps_from_positions(std::span<const double> positions, double r, double L) {
    const int n = static_cast<int>(positions.size());
    GapSequence g;
    g.gaps.resize(n);
    if (n == 1) {
        g.gaps[0] = L - 2.0 * r;
        return g;
    }
    // Locate the wrap point: the unique strict decrease in the cyclic
    // index order. Zero decreases means the sequence is sorted and the
    // wrap gap is the one closing N-1 -> 0.
    int wrap = -1;
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        if (positions[j] < positions[i]) {
            if (wrap >= 0) {
                throw AdmissibilityViolation("positions are not cyclically sorted");
            }
            wrap = i;
        }
    }
    if (wrap < 0) {
        wrap = n - 1;
    }
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        double d = positions[j] - positions[i];
        if (i == wrap) {
            d += L;
        }
        g.gaps[i] = d - 2.0 * r;
    }
    return g;
}

void validate(const RingConfiguration& c) {
    if (c.positions.empty()) {
        throw EmptyConfiguration("configuration has no particles");
    }
    if (c.circumference <= 0.0) {
        throw DegenerateCircumference("circumference must be positive");
    }
    const double slack = c.slack();
    double sum = 0.0;
    for (double g : c.gaps) {
        if (g < -slack) {
            throw AdmissibilityViolation("negative gap " + std::to_string(g));
        }
        sum += g;
    }
    const double expected = c.free_length();
    const double tol = c.lattice ? 0.0 : 1e-9 * std::max(1.0, c.circumference);
    if (std::abs(sum - expected) > tol) {
        throw AdmissibilityViolation("gap sum " + std::to_string(sum) +
                                     " does not close the ring (expected " +
                                     std::to_string(expected) + ")");
    }
}

RingConfiguration from_positions(std::vector<double> positions, double r, double L,
                                 bool lattice) {
    if (positions.empty()) {
        throw EmptyConfiguration("empty position list");
    }
    if (L <= 0.0) {
        throw DegenerateCircumference("L must be positive");
    }
    if (r < 0.0) {
        throw AdmissibilityViolation("radius must be nonnegative");
    }
    for (double& x : positions) {
        x = wrap_position(x, L);
    }
    std::stable_sort(positions.begin(), positions.end());

    RingConfiguration c;
    c.circumference = L;
    c.radius = r;
    c.lattice = lattice;
    c.positions = std::move(positions);
    c.gaps = gaps_from_positions(c.positions, r, L).gaps;
    c.unwrapped_disp.assign(c.positions.size(), 0.0);
    validate(c);
    return c;
}

GapSequence gaps_of(const RingConfiguration& c) {
    return GapSequence{c.gaps};
}

RingConfiguration from_gaps(const GapSequence& g, double r, double anchor, bool lattice) {
    if (g.gaps.empty()) {
        throw EmptyConfiguration("empty gap sequence");
    }
    const int n = static_cast<int>(g.size());
    for (double d : g.gaps) {
        if (d < 0.0) {
            throw AdmissibilityViolation("negative gap in from_gaps");
        }
    }
    const double L = g.sum() + 2.0 * r * n;
    if (L <= 0.0) {
        throw DegenerateCircumference("gap sequence closes a nonpositive ring");
    }
    RingConfiguration c;
    c.circumference = L;
    c.radius = r;
    c.lattice = lattice;
    c.positions.resize(n);
    double x = anchor;
    for (int i = 0; i < n; ++i) {
        c.positions[i] = wrap_position(x, L);
        x += g.gaps[i] + 2.0 * r;
    }
    c.gaps = g.gaps;
    c.unwrapped_disp.assign(n, 0.0);
    validate(c);
    return c;
}

RingConfiguration radius_transform(const RingConfiguration& c, double r_new) {
    const double L_new = c.circumference - 2.0 * c.size() * (c.radius - r_new);
    if (L_new <= 0.0) {
        throw DegenerateCircumference("radius transform collapses the ring");
    }
    RingConfiguration out =
        from_gaps(GapSequence{c.gaps}, r_new, c.positions.empty() ? 0.0 : c.positions[0],
                  c.lattice);
    out.unwrapped_disp = c.unwrapped_disp;
    return out;
}

std::vector<double> two_gap_layout(int m, int n, double g_small, double g_large) {
    const int total = m + n;
    std::vector<double> gaps;
    gaps.reserve(total);
    // Bresenham-style interleave keeps the two classes evenly mixed.
    long long acc = 0;
    for (int i = 0; i < total; ++i) {
        const long long next = static_cast<long long>(i + 1) * n / total;
        if (next > acc) {
            gaps.push_back(g_large);
            acc = next;
        } else {
            gaps.push_back(g_small);
        }
    }
    return gaps;
}

std::optional<std::pair<double, double>> two_gap_lengths(double L, int m, int n, double v,
                                                         double r) {
    const int total = m + n;
    if (total <= 0 || v <= 0.0) {
        return std::nullopt;
    }
    const double free_len = L - 2.0 * r * total;
    // Need m*g_s + n*g_l = free_len with g_s = alpha*v in [0, v) and
    // g_l = (1 + beta)*v with beta in [0, 1).
    const double D = free_len / v - n;
    if (D < 0.0 || D >= total) {
        return std::nullopt;
    }
    const double t = D / total;
    return std::make_pair(t * v, (1.0 + t) * v);
}

namespace {

RingConfiguration generate_uniform(const InitSpec& spec) {
    const double nd = spec.rho * spec.L;
    const long long n = std::llround(nd);
    if (n < 1 || std::abs(nd - static_cast<double>(n)) > 1e-9) {
        throw InfeasibleSpec("rho*L must be a positive integer");
    }
    const double spacing = spec.L / static_cast<double>(n);
    if (spacing < 2.0 * spec.r) {
        throw InfeasibleSpec("uniform spacing smaller than particle diameter");
    }
    std::vector<double> pos(n);
    for (long long i = 0; i < n; ++i) {
        pos[i] = wrap_position(spec.phase + spacing * static_cast<double>(i), spec.L);
    }
    return from_positions(std::move(pos), spec.r, spec.L, spec.lattice);
}

RingConfiguration generate_two_gap(const InitSpec& spec) {
    if (spec.m < 0 || spec.n < 0 || spec.m + spec.n < 1) {
        throw InfeasibleSpec("two_gap needs m + n >= 1");
    }
    if (spec.g_small < 0.0 || spec.g_large < 0.0) {
        throw InfeasibleSpec("two_gap gaps must be nonnegative");
    }
    const double sum = spec.m * spec.g_small + spec.n * spec.g_large;
    const double expected = spec.L - 2.0 * spec.r * (spec.m + spec.n);
    if (std::abs(sum - expected) > 1e-9 * std::max(1.0, spec.L)) {
        throw InfeasibleSpec("two_gap gap lengths do not close the ring");
    }
    GapSequence g{two_gap_layout(spec.m, spec.n, spec.g_small, spec.g_large)};
    RingConfiguration c = from_gaps(g, spec.r, spec.phase, spec.lattice);
    // from_gaps derives L from the gaps; rounding in `sum` is confined there
    c.circumference = spec.L;
    return c;
}

RingConfiguration generate_random(const InitSpec& spec) {
    const double nd = spec.rho * spec.L;
    const long long n = std::llround(nd);
    if (n < 1 || std::abs(nd - static_cast<double>(n)) > 1e-9) {
        throw InfeasibleSpec("rho*L must be a positive integer");
    }
    const double mean = 1.0 / spec.rho - 2.0 * spec.r;
    if (mean < 0.0) {
        throw InfeasibleSpec("density too high for particle radius");
    }
    std::vector<double> gaps(n);
    double sum = 0.0;
    for (long long i = 0; i < n; ++i) {
        gaps[i] = exponential(spec.seed, Stream::init, 0, static_cast<std::uint64_t>(i),
                              std::max(mean, 1e-300));
        sum += gaps[i];
    }
    const double target = spec.L - 2.0 * spec.r * n;
    const double scale = sum > 0.0 ? target / sum : 0.0;
    for (double& g : gaps) {
        g *= scale;
    }
    RingConfiguration c = from_gaps(GapSequence{std::move(gaps)}, spec.r, spec.phase,
                                    spec.lattice);
    c.circumference = spec.L;
    return c;
}

}  // namespace

RingConfiguration generate(const InitSpec& spec) {
    switch (spec.kind) {
        case InitSpec::Kind::uniform:
            return generate_uniform(spec);
        case InitSpec::Kind::two_gap:
            return generate_two_gap(spec);
        case InitSpec::Kind::random_admissible:
            return generate_random(spec);
        case InitSpec::Kind::explicit_positions:
            return from_positions(spec.positions, spec.r, spec.L, spec.lattice);
    }
    throw InfeasibleSpec("unknown init kind");
}

double window_density(const RingConfiguration& c, double a, double b) {
    const double len = b - a;
    if (len <= 0.0) {
        throw EmptyWindow("window [a,b] needs b > a");
    }
    if (len > c.circumference) {
        throw EmptyWindow("window longer than the ring");
    }
    const double a0 = wrap_position(a, c.circumference);
    int count = 0;
    for (double x : c.positions) {
        double d = x - a0;
        if (d < 0.0) {
            d += c.circumference;
        }
        if (d <= len) {
            ++count;
        }
    }
    return count / len;
}

DensityTrace one_sided_density(const RingConfiguration& c, double origin, double max_len,
                               int n_points) {
    DensityTrace trace;
    if (n_points < 1 || max_len <= 0.0 || max_len > c.circumference) {
        throw EmptyWindow("bad one-sided density window");
    }
    trace.lengths.reserve(n_points);
    trace.densities.reserve(n_points);
    for (int k = 1; k <= n_points; ++k) {
        const double len = max_len * static_cast<double>(k) / n_points;
        trace.lengths.push_back(len);
        trace.densities.push_back(window_density(c, origin, origin + len));
    }
    trace.final_value = trace.densities.back();
    return trace;
}

}  // namespace exclusim
