#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace exclusim {

/// Free space between consecutive particle surfaces, cyclically indexed:
/// gaps[i] sits between particle i and particle i+1 (mod N).
struct GapSequence {
    std::vector<double> gaps;

    double sum() const;
    std::size_t size() const { return gaps.size(); }
    double operator[](std::size_t i) const { return gaps[i]; }
};

/// N hard-core particles of half-width r on a ring of circumference L.
/// Positions live in [0, L) and are cyclically sorted; the index order is
/// the cyclic order (coincident particles keep index order). The gap
/// sequence is carried alongside the positions and is the authoritative
/// representation for all dynamics arithmetic; positions are the mod-L
/// embedding used for windows, tracers and output.
struct RingConfiguration {
    double circumference = 0.0;
    double radius = 0.0;
    bool lattice = false;  // integer-valued positions/gaps, exact arithmetic
    std::vector<double> positions;
    std::vector<double> gaps;
    std::vector<double> unwrapped_disp;

    int size() const { return static_cast<int>(positions.size()); }
    double free_length() const { return circumference - 2.0 * radius * size(); }
    double density() const { return size() / circumference; }
    /// Absolute slack used when checking gap nonnegativity (0 in lattice mode).
    double slack() const { return lattice ? 0.0 : 1e-9 * circumference; }
};

/// x reduced to [0, L).
double wrap_position(double x, double L);

RingConfiguration from_positions(std::vector<double> positions, double r, double L,
                                 bool lattice = false);
GapSequence gaps_of(const RingConfiguration& c);
RingConfiguration from_gaps(const GapSequence& g, double r, double anchor,
                            bool lattice = false);
RingConfiguration radius_transform(const RingConfiguration& c, double r_new);

/// Recompute the gap sequence directly from the mod-L positions (index
/// order defines the unique wrap gap). Used for validation; dynamics keep
/// the stored gaps instead.
GapSequence gaps_from_positions(std::span<const double> positions, double r, double L);

void validate(const RingConfiguration& c);

struct InitSpec {
    enum class Kind { uniform, two_gap, random_admissible, explicit_positions };
    Kind kind = Kind::uniform;
    double L = 0.0;
    double r = 0.0;
    bool lattice = false;
    // uniform / random_admissible
    double rho = 0.0;
    double phase = 0.0;
    std::uint64_t seed = 0;
    // two_gap
    int m = 0, n = 0;
    double g_small = 0.0, g_large = 0.0;
    // explicit
    std::vector<double> positions;
};

RingConfiguration generate(const InitSpec& spec);

/// Evenly interleaved two-gap layout: m gaps g_small, n gaps g_large.
std::vector<double> two_gap_layout(int m, int n, double g_small, double g_large);

/// Choose (g_small, g_large) realizing a two-gap family with m+n particles
/// on length L for speed cap v: 0 <= g_small < v <= g_large < 2v.
/// Returns nothing if no such gap lengths exist.
std::optional<std::pair<double, double>> two_gap_lengths(double L, int m, int n, double v,
                                                         double r = 0.0);

double window_density(const RingConfiguration& c, double a, double b);

struct DensityTrace {
    std::vector<double> lengths;
    std::vector<double> densities;
    double final_value = 0.0;
};

DensityTrace one_sided_density(const RingConfiguration& c, double origin, double max_len,
                               int n_points);

}  // namespace exclusim
