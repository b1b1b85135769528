#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exclusim/dynamics.hpp"
#include "exclusim/ring_config.hpp"
#include "exclusim/velocity.hpp"

namespace exclusim {

// One measured point of a fundamental diagram.
struct FDPoint {
    NormalizationKind kind{};
    double density = 0.0;
    double circumference = 0.0;
    long steps = 0;
    std::uint64_t seed = 0;
    double v_measured = 0.0;
    // Only filled for weak nonneg with a deterministic-common model.
    std::optional<double> v_theory;
    bool in_region = false;  // hysteresis membership, filled by hysteresis_scan
};

// V-range compatible with density rho under the strong normalization:
// max(1/rho - v, 0) <= V <= min(1/rho, v).
struct HysteresisRegion {
    double v;

    double lower(double rho) const;
    double upper(double rho) const;
    bool contains(double rho, double V, double tol = 0.0) const;
    // Region degenerates to a single point when rho <= 1/(2v).
    bool nonempty_interior(double rho) const;
};

struct Cluster {
    int start = 0;   // index of the first particle in the run
    int length = 0;  // particle count
    std::vector<double> gaps;  // the length-1 internal gaps of the run
};

enum class InitFamily { uniform, random_admissible };

std::vector<FDPoint> fd_sweep(NormalizationKind kind, const VelocityModel& model,
                              const std::vector<double>& rho_grid, double L, long T,
                              InitFamily family, const std::vector<std::uint64_t>& seeds,
                              double radius = 0.0);

struct LatticeFDRow {
    double rho;
    double v_measured;
    double v_corollary;  // v if rho <= 1/(v+1), else 1/rho - 1
    double abs_err;
};

double lattice_corollary_velocity(double v, double rho);
std::vector<LatticeFDRow> lattice_fd_check(double v, const std::vector<double>& rho_grid,
                                           double L, long T);

// Maximal runs of particles whose internal gaps are < v, flanked by gaps >= v.
// If every gap is < v the whole ring is one wrap-around cluster of length N.
std::vector<Cluster> cluster_decompose(const RingConfiguration& c, double v);

int max_cluster_length(const RingConfiguration& c, double v);

struct ClusterMonitorResult {
    std::vector<int> max_lengths;  // one entry per recorded configuration
    bool monotone_nonincreasing = true;
    long first_violation = -1;
};

// Requires a trajectory recorded with history (disp_history) plus the start
// configuration; lengths are recomputed per step by replaying displacements.
ClusterMonitorResult cluster_length_monitor(const Trajectory& traj, double v);

double two_gap_velocity(double L, int m, int n, double v, double radius = 0.0);

struct HysteresisPoint {
    double rho;
    int m;
    int n;
    double v_exact;      // n*v/(m+n)
    double v_measured;
    bool in_region;
    double margin;       // distance inside the region (negative = outside)
};

std::vector<HysteresisPoint> hysteresis_scan(double v, double rho, double L, long T,
                                             const std::vector<std::pair<int, int>>& families,
                                             double radius = 0.0);

struct DriftCheckResult {
    int max_abs_change = 0;  // over all steps and windows
    long worst_step = -1;
};

// Windows are (anchor, length) closed intervals on the ring.
DriftCheckResult density_drift_check(const Trajectory& traj,
                                     const std::vector<std::pair<double, double>>& windows);

struct GapDecayResult {
    bool applicable = false;       // hypothesis (some gap < v) held at every step seen
    long hypothesis_broken_at = -1;
    std::optional<long> t_star;    // first step with all gaps < 2v
    bool stayed_below = true;      // once below 2v, never left
};

GapDecayResult strong_max_gap_decay(const Trajectory& traj, double v);

}  // namespace exclusim
