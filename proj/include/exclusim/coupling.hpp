#pragma once

#include <optional>
#include <vector>

#include "exclusim/dynamics.hpp"
#include "exclusim/ring_config.hpp"
#include "exclusim/velocity.hpp"

namespace exclusim {

enum class ProcessTag { x, y };

// Two mutually paired particles plus an adjacent-index defect sitting in the
// segment between them. `defect` indexes into the process named by the tag.
struct Triple {
    ProcessTag tag;
    int pair_x;
    int pair_y;
    int defect;
};

struct DPair {
    int x_index;
    int y_index;
    double dist;  // signed x - y separation, |dist| < v
};

struct ResolveStats {
    long resolutions = 0;
    long direction_violations = 0;  // defects reversing direction inside one pass
};

// Two replicas of equal (N, L, r) evolving synchronously, with a partial
// bijection between their particles. Pair separations are tracked as real
// numbers (not mod L): each pair carries an offset fixed at formation time,
// so W grows without wrapping when the replicas drift apart.
struct CoupledState {
    RingConfiguration x;
    RingConfiguration y;
    double v_cap = 1.0;  // speed cap, bounds d-pair formation distance
    std::vector<int> x2y;  // -1 = x-defect
    std::vector<int> y2x;  // -1 = y-defect
    std::vector<double> x_base;  // lifted coordinate = base + unwrapped_disp
    std::vector<double> y_base;
    std::vector<double> pair_offset;  // per x-index, multiple of L, valid when paired
    ResolveStats last_resolve;
    long total_direction_violations = 0;

    int size() const { return x.size(); }
    double lifted_x(int i) const { return x_base[i] + x.unwrapped_disp[i]; }
    double lifted_y(int j) const { return y_base[j] + y.unwrapped_disp[j]; }
    // Signed separation of pair (i, x2y[i]).
    double pair_distance(int i) const {
        return lifted_x(i) - lifted_y(x2y[i]) - pair_offset[i];
    }
};

struct CouplingMetrics {
    double rho_u = 0.0;  // defects of one process per unit length
    int pair_count = 0;
    int defect_count = 0;  // per process
    std::optional<double> max_pair_dist;
};

// Signed shortest-arc difference a - b on a ring of circumference L,
// in (-L/2, L/2].
double ring_diff(double a, double b, double L);

CoupledState init_coupled(const RingConfiguration& x, const RingConfiguration& y,
                          double v_cap = 1.0);

std::vector<Triple> detect_triples(const CoupledState& s, ProcessTag tag);
std::vector<DPair> detect_dpairs(const CoupledState& s);
bool has_crossing_pairs(const CoupledState& s);

void resolve(CoupledState& s);
void coupled_step(CoupledState& s, const VelocityModel& model, NormalizationKind kind,
                  long t);

CouplingMetrics metrics(const CoupledState& s);
bool is_proper(const CoupledState& s);

}  // namespace exclusim
