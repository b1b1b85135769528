#include "exclusim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "exclusim/errors.hpp"

namespace exclusim {

double ring_diff(double a, double b, double L) {
    double d = std::fmod(a - b, L);
    if (d <= -L / 2.0) {
        d += L;
    } else if (d > L / 2.0) {
        d -= L;
    }
    return d;
}

namespace {

double snap_to_multiple(double raw, double L) {
    return L * std::round(raw / L);
}

// Two pair segments cross iff their endpoints interleave. Both segments are
// short (length < v), so the test is done against the nearest periodic image:
// the second segment is shifted as a whole so its x endpoint lands within
// L/2 of the first. Zero-length degeneracies count as non-crossing.
bool segments_cross(double ax, double ay, double bx, double by, double L) {
    const double shift = ring_diff(bx, ax, L) - (bx - ax);
    bx += shift;
    by += shift;
    return (ax - bx) * (ay - by) < 0.0;
}

// Lifted coordinates anchored so index order is increasing, starting from
// the mod-L position of particle 0.
std::vector<double> build_base(const RingConfiguration& c) {
    const int n = c.size();
    std::vector<double> base(n);
    double cur = c.positions[0];
    base[0] = cur - c.unwrapped_disp[0];
    for (int i = 1; i < n; ++i) {
        cur += c.gaps[i - 1] + 2.0 * c.radius;
        base[i] = cur - c.unwrapped_disp[i];
    }
    return base;
}

// True when u lies strictly between 0 and w (either sign of w).
bool strictly_between(double u, double w) {
    return w > 0.0 ? (u > 0.0 && u < w) : (u < 0.0 && u > w);
}

std::optional<Triple> first_triple(const CoupledState& s, ProcessTag tag) {
    const int n = s.size();
    const double L = s.x.circumference;
    for (int p = 0; p < n; ++p) {
        const int q = tag == ProcessTag::x ? s.x2y[p] : s.y2x[p];
        if (q < 0) {
            continue;
        }
        const auto& own = tag == ProcessTag::x ? s.x : s.y;
        const double pair_pos = own.positions[p];
        const int xi = tag == ProcessTag::x ? p : q;
        const double w = tag == ProcessTag::x ? -s.pair_distance(xi) : s.pair_distance(xi);
        for (int dn : {-1, +1}) {
            const int d = (p + dn + n) % n;
            if (dn > 0 && d == (p - 1 + n) % n) {
                continue;  // n == 2: both neighbours are the same particle
            }
            const bool unpaired = tag == ProcessTag::x ? s.x2y[d] < 0 : s.y2x[d] < 0;
            if (!unpaired || d == p) {
                continue;
            }
            const double u = ring_diff(own.positions[d], pair_pos, L);
            if (strictly_between(u, w)) {
                Triple tr;
                tr.tag = tag;
                tr.pair_x = tag == ProcessTag::x ? p : q;
                tr.pair_y = tag == ProcessTag::x ? q : p;
                tr.defect = d;
                return tr;
            }
        }
    }
    return std::nullopt;
}

int cyclic_key(int i, int n) { return std::min(i, n - i); }

}  // namespace

CoupledState init_coupled(const RingConfiguration& x, const RingConfiguration& y,
                          double v_cap) {
    if (x.size() != y.size() || x.circumference != y.circumference ||
        x.radius != y.radius || x.lattice != y.lattice) {
        throw MismatchedReplicas("coupled replicas need equal N, L, r");
    }
    CoupledState s;
    s.x = x;
    s.y = y;
    s.v_cap = v_cap;
    s.x2y.assign(x.size(), -1);
    s.y2x.assign(y.size(), -1);
    s.x_base = build_base(s.x);
    s.y_base = build_base(s.y);
    s.pair_offset.assign(x.size(), 0.0);
    return s;
}

std::vector<Triple> detect_triples(const CoupledState& s, ProcessTag tag) {
    if (has_crossing_pairs(s)) {
        throw CrossingDetected("triple detection requires no crossing pairs");
    }
    std::vector<Triple> out;
    const int n = s.size();
    const double L = s.x.circumference;
    for (int p = 0; p < n; ++p) {
        const int q = tag == ProcessTag::x ? s.x2y[p] : s.y2x[p];
        if (q < 0) {
            continue;
        }
        const auto& own = tag == ProcessTag::x ? s.x : s.y;
        const int xi = tag == ProcessTag::x ? p : q;
        const double w = tag == ProcessTag::x ? -s.pair_distance(xi) : s.pair_distance(xi);
        for (int dn : {-1, +1}) {
            const int d = (p + dn + n) % n;
            if (dn > 0 && d == (p - 1 + n) % n) {
                continue;  // n == 2: both neighbours are the same particle
            }
            const bool unpaired = tag == ProcessTag::x ? s.x2y[d] < 0 : s.y2x[d] < 0;
            if (!unpaired || d == p) {
                continue;
            }
            if (strictly_between(ring_diff(own.positions[d], own.positions[p], L), w)) {
                Triple tr;
                tr.tag = tag;
                tr.pair_x = tag == ProcessTag::x ? p : q;
                tr.pair_y = tag == ProcessTag::x ? q : p;
                tr.defect = d;
                out.push_back(tr);
            }
        }
    }
    return out;
}

std::vector<DPair> detect_dpairs(const CoupledState& s) {
    const int n = s.size();
    const double L = s.x.circumference;
    std::vector<int> xdef, ydef;
    for (int i = 0; i < n; ++i) {
        if (s.x2y[i] < 0) {
            xdef.push_back(i);
        }
        if (s.y2x[i] < 0) {
            ydef.push_back(i);
        }
    }
    std::vector<DPair> out;
    for (int i : xdef) {
        // closest y-defect by ring distance; ties broken by smaller index
        int best = -1;
        double best_abs = std::numeric_limits<double>::infinity();
        double best_d = 0.0;
        for (int j : ydef) {
            const double d = ring_diff(s.x.positions[i], s.y.positions[j], L);
            if (std::abs(d) < best_abs) {
                best_abs = std::abs(d);
                best = j;
                best_d = d;
            }
        }
        if (best < 0 || best_abs >= s.v_cap) {
            continue;
        }
        DPair cand{i, best, best_d};
        // the open segment between the defects must hold no other defect
        bool clean = true;
        const double xi = s.x.positions[i];
        for (int k : xdef) {
            if (k != i && strictly_between(ring_diff(s.x.positions[k], xi, L), -cand.dist)) {
                clean = false;
                break;
            }
        }
        for (int j : ydef) {
            if (clean && j != best &&
                strictly_between(ring_diff(s.y.positions[j], xi, L), -cand.dist)) {
                clean = false;
            }
        }
        if (!clean) {
            continue;
        }
        // must not cross any mutually paired pair
        bool crossed = false;
        const double ax = s.lifted_x(i);
        const double ay = ax - cand.dist;  // candidate's lifted y endpoint
        for (int p = 0; p < n && !crossed; ++p) {
            if (s.x2y[p] >= 0) {
                crossed = segments_cross(ax, ay, s.lifted_x(p),
                                         s.lifted_x(p) - s.pair_distance(p), L);
            }
        }
        if (!crossed) {
            out.push_back(cand);
        }
    }
    std::sort(out.begin(), out.end(), [n](const DPair& a, const DPair& b) {
        const int ka = cyclic_key(a.x_index, n);
        const int kb = cyclic_key(b.x_index, n);
        return ka != kb ? ka < kb : a.x_index < b.x_index;
    });
    return out;
}

bool has_crossing_pairs(const CoupledState& s) {
    const int n = s.size();
    const double L = s.x.circumference;
    std::vector<int> paired;
    for (int i = 0; i < n; ++i) {
        if (s.x2y[i] >= 0) {
            paired.push_back(i);
        }
    }
    for (std::size_t a = 0; a < paired.size(); ++a) {
        for (std::size_t b = a + 1; b < paired.size(); ++b) {
            const int i = paired[a], k = paired[b];
            if (segments_cross(s.lifted_x(i), s.lifted_x(i) - s.pair_distance(i),
                               s.lifted_x(k), s.lifted_x(k) - s.pair_distance(k), L)) {
                return true;
            }
        }
    }
    return false;
}

namespace {

// Transfer the x-side of pair (p, q) to the adjacent defect d, keeping the
// tracked separation continuous: W_new = W_old + (x_d - x_p).
void transfer_x(CoupledState& s, int p, int q, int d) {
    const double L = s.x.circumference;
    const double shift = ring_diff(s.x.positions[d], s.x.positions[p], L);
    const double w_new = s.pair_distance(p) + shift;
    s.x2y[p] = -1;
    s.x2y[d] = q;
    s.y2x[q] = d;
    s.pair_offset[d] =
        snap_to_multiple(s.lifted_x(d) - s.lifted_y(q) - w_new, L);
}

// Transfer the y-side of pair (p, q) to the adjacent y-defect d:
// W_new = W_old + (y_q - y_d).
void transfer_y(CoupledState& s, int p, int q, int d) {
    const double L = s.y.circumference;
    const double shift = ring_diff(s.y.positions[q], s.y.positions[d], L);
    const double w_new = s.pair_distance(p) + shift;
    s.y2x[q] = -1;
    s.y2x[d] = p;
    s.x2y[p] = d;
    s.pair_offset[p] =
        snap_to_multiple(s.lifted_x(p) - s.lifted_y(d) - w_new, L);
}

}  // namespace

void resolve(CoupledState& s) {
    const int n = s.size();
    const long budget = 4L * n;
    ResolveStats stats;
    const double L = s.x.circumference;

    // Direction bookkeeping: defect index -> last movement direction (+-1).
    std::unordered_map<int, int> xdir, ydir;
    auto note_move = [&](std::unordered_map<int, int>& dirs, int from, int to) {
        const int dir = to == (from + 1) % n ? +1 : -1;
        auto it = dirs.find(from);
        if (it != dirs.end() && it->second != dir) {
            ++stats.direction_violations;
        }
        dirs.erase(from);
        dirs[to] = dir;
    };

    auto spend = [&] {
        if (++stats.resolutions > budget) {
            s.last_resolve = stats;
            throw RecursionBudgetExceeded("resolution count exceeded 4N");
        }
    };

    // Forming a d-pair can expose a new triple next to the fresh pair, so the
    // passes interleave until a full sweep changes nothing.
    bool changed = true;
    while (changed) {
        changed = false;
        while (auto tr = first_triple(s, ProcessTag::x)) {
            spend();
            transfer_x(s, tr->pair_x, tr->pair_y, tr->defect);
            note_move(xdir, tr->defect, tr->pair_x);
            changed = true;
        }
        while (auto tr = first_triple(s, ProcessTag::y)) {
            spend();
            transfer_y(s, tr->pair_x, tr->pair_y, tr->defect);
            note_move(ydir, tr->defect, tr->pair_y);
            changed = true;
        }
        auto dpairs = detect_dpairs(s);
        if (!dpairs.empty()) {
            spend();
            const DPair& dp = dpairs.front();
            s.x2y[dp.x_index] = dp.y_index;
            s.y2x[dp.y_index] = dp.x_index;
            s.pair_offset[dp.x_index] = snap_to_multiple(
                s.lifted_x(dp.x_index) - s.lifted_y(dp.y_index) - dp.dist, L);
            changed = true;
        }
    }

    s.last_resolve = stats;
    s.total_direction_violations += stats.direction_violations;
}

void coupled_step(CoupledState& s, const VelocityModel& model, NormalizationKind kind,
                  long t) {
    const int n = s.size();
    std::vector<double> vx(n), vy(n);
    if (model.kind == VelocityModel::Kind::deterministic_common) {
        const double v = model.common_value(t);
        std::fill(vx.begin(), vx.end(), v);
        std::fill(vy.begin(), vy.end(), v);
    } else {
        for (int i = 0; i < n; ++i) {
            if (s.x2y[i] >= 0) {
                const double v = model.draw(t, i, Stream::pair_draw);
                vx[i] = v;
                vy[s.x2y[i]] = v;
            } else {
                vx[i] = model.draw(t, i, Stream::x_defect);
            }
        }
        for (int j = 0; j < n; ++j) {
            if (s.y2x[j] < 0) {
                vy[j] = model.draw(t, j, Stream::y_defect);
            }
        }
    }
    s.x = step(s.x, vx, kind);
    s.y = step(s.y, vy, kind);
    resolve(s);
}

CouplingMetrics metrics(const CoupledState& s) {
    CouplingMetrics m;
    const int n = s.size();
    for (int i = 0; i < n; ++i) {
        if (s.x2y[i] >= 0) {
            ++m.pair_count;
            const double w = std::abs(s.pair_distance(i));
            if (!m.max_pair_dist || w > *m.max_pair_dist) {
                m.max_pair_dist = w;
            }
        } else {
            ++m.defect_count;
        }
    }
    m.rho_u = m.defect_count / s.x.circumference;
    return m;
}

bool is_proper(const CoupledState& s) {
    if (has_crossing_pairs(s)) {
        return false;
    }
    if (first_triple(s, ProcessTag::x) || first_triple(s, ProcessTag::y)) {
        return false;
    }
    return detect_dpairs(s).empty();
}

}  // namespace exclusim
