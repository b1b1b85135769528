#include "exclusim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>

#include "json.hpp"

#include "exclusim/coupling.hpp"
#include "exclusim/errors.hpp"
#include "exclusim/statistics.hpp"

namespace exclusim {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

long check_stride(CheckLevel level) {
    switch (level) {
        case CheckLevel::off: return 0;
        case CheckLevel::sampled: return 97;
        case CheckLevel::every_step: return 1;
    }
    return 0;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
        if (!out_) {
            throw IOFailure("cannot open output file: " + path.string());
        }
        out_ << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ << (i ? "," : "") << cells[i];
        }
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

double gap_bound_factor(NormalizationKind kind) {
    switch (kind) {
        case NormalizationKind::weak_nonneg: return 1.0;
        case NormalizationKind::strong_nonneg: return 2.0;
        default: return 4.0;
    }
}

// Hook asserting gap_i <= max(factor * v, gap_i^0) while a run evolves.
struct GapBoundMonitor {
    std::vector<double> initial_gaps;
    double cap_bound;
    long stride;
    double worst_margin = std::numeric_limits<double>::infinity();

    StepHook hook() {
        return [this](const StepContext& ctx) {
            if (stride == 0 || ctx.t % stride != 0) {
                return;
            }
            for (std::size_t i = 0; i < ctx.after.gaps.size(); ++i) {
                const double bound = std::max(cap_bound, initial_gaps[i]);
                worst_margin = std::min(worst_margin, bound - ctx.after.gaps[i]);
            }
        };
    }
};

std::uint64_t replica_seed(std::uint64_t seed) { return seed ^ 0x5bf0a8dcull << 17; }

void apply_seed_override(RunConfig& c) {
    if (const char* env = std::getenv("EXCLUSIM_SEED")) {
        c.seeds = {std::strtoull(env, nullptr, 10)};
    }
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
    nlohmann::json j;
    j["exit_code"] = report.exit_code;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["worst_margin"] = c.margin;
        if (!c.note.empty()) {
            cj["note"] = c.note;
        }
        j["checks"].push_back(cj);
    }
    j["artifacts"] = report.artifacts;
    std::ofstream out(dir / "report.json");
    if (!out) {
        throw IOFailure("cannot write report.json");
    }
    out << j.dump(2) << "\n";
}

void add_check(RunReport& rep, const std::string& name, bool pass, double margin,
               const std::string& note = "") {
    rep.checks.push_back({name, pass, margin, note});
    if (!pass) {
        rep.exit_code = 2;
    }
}

void cmd_simulate(const RunConfig& c, const std::filesystem::path& dir, RunReport& rep) {
    CsvWriter csv(dir / "simulate.csv", "kind,rho,L,T,seed,V");
    rep.artifacts.push_back("simulate.csv");
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed : c.seeds) {
        RingConfiguration cfg = generate(c.init_spec(seed));
        VelocityModel model = c.model;
        model.seed = seed;
        GapBoundMonitor monitor{cfg.gaps, gap_bound_factor(c.kind) * model.cap,
                                check_stride(c.check)};
        EvolveOptions opts;
        opts.T = c.T;
        opts.burn_in = c.effective_burn_in();
        if (monitor.stride > 0) {
            opts.hooks.push_back(monitor.hook());
        }
        Trajectory traj = evolve(std::move(cfg), model, c.kind, opts);
        csv.row({to_string(c.kind), num(c.rho), num(c.L), std::to_string(c.T),
                 std::to_string(seed), num(mean_velocity(traj))});
        worst = std::min(worst, monitor.worst_margin);
    }
    if (check_stride(c.check) > 0) {
        add_check(rep, "gap_bound", worst >= -1e-9 * c.L, worst);
    }
}

void cmd_fd_sweep(const RunConfig& c, const std::filesystem::path& dir, RunReport& rep,
                  int workers) {
    const InitFamily family = c.init_family == InitSpec::Kind::uniform
                                  ? InitFamily::uniform
                                  : InitFamily::random_admissible;
    std::vector<std::future<std::vector<FDPoint>>> cells;
    auto launch = workers > 1 ? std::launch::async : std::launch::deferred;
    for (double rho : c.rho_grid) {
        cells.push_back(std::async(launch, [&, rho] {
            return fd_sweep(c.kind, c.model, {rho}, c.L, c.T, family, c.seeds, c.r);
        }));
    }
    CsvWriter csv(dir / "fd_sweep.csv",
                  "kind,rho,L,T,seed,V_measured,V_theory,abs_err,in_region");
    rep.artifacts.push_back("fd_sweep.csv");
    const HysteresisRegion region{c.model.cap};
    double worst_theory = 0.0;
    bool have_theory = false;
    for (auto& cell : cells) {
        for (const FDPoint& p : cell.get()) {
            const double theory = p.v_theory.value_or(
                std::numeric_limits<double>::quiet_NaN());
            const double abs_err = p.v_theory ? std::abs(p.v_measured - theory) : 0.0;
            const bool in_region =
                region.contains(p.density, p.v_measured,
                                c.model.cap / (p.density * c.L) + 2.0 * c.model.cap / c.T);
            csv.row({to_string(p.kind), num(p.density), num(p.circumference),
                     std::to_string(p.steps), std::to_string(p.seed), num(p.v_measured),
                     p.v_theory ? num(theory) : "", p.v_theory ? num(abs_err) : "",
                     in_region ? "1" : "0"});
            if (p.v_theory) {
                have_theory = true;
                worst_theory = std::max(worst_theory, abs_err);
            }
        }
    }
    if (have_theory) {
        add_check(rep, "fd_theory_abs_err", worst_theory <= (c.L + c.model.cap) / c.T,
                  (c.L + c.model.cap) / c.T - worst_theory);
    }
}

void cmd_couple(const RunConfig& c, const std::filesystem::path& dir, RunReport& rep) {
    const long stride = check_stride(c.check);
    double worst_w = -std::numeric_limits<double>::infinity();
    bool all_proper = true;
    bool pairs_monotone = true;
    for (std::uint64_t seed : c.seeds) {
        RingConfiguration x = generate(c.init_spec(seed));
        RingConfiguration y;
        if (c.couple_offset) {
            std::vector<double> shifted = x.positions;
            for (double& p : shifted) {
                p = wrap_position(p + *c.couple_offset, c.L);
            }
            y = from_positions(std::move(shifted), c.r, c.L, c.lattice_mode);
        } else {
            y = generate(c.init_spec(replica_seed(seed)));
        }
        CoupledState s = init_coupled(x, y, c.model.cap);
        VelocityModel model = c.model;
        model.seed = seed;

        CsvWriter csv(dir / ("couple_seed" + std::to_string(seed) + ".csv"),
                      "t,rho_u,pair_count,max_pair_dist");
        rep.artifacts.push_back("couple_seed" + std::to_string(seed) + ".csv");
        int last_pairs = 0;
        for (long t = 0; t < c.T; ++t) {
            coupled_step(s, model, c.kind, t);
            CouplingMetrics m = metrics(s);
            csv.row({std::to_string(t + 1), num(m.rho_u), std::to_string(m.pair_count),
                     m.max_pair_dist ? num(*m.max_pair_dist) : ""});
            if (m.pair_count < last_pairs) {
                pairs_monotone = false;
            }
            last_pairs = m.pair_count;
            if (m.max_pair_dist) {
                worst_w = std::max(worst_w, *m.max_pair_dist);
            }
            if (stride > 0 && t % stride == 0 && !is_proper(s)) {
                all_proper = false;
            }
        }
    }
    if (c.kind == NormalizationKind::weak_nonneg &&
        worst_w > -std::numeric_limits<double>::infinity()) {
        add_check(rep, "pair_distance_bound", worst_w <= c.model.cap + 1e-9,
                  c.model.cap - worst_w);
    }
    if (stride > 0) {
        add_check(rep, "post_resolve_proper", all_proper, all_proper ? 0.0 : -1.0);
    }
    add_check(rep, "pair_count_monotone", pairs_monotone, pairs_monotone ? 0.0 : -1.0);
}

void cmd_tracer(const RunConfig& c, const std::filesystem::path& dir, RunReport& rep) {
    RingConfiguration cfg = generate(c.init_spec(c.seeds.front()));
    const double v_flow = std::min(c.model.cap, 1.0 / c.rho);
    // Default start: one flow displacement behind a particle, the phase at
    // which the backward counting identity holds step-by-step.
    const double y0 = c.tracer_y0 ? *c.tracer_y0
                                  : wrap_position(cfg.positions[0] - v_flow, c.L);
    TracerRun run = tracer_evolve(std::move(cfg), c.model, c.kind, c.tracer_direction,
                                  y0, c.T);
    CsvWriter csv(dir / "tracer.csv", "t,y_unwrapped,V_tr,encounters");
    rep.artifacts.push_back("tracer.csv");
    for (const auto& s : run.series) {
        csv.row({std::to_string(s.t), num(s.y_unwrapped), num(s.v_tr),
                 std::to_string(s.encounters)});
    }
}

void cmd_hysteresis(const RunConfig& c, const std::filesystem::path& dir, RunReport& rep) {
    CsvWriter csv(dir / "hysteresis.csv",
                  "kind,rho,L,T,seed,V_measured,V_theory,abs_err,in_region");
    rep.artifacts.push_back("hysteresis.csv");
    double worst = std::numeric_limits<double>::infinity();
    bool all_in = true;
    for (double rho : c.rho_grid) {
        const double L = c.L;
        const int N = static_cast<int>(std::llround(rho * L));
        std::vector<std::pair<int, int>> families = c.families;
        if (families.empty()) {
            for (int n = 0; n <= N; ++n) {
                families.emplace_back(N - n, n);
            }
        }
        for (const auto& p : hysteresis_scan(c.model.cap, rho, L, c.T, families, c.r)) {
            csv.row({"strong-nonneg", num(rho), num(L), std::to_string(c.T), "0",
                     num(p.v_measured), num(p.v_exact),
                     num(std::abs(p.v_measured - p.v_exact)), p.in_region ? "1" : "0"});
            worst = std::min(worst, p.margin);
            all_in = all_in && p.in_region;
        }
    }
    add_check(rep, "hysteresis_region_membership", all_in, worst);
}

void cmd_ns(const RunConfig& c, const std::filesystem::path& dir, RunReport& rep) {
    CsvWriter csv(dir / "ns.csv", "kind,rho,L,T,seed,V");
    rep.artifacts.push_back("ns.csv");
    double worst_u = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed : c.seeds) {
        RingConfiguration cfg = generate(c.init_spec(seed));
        AccelSpec accel = c.accel;
        accel.seed = seed;
        NSState state = make_ns_state(cfg.size(), c.model.cap, accel);
        const long burn = c.effective_burn_in();
        std::vector<double> disp_at_burn = cfg.unwrapped_disp;
        for (long t = 0; t < c.T; ++t) {
            cfg = ns_step(cfg, state, c.kind, t);
            for (double u : state.u) {
                worst_u = std::min({worst_u, u, c.model.cap - u});
            }
            if (t + 1 == burn) {
                disp_at_burn = cfg.unwrapped_disp;
            }
        }
        double total = 0.0;
        for (int i = 0; i < cfg.size(); ++i) {
            total += cfg.unwrapped_disp[i] - disp_at_burn[i];
        }
        const double V = total / cfg.size() / static_cast<double>(c.T - burn);
        csv.row({to_string(c.kind), num(c.rho), num(c.L), std::to_string(c.T),
                 std::to_string(seed), num(V)});
    }
    add_check(rep, "carried_velocity_range", worst_u >= -1e-12, worst_u);
}

void cmd_verify(const RunConfig& c, const std::filesystem::path& dir, RunReport& rep) {
    (void)dir;
    // Built-in fixtures, every-step gap-bound checking across all kinds.
    struct Fixture {
        NormalizationKind kind;
        double rho;
        bool signed_vel;
    };
    const std::vector<Fixture> fixtures = {
        {NormalizationKind::weak_nonneg, 1.0, false},
        {NormalizationKind::strong_nonneg, 2.0, false},
        {NormalizationKind::weak_both_continuous, 2.0, true},
        {NormalizationKind::strong_both, 1.0, true},
    };
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& f : fixtures) {
        InitSpec spec;
        spec.kind = InitSpec::Kind::random_admissible;
        spec.L = 50.0;
        spec.rho = f.rho;
        spec.seed = c.seeds.front();
        RingConfiguration cfg = generate(spec);

        VelocityModel model;
        if (f.signed_vel) {
            // The factor-4 gap bound needs a common (per-step) signed speed;
            // independent per-particle signs can open a gap without limit.
            model.is_signed = true;
            model.sequence.type = SequenceSpec::Type::periodic;
            model.sequence.values = {1.0, -1.0, 1.0};
        } else {
            model.sequence.value = 1.0;
        }
        model.seed = c.seeds.front();

        GapBoundMonitor monitor{cfg.gaps, gap_bound_factor(f.kind) * model.cap, 1};
        EvolveOptions opts;
        opts.T = 500;
        opts.hooks.push_back(monitor.hook());
        evolve(std::move(cfg), model, f.kind, opts);
        worst = std::min(worst, monitor.worst_margin);
    }
    add_check(rep, "gap_bound_fixture_suite", worst >= -1e-9 * 50.0, worst);
}

}  // namespace

RunReport run(const RunConfig& config, const std::string& out_dir, int workers) {
    RunConfig c = config;
    apply_seed_override(c);
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    RunReport rep;
    try {
        if (c.command == "simulate") {
            cmd_simulate(c, dir, rep);
        } else if (c.command == "fd-sweep") {
            cmd_fd_sweep(c, dir, rep, workers);
        } else if (c.command == "couple") {
            cmd_couple(c, dir, rep);
        } else if (c.command == "tracer") {
            cmd_tracer(c, dir, rep);
        } else if (c.command == "hysteresis") {
            cmd_hysteresis(c, dir, rep);
        } else if (c.command == "ns") {
            cmd_ns(c, dir, rep);
        } else if (c.command == "verify") {
            cmd_verify(c, dir, rep);
        } else {
            throw SchemaError({"command: unknown '" + c.command + "'"});
        }
    } catch (const SimError& e) {
        add_check(rep, "execution", false, -1.0, e.what());
    }
    write_report(rep, dir);
    rep.artifacts.push_back("report.json");
    return rep;
}

}  // namespace exclusim
