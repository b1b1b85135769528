#include "exclusim/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "exclusim/errors.hpp"

namespace exclusim {

using nlohmann::json;

CheckLevel check_level_from_string(const std::string& s) {
    if (s == "off") return CheckLevel::off;
    if (s == "sampled") return CheckLevel::sampled;
    if (s == "every-step") return CheckLevel::every_step;
    throw SchemaError({"check: expected off|sampled|every-step, got '" + s + "'"});
}

InitSpec RunConfig::init_spec(std::uint64_t seed) const {
    InitSpec s;
    s.kind = init_family;
    s.L = L;
    s.r = r;
    s.lattice = lattice_mode;
    s.rho = rho;
    s.phase = phase;
    s.seed = seed;
    s.m = m;
    s.n = n;
    if (init_family == InitSpec::Kind::two_gap) {
        auto lens = two_gap_lengths(L, m, n, model.cap, r);
        if (!lens) {
            throw InfeasibleSpec("two-gap family not realizable for this topology");
        }
        s.g_small = lens->first;
        s.g_large = lens->second;
    }
    s.positions = positions;
    return s;
}

namespace {

bool integral(double x) { return std::abs(x - std::round(x)) <= 1e-9; }

NormalizationKind kind_from_string(const std::string& s, std::vector<std::string>& errs) {
    if (s == "weak-nonneg") return NormalizationKind::weak_nonneg;
    if (s == "strong-nonneg") return NormalizationKind::strong_nonneg;
    if (s == "weak-both-continuous") return NormalizationKind::weak_both_continuous;
    if (s == "strong-both") return NormalizationKind::strong_both;
    errs.push_back("normalization: unknown kind '" + s + "'");
    return NormalizationKind::weak_nonneg;
}

VelocityModel parse_velocity(const json& j, std::vector<std::string>& errs) {
    VelocityModel m;
    const std::string kind = j.value("kind", "deterministic-common");
    if (kind == "deterministic-common") {
        m.kind = VelocityModel::Kind::deterministic_common;
    } else if (kind == "iid") {
        m.kind = VelocityModel::Kind::iid;
    } else {
        errs.push_back("velocity.kind: unknown '" + kind + "'");
    }
    m.cap = j.value("cap", 1.0);
    m.is_signed = j.value("signed", false);
    if (m.cap <= 0.0) {
        errs.push_back("velocity.cap: must be positive");
    }
    if (j.contains("sequence")) {
        const json& s = j["sequence"];
        const std::string type = s.value("type", "constant");
        if (type == "constant") {
            m.sequence.type = SequenceSpec::Type::constant;
            m.sequence.value = s.value("value", m.cap);
        } else if (type == "periodic") {
            m.sequence.type = SequenceSpec::Type::periodic;
            m.sequence.values = s.value("values", std::vector<double>{});
            if (m.sequence.values.empty()) {
                errs.push_back("velocity.sequence.values: periodic needs values");
            }
        } else if (type == "logistic-map") {
            m.sequence.type = SequenceSpec::Type::logistic_map;
            m.sequence.v0 = s.value("v0", 0.5);
        } else {
            errs.push_back("velocity.sequence.type: unknown '" + type + "'");
        }
    } else if (m.kind == VelocityModel::Kind::deterministic_common) {
        m.sequence.type = SequenceSpec::Type::constant;
        m.sequence.value = m.cap;
    }
    if (j.contains("distribution")) {
        const json& d = j["distribution"];
        const std::string type = d.value("type", "constant");
        if (type == "constant") {
            m.distribution.type = DistributionSpec::Type::constant;
            m.distribution.value = d.value("value", m.cap);
        } else if (type == "uniform") {
            m.distribution.type = DistributionSpec::Type::uniform;
            m.distribution.a = d.value("a", 0.0);
            m.distribution.b = d.value("b", m.cap);
        } else if (type == "discrete") {
            m.distribution.type = DistributionSpec::Type::discrete;
            m.distribution.values = d.value("values", std::vector<double>{});
            m.distribution.weights = d.value("weights", std::vector<double>{});
            if (m.distribution.values.empty() ||
                m.distribution.values.size() != m.distribution.weights.size()) {
                errs.push_back("velocity.distribution: values/weights mismatch");
            }
        } else {
            errs.push_back("velocity.distribution.type: unknown '" + type + "'");
        }
    }
    return m;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError({std::string("document is not valid JSON: ") + e.what()});
    }
    std::vector<std::string> errs;
    RunConfig c;

    c.schema_version = j.value("schema_version", 0);
    if (c.schema_version != 1) {
        errs.push_back("schema_version: expected 1");
    }
    c.command = j.value("command", "");
    static const std::vector<std::string> commands = {
        "simulate", "fd-sweep", "couple", "tracer", "hysteresis", "ns", "verify"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
        errs.push_back("command: expected one of simulate|fd-sweep|couple|tracer|"
                       "hysteresis|ns|verify");
    }

    if (j.contains("topology")) {
        const json& t = j["topology"];
        c.L = t.value("L", 0.0);
        c.rho = t.value("rho", 0.0);
        c.r = t.value("r", 0.0);
        c.lattice_mode = t.value("lattice_mode", false);
        if (c.L <= 0.0) {
            errs.push_back("topology.L: must be positive");
        }
        if (c.rho < 0.0) {
            errs.push_back("topology.rho: must be nonnegative");
        }
        if (c.rho > 0.0 && !integral(c.rho * c.L)) {
            errs.push_back("topology: rho*L must be an integer");
        }
        if (c.lattice_mode) {
            if (c.r != 0.5) {
                errs.push_back("topology: lattice_mode requires r = 1/2");
            }
            if (!integral(c.L)) {
                errs.push_back("topology: lattice_mode requires integer L");
            }
        }
    } else if (c.command != "verify") {
        errs.push_back("topology: missing");
    }

    if (j.contains("normalization")) {
        c.kind = kind_from_string(j["normalization"].get<std::string>(), errs);
    }
    if (j.contains("velocity")) {
        c.model = parse_velocity(j["velocity"], errs);
        if (c.lattice_mode && !integral(c.model.cap)) {
            errs.push_back("velocity.cap: lattice_mode requires an integer cap");
        }
    }

    if (j.contains("init")) {
        const json& i = j["init"];
        const std::string family = i.value("family", "uniform");
        if (family == "uniform") {
            c.init_family = InitSpec::Kind::uniform;
        } else if (family == "random-admissible") {
            c.init_family = InitSpec::Kind::random_admissible;
        } else if (family == "two-gap") {
            c.init_family = InitSpec::Kind::two_gap;
        } else if (family == "explicit") {
            c.init_family = InitSpec::Kind::explicit_positions;
        } else {
            errs.push_back("init.family: unknown '" + family + "'");
        }
        c.phase = i.value("phase", 0.0);
        c.m = i.value("m", 0);
        c.n = i.value("n", 0);
        c.positions = i.value("positions", std::vector<double>{});
        if (c.init_family == InitSpec::Kind::explicit_positions && c.positions.empty()) {
            errs.push_back("init.positions: explicit family needs positions");
        }
    }

    c.T = j.value("T", 0L);
    if (c.T < 1 && c.command != "verify") {
        errs.push_back("T: must be >= 1");
    }
    c.burn_in = j.value("burn_in", -1L);
    if (c.burn_in >= 0 && c.burn_in >= c.T && c.command != "verify") {
        errs.push_back("burn_in: must be < T");
    }
    if (j.contains("seeds")) {
        c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
        if (c.seeds.empty()) {
            errs.push_back("seeds: must not be empty");
        }
    }
    if (j.contains("check")) {
        try {
            c.check = check_level_from_string(j["check"].get<std::string>());
        } catch (const SchemaError& e) {
            errs.push_back(e.issues.front());
        }
    }

    c.rho_grid = j.value("rho_grid", std::vector<double>{});
    if ((c.command == "fd-sweep" || c.command == "hysteresis") && c.rho_grid.empty()) {
        if (c.rho > 0.0) {
            c.rho_grid = {c.rho};
        } else {
            errs.push_back("rho_grid: required for " + c.command);
        }
    }

    if (j.contains("tracer")) {
        const json& t = j["tracer"];
        const std::string dir = t.value("direction", "forward");
        if (dir == "forward") {
            c.tracer_direction = TracerDirection::forward;
        } else if (dir == "backward") {
            c.tracer_direction = TracerDirection::backward;
        } else {
            errs.push_back("tracer.direction: expected forward|backward");
        }
        if (t.contains("y0")) {
            c.tracer_y0 = t["y0"].get<double>();
        }
    }

    if (j.contains("ns")) {
        const json& nsj = j["ns"];
        const json& a = nsj.contains("accel") ? nsj["accel"] : nsj;
        const std::string kind = a.value("kind", "constant");
        if (kind == "constant") {
            c.accel.kind = AccelSpec::Kind::constant;
        } else if (kind == "iid-uniform") {
            c.accel.kind = AccelSpec::Kind::iid_uniform;
        } else {
            errs.push_back("ns.accel.kind: expected constant|iid-uniform");
        }
        c.accel.a = a.value("a", 0.0);
        c.accel.a_max = a.value("a_max", c.accel.a);
        if (c.command == "ns" && c.accel.a <= 0.0) {
            errs.push_back("ns.accel.a: must be positive");
        }
    } else if (c.command == "ns") {
        errs.push_back("ns: missing acceleration settings");
    }

    if (j.contains("couple")) {
        const json& cj = j["couple"];
        if (cj.contains("offset")) {
            c.couple_offset = cj["offset"].get<double>();
        }
    }
    if (j.contains("families")) {
        for (const auto& f : j["families"]) {
            if (!f.is_array() || f.size() != 2) {
                errs.push_back("families: each entry must be a [m, n] pair");
                break;
            }
            c.families.emplace_back(f[0].get<int>(), f[1].get<int>());
        }
    }

    if (!errs.empty()) {
        throw SchemaError(errs);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IOFailure("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace exclusim
