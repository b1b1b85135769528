#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exclusim/dynamics.hpp"
#include "exclusim/ns_model.hpp"
#include "exclusim/ring_config.hpp"
#include "exclusim/tracer.hpp"
#include "exclusim/velocity.hpp"

namespace exclusim {

enum class CheckLevel { off, sampled, every_step };

CheckLevel check_level_from_string(const std::string& s);

struct RunConfig {
    int schema_version = 1;
    std::string command;

    // topology
    double L = 0.0;
    double rho = 0.0;
    double r = 0.0;
    bool lattice_mode = false;

    NormalizationKind kind = NormalizationKind::weak_nonneg;
    VelocityModel model;

    // init
    InitSpec::Kind init_family = InitSpec::Kind::uniform;
    double phase = 0.0;
    int m = 0, n = 0;
    std::vector<double> positions;

    long T = 0;
    long burn_in = -1;  // -1: default to T/2
    std::vector<std::uint64_t> seeds{0};
    CheckLevel check = CheckLevel::sampled;

    // command extras
    std::vector<double> rho_grid;
    TracerDirection tracer_direction = TracerDirection::forward;
    std::optional<double> tracer_y0;
    AccelSpec accel;
    std::optional<double> couple_offset;  // shift applied to the second replica
    std::vector<std::pair<int, int>> families;  // hysteresis; empty = auto

    long effective_burn_in() const { return burn_in < 0 ? T / 2 : burn_in; }
    InitSpec init_spec(std::uint64_t seed) const;
};

// Parses and validates a JSON document; collects every validation problem
// before failing, so a bad config reports all issues at once.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace exclusim
