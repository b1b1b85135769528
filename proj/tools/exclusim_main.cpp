#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "exclusim/errors.hpp"
#include "exclusim/run_config.hpp"
#include "exclusim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Discrete-time exclusion process simulator (ring topology)"};

    std::string config_path;
    std::string out_dir = ".";
    int workers = 1;
    std::string check_override;

    app.add_option("--config", config_path, "Path to a JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Directory for CSV artifacts and report.json");
    app.add_option("--workers", workers, "Worker threads for sweep cells")
        ->check(CLI::PositiveNumber);
    app.add_option("--check", check_override,
                   "Override invariant-check level: off|sampled|every-step");

    CLI11_PARSE(app, argc, argv);

    try {
        exclusim::RunConfig config = exclusim::load_config(config_path);
        if (!check_override.empty()) {
            config.check = exclusim::check_level_from_string(check_override);
        }
        const exclusim::RunReport report = exclusim::run(config, out_dir, workers);
        for (const auto& c : report.checks) {
            std::fprintf(stderr, "%-32s %s (worst margin %.6g)%s%s\n", c.name.c_str(),
                         c.pass ? "pass" : "FAIL", c.margin,
                         c.note.empty() ? "" : " -- ", c.note.c_str());
        }
        return report.exit_code;
    } catch (const exclusim::SchemaError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const exclusim::IOFailure& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    } catch (const exclusim::SimError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
