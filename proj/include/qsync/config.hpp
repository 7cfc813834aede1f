#pragma once

#include <string>
#include <vector>

namespace qsync {

// Flat view of the config file. Sections: [physical], [numerics],
// [initial_state], [measures], [sweep], [output]. Unknown sections or keys
// are errors; all module validity rules are re-checked by validate_config.
struct RunConfig {
    // [physical] — omega1 sets the unit system and stays fixed at 1.
    double omega1 = 1.0;
    double delta = 0.01;
    double lambda = 0.05;
    double gamma = 2.0;
    double beta = 0.3;
    double h = -1.0;
    int channel_count = 2;

    // [numerics]
    int m_cut = 2;
    int tier_cap = 6;
    double dt = 0.005;
    double t_final = 100.0;
    int sample_every = 100;
    double steady_tolerance = 1e-6;
    double steady_window = 50.0;
    double max_time = 2000.0;

    // [initial_state]
    std::string preset = "equatorial_product";  // or diagonal_thermal, ground, custom
    std::string matrix_file;                    // required when preset = "custom"

    // [measures]
    int phi_grid = 1024;

    // [sweep]
    double delta_min = 0.0;
    double delta_max = 0.1;
    int delta_count = 21;
    double lambda_min = 0.0;
    double lambda_max = 0.05;
    int lambda_count = 21;
    std::vector<double> beta_values;  // non-empty turns `sweep` into a temperature scan
    bool warm_start = false;
    double tongue_threshold = 0.5;

    // [output]
    std::string directory = "out";
    bool plot = false;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_file(const std::string& path);

// `name` labels error messages (use the path or something like "<override>").
RunConfig parse_config_text(const std::string& text, const std::string& name,
                            RunConfig base = RunConfig{});

// Applies one "section.key" = value override on top of a parsed config.
void apply_override(RunConfig& config, const std::string& dotted_key,
                    const std::string& value);

// Re-checks every module's parameter rules; throws ConfigError.
void validate_config(const RunConfig& config);

// Canonical echo; parse_config_text(dump_config(c)) == c.
std::string dump_config(const RunConfig& config);

}  // namespace qsync
