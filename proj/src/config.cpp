#include "qsync/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qsync/bath.hpp"
#include "qsync/errors.hpp"
#include "qsync/heom.hpp"
#include "qsync/io.hpp"

namespace qsync {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ConfigError(where + ": " + msg);
}

double to_double(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.empty()) fail(where, "expected a number");
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) fail(where, "not a number: '" + v + "'");
    return x;
}

int to_int(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.empty()) fail(where, "expected an integer");
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size()) fail(where, "not an integer: '" + v + "'");
    if (x < -2147483647L || x > 2147483647L) fail(where, "integer out of range");
    return static_cast<int>(x);
}

bool to_bool(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    if (v == "true") return true;
    if (v == "false") return false;
    fail(where, "expected true or false, got '" + v + "'");
}

std::string to_string_value(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
        fail(where, "expected a quoted string");
    const std::string inner = v.substr(1, v.size() - 2);
    if (inner.find('"') != std::string::npos)
        fail(where, "embedded quotes are not supported");
    return inner;
}

std::vector<double> to_double_list(const std::string& where, const std::string& raw) {
    const std::string v = trim(raw);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        fail(where, "expected an array like [0.2, 0.3]");
    std::vector<double> out;
    std::string inner = v.substr(1, v.size() - 2);
    if (trim(inner).empty()) return out;
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(where, item));
    return out;
}

void assign(RunConfig& c, const std::string& where, const std::string& section,
            const std::string& key, const std::string& value) {
    if (section == "physical") {
        if (key == "omega1") c.omega1 = to_double(where, value);
        else if (key == "delta") c.delta = to_double(where, value);
        else if (key == "lambda") c.lambda = to_double(where, value);
        else if (key == "gamma") c.gamma = to_double(where, value);
        else if (key == "beta") c.beta = to_double(where, value);
        else if (key == "h") c.h = to_double(where, value);
        else if (key == "channel_count") c.channel_count = to_int(where, value);
        else fail(where, "unknown key '" + key + "' in [physical]");
    } else if (section == "numerics") {
        if (key == "m_cut") c.m_cut = to_int(where, value);
        else if (key == "tier_cap") c.tier_cap = to_int(where, value);
        else if (key == "dt") c.dt = to_double(where, value);
        else if (key == "t_final") c.t_final = to_double(where, value);
        else if (key == "sample_every") c.sample_every = to_int(where, value);
        else if (key == "steady_tolerance") c.steady_tolerance = to_double(where, value);
        else if (key == "steady_window") c.steady_window = to_double(where, value);
        else if (key == "max_time") c.max_time = to_double(where, value);
        else fail(where, "unknown key '" + key + "' in [numerics]");
    } else if (section == "initial_state") {
        if (key == "preset") c.preset = to_string_value(where, value);
        else if (key == "matrix_file") c.matrix_file = to_string_value(where, value);
        else fail(where, "unknown key '" + key + "' in [initial_state]");
    } else if (section == "measures") {
        if (key == "phi_grid") c.phi_grid = to_int(where, value);
        else fail(where, "unknown key '" + key + "' in [measures]");
    } else if (section == "sweep") {
        if (key == "delta_min") c.delta_min = to_double(where, value);
        else if (key == "delta_max") c.delta_max = to_double(where, value);
        else if (key == "delta_count") c.delta_count = to_int(where, value);
        else if (key == "lambda_min") c.lambda_min = to_double(where, value);
        else if (key == "lambda_max") c.lambda_max = to_double(where, value);
        else if (key == "lambda_count") c.lambda_count = to_int(where, value);
        else if (key == "beta_values") c.beta_values = to_double_list(where, value);
        else if (key == "warm_start") c.warm_start = to_bool(where, value);
        else if (key == "tongue_threshold") c.tongue_threshold = to_double(where, value);
        else fail(where, "unknown key '" + key + "' in [sweep]");
    } else if (section == "output") {
        if (key == "directory") c.directory = to_string_value(where, value);
        else if (key == "plot") c.plot = to_bool(where, value);
        else fail(where, "unknown key '" + key + "' in [output]");
    } else {
        fail(where, "key '" + key + "' appears before any [section]");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name,
                            RunConfig base) {
    RunConfig c = base;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = name + ":" + std::to_string(line_no);
        // Strip comments, but not inside quoted strings.
        bool quoted = false;
        std::string line;
        for (char ch : raw) {
            if (ch == '"') quoted = !quoted;
            if (ch == '#' && !quoted) break;
            line += ch;
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(where, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "physical" && section != "numerics" &&
                section != "initial_state" && section != "measures" &&
                section != "sweep" && section != "output")
                fail(where, "unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(where, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(where, "empty key");
        if (value.empty()) fail(where, "empty value for '" + key + "'");
        assign(c, where, section, key, value);
    }
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void apply_override(RunConfig& config, const std::string& dotted_key,
                    const std::string& value) {
    const std::size_t dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override '" + dotted_key +
                          "' must look like section.key");
    const std::string section = dotted_key.substr(0, dot);
    const std::string key = dotted_key.substr(dot + 1);
    assign(config, "<override " + dotted_key + ">", section, key, value);
}

void validate_config(const RunConfig& c) {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    check(c.omega1 == 1.0, "physical.omega1 is fixed at 1 (it sets the unit system)");
    check(c.lambda >= 0.0, "physical.lambda must be non-negative");
    check(c.gamma > 0.0, "physical.gamma must be positive");
    check(c.beta > 0.0, "physical.beta must be positive");
    check(c.h >= -1.0 && c.h <= 1.0, "physical.h must lie in [-1, 1]");
    check(c.channel_count == 1 || c.channel_count == 2,
          "physical.channel_count must be 1 or 2");

    check(c.m_cut >= 0, "numerics.m_cut must be non-negative");
    check(c.tier_cap >= 0 && c.tier_cap <= 255,
          "numerics.tier_cap must be in [0, 255]");
    check(c.dt > 0.0, "numerics.dt must be positive");
    check(c.t_final >= 0.0, "numerics.t_final must be non-negative");
    check(c.sample_every >= 1, "numerics.sample_every must be at least 1");
    check(c.steady_tolerance > 0.0, "numerics.steady_tolerance must be positive");
    check(c.steady_window > 0.0, "numerics.steady_window must be positive");
    check(c.max_time >= c.steady_window,
          "numerics.max_time must cover at least one steady_window");

    // The stiffest hierarchy mode bounds the usable fixed step.
    BathSpec bath;
    try {
        bath = make_bath(c.lambda, c.gamma, c.beta, c.m_cut);
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("bath parameters rejected: ") + ex.what());
    }
    const double cap = max_stable_step(bath);
    if (c.dt > cap)
        throw ConfigError("numerics.dt = " + format_double(c.dt) +
                          " exceeds the stability cap 1/(2 nu_M) = " +
                          format_double(cap));

    check(c.preset == "equatorial_product" || c.preset == "diagonal_thermal" ||
              c.preset == "ground" || c.preset == "custom",
          "initial_state.preset must be one of equatorial_product, "
          "diagonal_thermal, ground, custom");
    if (c.preset == "custom")
        check(!c.matrix_file.empty(),
              "initial_state.matrix_file is required when preset = \"custom\"");
    else
        check(c.matrix_file.empty(),
              "initial_state.matrix_file only applies to preset = \"custom\"");

    check(c.phi_grid >= 8, "measures.phi_grid must be at least 8");

    check(c.delta_count >= 1, "sweep.delta_count must be at least 1");
    check(c.lambda_count >= 1, "sweep.lambda_count must be at least 1");
    check(c.delta_min <= c.delta_max, "sweep.delta_min must not exceed delta_max");
    check(c.lambda_min <= c.lambda_max,
          "sweep.lambda_min must not exceed lambda_max");
    check(c.lambda_min >= 0.0, "sweep.lambda_min must be non-negative");
    for (double b : c.beta_values)
        check(b > 0.0, "sweep.beta_values must all be positive");
    check(c.tongue_threshold > 0.0 && c.tongue_threshold <= 1.0,
          "sweep.tongue_threshold must lie in (0, 1]");

    check(!c.directory.empty(), "output.directory must not be empty");
}

std::string dump_config(const RunConfig& c) {
    std::ostringstream out;
    out << "[physical]\n";
    out << "omega1 = " << format_double(c.omega1) << "\n";
    out << "delta = " << format_double(c.delta) << "\n";
    out << "lambda = " << format_double(c.lambda) << "\n";
    out << "gamma = " << format_double(c.gamma) << "\n";
    out << "beta = " << format_double(c.beta) << "\n";
    out << "h = " << format_double(c.h) << "\n";
    out << "channel_count = " << c.channel_count << "\n";
    out << "\n[numerics]\n";
    out << "m_cut = " << c.m_cut << "\n";
    out << "tier_cap = " << c.tier_cap << "\n";
    out << "dt = " << format_double(c.dt) << "\n";
    out << "t_final = " << format_double(c.t_final) << "\n";
    out << "sample_every = " << c.sample_every << "\n";
    out << "steady_tolerance = " << format_double(c.steady_tolerance) << "\n";
    out << "steady_window = " << format_double(c.steady_window) << "\n";
    out << "max_time = " << format_double(c.max_time) << "\n";
    out << "\n[initial_state]\n";
    out << "preset = \"" << c.preset << "\"\n";
    if (!c.matrix_file.empty()) out << "matrix_file = \"" << c.matrix_file << "\"\n";
    out << "\n[measures]\n";
    out << "phi_grid = " << c.phi_grid << "\n";
    out << "\n[sweep]\n";
    out << "delta_min = " << format_double(c.delta_min) << "\n";
    out << "delta_max = " << format_double(c.delta_max) << "\n";
    out << "delta_count = " << c.delta_count << "\n";
    out << "lambda_min = " << format_double(c.lambda_min) << "\n";
    out << "lambda_max = " << format_double(c.lambda_max) << "\n";
    out << "lambda_count = " << c.lambda_count << "\n";
    out << "beta_values = [";
    for (std::size_t i = 0; i < c.beta_values.size(); ++i)
        out << (i ? ", " : "") << format_double(c.beta_values[i]);
    out << "]\n";
    out << "warm_start = " << (c.warm_start ? "true" : "false") << "\n";
    out << "tongue_threshold = " << format_double(c.tongue_threshold) << "\n";
    out << "\n[output]\n";
    out << "directory = \"" << c.directory << "\"\n";
    out << "plot = " << (c.plot ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace qsync
