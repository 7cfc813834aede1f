// End-to-end checks of the command-line binary. The test runner receives the
// binary location through QSYNC_BIN (set by the build).
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "qsync/io.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

// Splits one CSV line into fields.
std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\n' && c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string csv_line(const std::string& text, int index) {
    std::istringstream ss(text);
    std::string line;
    for (int i = 0; i <= index; ++i)
        if (!std::getline(ss, line)) return "";
    return line;
}

struct CliWorld {
    fs::path dir;
    std::string bin;
    int counter = 0;

    CliWorld() {
        const char* env = std::getenv("QSYNC_BIN");
        REQUIRE_MESSAGE(env != nullptr, "QSYNC_BIN must point at the binary");
        bin = env;
        dir = fs::temp_directory_path() /
              ("qsync_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(dir);
    }
    ~CliWorld() { fs::remove_all(dir); }

    std::string file(const std::string& name) const { return (dir / name).string(); }

    int run(const std::string& args, std::string* out = nullptr,
            std::string* err = nullptr) {
        const std::string op = file("stdout_" + std::to_string(counter) + ".txt");
        const std::string ep = file("stderr_" + std::to_string(counter) + ".txt");
        ++counter;
        const std::string cmd =
            "\"" + bin + "\" " + args + " > " + op + " 2> " + ep;
        const int status = std::system(cmd.c_str());
        REQUIRE(status != -1);
        if (out) *out = slurp(op);
        if (err) *err = slurp(ep);
        if (!WIFEXITED(status)) return -2;
        return WEXITSTATUS(status);
    }

    // Small, fast hierarchy shared by most invocations.
    std::string tiny() const {
        return "--out-dir " + dir.string() +
               " --gamma 2 --m-cut 0 --tier-cap 1 --dt 0.005 --phi-grid 64 ";
    }
};

}  // namespace

TEST_CASE("evolve writes trajectory and measure files") {
    CliWorld w;
    std::string out;
    const int rc = w.run("evolve " + w.tiny() +
                             "--t-final 0.2 --sample-every 10",
                         &out);
    CHECK(rc == 0);
    CHECK(out.find("wrote " + w.file("evolve_trajectory.csv")) != std::string::npos);
    CHECK(out.find("wrote " + w.file("evolve_measures.csv")) != std::string::npos);

    // 40 steps sampled every 10, plus the initial point: 5 rows.
    const std::string traj = slurp(w.file("evolve_trajectory.csv"));
    CHECK(count_lines(traj) == 6);
    CHECK(csv_line(traj, 0).rfind("t,re_rho_1_1,im_rho_1_1", 0) == 0);
    CHECK(fields_of(csv_line(traj, 1)).size() == 163);
    CHECK(csv_line(traj, 1).rfind("0,", 0) == 0);
    CHECK(csv_line(traj, 5).rfind("0.2", 0) == 0);

    const std::string meas = slurp(w.file("evolve_measures.csv"));
    CHECK(count_lines(meas) == 6);
    CHECK(csv_line(meas, 0) ==
          "t,s_r_max,phi_star,negativity,log_negativity,mutual_information");
}

TEST_CASE("config file, --set, and direct flags layer in order") {
    CliWorld w;
    const std::string cfg = w.file("run.toml");
    std::ofstream(cfg) << "[physical]\nlambda = 0.03\ndelta = 0.02\n"
                          "[output]\ndirectory = \"ignored\"\n";

    std::string out;
    int rc = w.run("evolve --config " + cfg +
                       " --set physical.lambda=0.0625 --beta 0.5 --dump-config",
                   &out);
    CHECK(rc == 0);
    CHECK(out.find("[physical]") != std::string::npos);
    CHECK(out.find("lambda = 0.0625") != std::string::npos);  // --set beats file
    CHECK(out.find("delta = 0.02") != std::string::npos);     // file beats default
    CHECK(out.find("beta = 0.5") != std::string::npos);       // flag beats both
    CHECK(out.find("directory = \"ignored\"") != std::string::npos);

    // --dump-config still validates; a bad step is a hard error.
    std::string err;
    rc = w.run("evolve --config " + cfg + " --dt 1.0 --dump-config", &out, &err);
    CHECK(rc == 1);
    CHECK(err.find("exceeds the stability cap") != std::string::npos);
}

TEST_CASE("steady converges on a stationary thermal state") {
    CliWorld w;
    std::string out;
    const int rc = w.run("steady " + w.tiny() +
                             "--h 1 --preset diagonal_thermal --steady-window 1 "
                             "--max-time 50",
                         &out);
    CHECK(rc == 0);
    CHECK(out.find("converged = true") != std::string::npos);

    const std::string summary = slurp(w.file("steady_summary.csv"));
    CHECK(count_lines(summary) == 2);
    const auto cols = fields_of(csv_line(summary, 1));
    REQUIRE(cols.size() == 7);
    CHECK(cols[1] == "1");                      // converged
    CHECK(std::stod(cols[0]) >= 1.0);           // ran at least one window
    CHECK(std::stod(cols[2]) < 1e-10);          // diagonal state: no sync

    const std::string curve = slurp(w.file("steady_sr_curve.csv"));
    CHECK(count_lines(curve) == 65);  // header + phi grid
    CHECK(csv_line(curve, 0) == "phi,s_r");

    // The stored state must read back as a valid density matrix.
    const qsync::Mat9 rho = qsync::read_matrix_file(w.file("steady_rho.txt"));
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(rho.trace().imag()) < 1e-15);
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("steady that cannot settle exits with the unconverged code") {
    CliWorld w;
    std::string out;
    const int rc = w.run("steady " + w.tiny() +
                             "--lambda 0 --delta 0.3 --preset equatorial_product "
                             "--steady-window 0.5 --max-time 2",
                         &out);
    CHECK(rc == 2);  // free detuned precession never settles
    CHECK(out.find("converged = false") != std::string::npos);
    const std::string summary = slurp(w.file("steady_summary.csv"));
    CHECK(fields_of(csv_line(summary, 1))[1] == "0");
}

TEST_CASE("sweep fills an arnold grid and reports the tongue") {
    CliWorld w;
    std::string out, err;
    const int rc = w.run("sweep " + w.tiny() +
                             "--h 1 --preset diagonal_thermal --steady-window 1 "
                             "--max-time 20 "
                             "--set sweep.delta_count=2 --set sweep.delta_max=0.02 "
                             "--set sweep.lambda_count=2 "
                             "--set sweep.lambda_max=0.25 --plot --out " +
                             w.file("tongue.svg"),
                         &out, &err);
    CHECK(rc == 0);

    const std::string grid = slurp(w.file("sweep_arnold.csv"));
    CHECK(count_lines(grid) == 5);
    CHECK(csv_line(grid, 0) ==
          "delta,lambda,s_r_max,phi_star,mutual_information,log_negativity,"
          "converged,t_reached");
    for (int i = 1; i <= 4; ++i) {
        const auto cols = fields_of(csv_line(grid, i));
        REQUIRE(cols.size() == 8);
        CHECK(cols[6] == "1");
    }
    // Row-major over delta: rows 1,2 share delta=0; rows 3,4 share delta=0.02.
    CHECK(fields_of(csv_line(grid, 1))[0] == "0");
    CHECK(fields_of(csv_line(grid, 3))[0] == "0.02");
    CHECK(fields_of(csv_line(grid, 1))[1] == "0");
    CHECK(fields_of(csv_line(grid, 2))[1] == "0.25");

    // A fully desynchronized grid has no tongue; that is a warning, not an error.
    CHECK(err.find("tongue width unavailable") != std::string::npos);

    // --plot with --out writes the two heatmaps with suffixed names.
    for (const char* name : {"tongue_sr.svg", "tongue_mi.svg"}) {
        const std::string svg = slurp(w.file(name));
        CHECK(svg.rfind("<?xml", 0) == 0);
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("</svg>") != std::string::npos);
    }
}

TEST_CASE("sweep with beta_values runs a temperature scan") {
    CliWorld w;
    std::string out;
    const int rc = w.run("sweep " + w.tiny() +
                             "--h 1 --preset diagonal_thermal --steady-window 1 "
                             "--max-time 20 "
                             "--set sweep.delta_count=2 --set sweep.delta_max=0.02 "
                             "--set \"sweep.beta_values=[0.25,0.5]\"",
                         &out);
    CHECK(rc == 0);
    const std::string scan = slurp(w.file("sweep_temperature.csv"));
    CHECK(count_lines(scan) == 5);
    CHECK(csv_line(scan, 0) ==
          "delta,beta,s_r_max,phi_star,mutual_information,log_negativity,"
          "converged,t_reached");
    // delta outer, beta inner
    CHECK(fields_of(csv_line(scan, 1))[1] == "0.25");
    CHECK(fields_of(csv_line(scan, 2))[1] == "0.5");
    CHECK(fields_of(csv_line(scan, 1))[0] == "0");
    CHECK(fields_of(csv_line(scan, 3))[0] == "0.02");
}

TEST_CASE("check walks a truncation ladder") {
    CliWorld w;
    const std::string base = "check " + w.tiny() +
                             "--h 1 --preset diagonal_thermal --steady-window 1 "
                             "--max-time 20 ";
    std::string out;
    int rc = w.run(base + "--truncations 0:1,0:2,1:2 --check-tolerance 0.5", &out);
    CHECK(rc == 0);
    CHECK(out.find("converged at (m_cut=0, tier_cap=2)") != std::string::npos);
    const std::string csv = slurp(w.file("check_convergence.csv"));
    CHECK(count_lines(csv) == 4);
    CHECK(csv_line(csv, 0) ==
          "m_cut,tier_cap,ado_count,s_r_max,diff_prev,converged,t_reached");
    CHECK(fields_of(csv_line(csv, 1))[2] == "3");   // binom(2+1, 1)
    CHECK(fields_of(csv_line(csv, 2))[2] == "6");   // binom(2+2, 2)
    CHECK(fields_of(csv_line(csv, 3))[2] == "15");  // binom(4+2, 2)

    // A single rung can never demonstrate convergence.
    rc = w.run(base + "--truncations 1:2", &out);
    CHECK(rc == 2);
    CHECK(out.find("no truncation pair met") != std::string::npos);

    std::string err;
    rc = w.run(base + "--truncations 1-2", &out, &err);
    CHECK(rc == 1);
    CHECK(err.find("m:tier") != std::string::npos);
}

TEST_CASE("custom initial states come from a matrix file") {
    CliWorld w;
    const std::string mfile = w.file("init.txt");
    qsync::write_matrix_file(mfile, qsync::Mat9::Identity() / 9.0);

    std::string out;
    int rc = w.run("evolve " + w.tiny() +
                       "--t-final 0.05 --sample-every 10 --preset custom "
                       "--matrix-file " + mfile,
                   &out);
    CHECK(rc == 0);

    // preset=custom without a file is a config error.
    std::string err;
    rc = w.run("evolve " + w.tiny() + "--preset custom", &out, &err);
    CHECK(rc == 1);
    CHECK(err.find("matrix_file") != std::string::npos);
}

TEST_CASE("hard failures and usage errors are distinguishable") {
    CliWorld w;
    std::string out, err;

    int rc = w.run("evolve --config " + w.file("does_not_exist.toml"), &out, &err);
    CHECK(rc == 1);
    CHECK(err.find("cannot open config file") != std::string::npos);

    rc = w.run("evolve " + w.tiny() + "--set physical.lambda", &out, &err);
    CHECK(rc == 1);
    CHECK(err.find("section.key=value") != std::string::npos);

    rc = w.run("evolve " + w.tiny() + "--set physical.nope=1", &out, &err);
    CHECK(rc == 1);
    CHECK(err.find("nope") != std::string::npos);

    // Parser-level problems (unknown flag, missing subcommand) are nonzero too.
    CHECK(w.run("evolve --no-such-flag", &out, &err) != 0);
    CHECK(w.run("", &out, &err) != 0);

    // Help succeeds and documents the subcommands.
    rc = w.run("--help", &out, &err);
    CHECK(rc == 0);
    CHECK(out.find("evolve") != std::string::npos);
    CHECK(out.find("steady") != std::string::npos);
    CHECK(out.find("sweep") != std::string::npos);
    CHECK(out.find("check") != std::string::npos);
    CHECK(w.run("steady --help", &out, &err) == 0);
}

TEST_CASE("evolve --plot writes a line plot") {
    CliWorld w;
    std::string out;
    const int rc = w.run("evolve " + w.tiny() +
                             "--t-final 0.1 --sample-every 5 --plot --out " +
                             w.file("evo.svg"),
                         &out);
    CHECK(rc == 0);
    const std::string svg = slurp(w.file("evo.svg"));
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(out.find("wrote " + w.file("evo.svg")) != std::string::npos);
}
