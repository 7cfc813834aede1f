#include "qsync/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsync {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& samples) {
    std::ofstream out = open_out(path);
    out << "t";
    for (int i = 1; i <= 9; ++i)
        for (int j = 1; j <= 9; ++j)
            out << ",re_rho_" << i << "_" << j << ",im_rho_" << i << "_" << j;
    out << "\n";
    for (const TrajectorySample& s : samples) {
        out << format_double(s.time);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                out << "," << format_double(s.rho(i, j).real()) << ","
                    << format_double(s.rho(i, j).imag());
        out << "\n";
    }
    finish(out, path);
}

void write_measures_csv(const std::string& path,
                        const std::vector<MeasureRow>& rows) {
    std::ofstream out = open_out(path);
    out << "t,s_r_max,phi_star,negativity,log_negativity,mutual_information\n";
    for (const MeasureRow& r : rows)
        out << format_double(r.t) << "," << format_double(r.s_r_max) << ","
            << format_double(r.phi_star) << "," << format_double(r.negativity)
            << "," << format_double(r.log_negativity) << ","
            << format_double(r.mutual_information) << "\n";
    finish(out, path);
}

void write_sr_curve_csv(const std::string& path, const std::vector<double>& phi,
                        const std::vector<double>& s_r) {
    if (phi.size() != s_r.size())
        throw std::invalid_argument("curve columns have different lengths");
    std::ofstream out = open_out(path);
    out << "phi,s_r\n";
    for (std::size_t i = 0; i < phi.size(); ++i)
        out << format_double(phi[i]) << "," << format_double(s_r[i]) << "\n";
    finish(out, path);
}

void write_steady_summary_csv(const std::string& path, double t_reached,
                              bool converged, const MeasureRow& m) {
    std::ofstream out = open_out(path);
    out << "t_reached,converged,s_r_max,phi_star,negativity,log_negativity,"
           "mutual_information\n";
    out << format_double(t_reached) << "," << (converged ? 1 : 0) << ","
        << format_double(m.s_r_max) << "," << format_double(m.phi_star) << ","
        << format_double(m.negativity) << "," << format_double(m.log_negativity)
        << "," << format_double(m.mutual_information) << "\n";
    finish(out, path);
}

void write_arnold_csv(const std::string& path, const SweepGrid& grid) {
    if (grid.results.size() != grid.delta_values.size() * grid.lambda_values.size())
        throw std::invalid_argument("sweep grid has no results to write");
    std::ofstream out = open_out(path);
    out << "delta,lambda,s_r_max,phi_star,mutual_information,log_negativity,"
           "converged,t_reached\n";
    for (const CellRecord& c : grid.results)
        out << format_double(c.delta) << "," << format_double(c.lambda) << ","
            << format_double(c.s_r_max) << "," << format_double(c.phi_star) << ","
            << format_double(c.mutual_information) << ","
            << format_double(c.log_negativity) << "," << (c.converged ? 1 : 0)
            << "," << format_double(c.t_reached) << "\n";
    finish(out, path);
}

void write_temperature_csv(const std::string& path,
                           const std::vector<CellRecord>& cells) {
    std::ofstream out = open_out(path);
    out << "delta,beta,s_r_max,phi_star,mutual_information,log_negativity,"
           "converged,t_reached\n";
    for (const CellRecord& c : cells)
        out << format_double(c.delta) << "," << format_double(c.beta) << ","
            << format_double(c.s_r_max) << "," << format_double(c.phi_star) << ","
            << format_double(c.mutual_information) << ","
            << format_double(c.log_negativity) << "," << (c.converged ? 1 : 0)
            << "," << format_double(c.t_reached) << "\n";
    finish(out, path);
}

void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows) {
    std::ofstream out = open_out(path);
    out << "m_cut,tier_cap,ado_count,s_r_max,diff_prev,converged,t_reached\n";
    for (const ConvergenceRow& r : rows)
        out << r.m_cut << "," << r.tier_cap << "," << r.ado_count << ","
            << format_double(r.s_r_max) << "," << format_double(r.diff_prev)
            << "," << (r.converged ? 1 : 0) << "," << format_double(r.t_reached)
            << "\n";
    finish(out, path);
}

void write_matrix_file(const std::string& path, const Mat9& m) {
    std::ofstream out = open_out(path);
    out << "# row col re im (1-based)\n";
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            out << (i + 1) << " " << (j + 1) << " "
                << format_double(m(i, j).real()) << " "
                << format_double(m(i, j).imag()) << "\n";
    finish(out, path);
}

Mat9 read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    Mat9 m = Mat9::Zero();
    bool seen[9][9] = {};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        int i = 0, j = 0;
        double re = 0.0, im = 0.0;
        if (!(ss >> i)) continue;  // blank or comment-only line
        if (!(ss >> j >> re >> im))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 'row col re im'");
        std::string extra;
        if (ss >> extra)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": trailing content '" + extra + "'");
        if (i < 1 || i > 9 || j < 1 || j > 9)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": indices must be in 1..9");
        if (seen[i - 1][j - 1])
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": duplicate entry for (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")");
        seen[i - 1][j - 1] = true;
        m(i - 1, j - 1) = Complex{re, im};
    }
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j)
            if (!seen[i][j])
                throw std::runtime_error(path + ": missing entry for (" +
                                         std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ")");
    return m;
}

}  // namespace qsync
