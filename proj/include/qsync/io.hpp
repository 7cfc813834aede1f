#pragma once

#include <string>
#include <vector>

#include "qsync/heom.hpp"
#include "qsync/sweep.hpp"
#include "qsync/types.hpp"

namespace qsync {

// Full-precision (17 significant digits) decimal form, round-trip safe.
std::string format_double(double value);

struct MeasureRow {
    double t = 0.0;
    double s_r_max = 0.0;
    double phi_star = 0.0;
    double negativity = 0.0;
    double log_negativity = 0.0;
    double mutual_information = 0.0;
};

// Header: t,re_rho_1_1,im_rho_1_1,...,re_rho_9_9,im_rho_9_9 (row-major).
void write_trajectory_csv(const std::string& path,
                          const std::vector<TrajectorySample>& samples);

// Header: t,s_r_max,phi_star,negativity,log_negativity,mutual_information.
void write_measures_csv(const std::string& path,
                        const std::vector<MeasureRow>& rows);

// Header: phi,s_r.
void write_sr_curve_csv(const std::string& path, const std::vector<double>& phi,
                        const std::vector<double>& s_r);

// Header: t_reached,converged,s_r_max,phi_star,negativity,log_negativity,
// mutual_information (single data row).
void write_steady_summary_csv(const std::string& path, double t_reached,
                              bool converged, const MeasureRow& measures);

// Header: delta,lambda,s_r_max,phi_star,mutual_information,log_negativity,
// converged,t_reached; one row per cell, row-major over delta then lambda.
void write_arnold_csv(const std::string& path, const SweepGrid& grid);

// Header: delta,beta,s_r_max,phi_star,mutual_information,log_negativity,
// converged,t_reached.
void write_temperature_csv(const std::string& path,
                           const std::vector<CellRecord>& cells);

// Header: m_cut,tier_cap,ado_count,s_r_max,diff_prev,converged,t_reached.
void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows);

// Plain-text matrix file: one "row col re im" line per entry, 1-based
// indices, '#' comments allowed. Reader requires all 81 entries.
void write_matrix_file(const std::string& path, const Mat9& m);
Mat9 read_matrix_file(const std::string& path);

}  // namespace qsync
