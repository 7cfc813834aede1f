#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qsync/heom.hpp"
#include "qsync/types.hpp"

namespace qsync {

// One steady-state run at a grid point. `error` is empty on success; failed
// cells keep NaN measures and are never silently interpolated.
struct CellRecord {
    double delta = 0.0;
    double lambda = 0.0;
    double beta = 0.0;
    double s_r_max = 0.0;
    double phi_star = 0.0;
    double mutual_information = 0.0;
    double log_negativity = 0.0;
    bool converged = false;
    double t_reached = 0.0;
    std::string error;
};

// Everything held fixed across a sweep.
struct SweepSettings {
    double omega1 = 1.0;
    double gamma = 0.2;
    double beta = 0.3;
    double h = -1.0;
    int channel_count = 2;
    int m_cut = 2;
    int tier_cap = 6;
    InitialPreset preset = InitialPreset::DiagonalThermal;
    std::optional<Mat9> custom_initial;
    SteadyOptions steady;
    int phi_samples = 1024;
    // Seed each cell with the previous cell's steady state (physical state
    // only). Couples the cells, so it forces sequential execution.
    bool warm_start = false;
};

struct SweepGrid {
    std::vector<double> delta_values;
    std::vector<double> lambda_values;
    SweepSettings settings;
    // Row-major, delta outer: results[i * |lambda| + j] is (delta_i, lambda_j).
    std::vector<CellRecord> results;
};

// Single steady-state cell; exceptions are captured into the record.
CellRecord run_cell(double delta, double lambda, double beta,
                    const SweepSettings& settings,
                    const std::optional<Mat9>& seed = std::nullopt);

// Fills grid.results over delta_values x lambda_values. Cells are
// independent jobs on a worker pool unless warm_start chains them.
SweepGrid arnold_tongue(SweepGrid grid);

std::vector<CellRecord> fixed_lambda_row(const SweepGrid& grid,
                                         std::size_t lambda_index);

// Width of the synchronization region on a row over delta at fixed lambda:
// linear-interpolated length of the contiguous interval around the
// smallest-|delta| cell where s_r_max >= threshold * reference value.
// Throws ZeroReference when the reference cell has no synchronization.
double tongue_width(const std::vector<CellRecord>& row, double threshold = 0.5);

// Steady-state synchronization for each (delta, beta) pair at fixed lambda.
std::vector<CellRecord> temperature_scan(const std::vector<double>& deltas,
                                         const std::vector<double>& betas,
                                         double lambda,
                                         const SweepSettings& settings);

}  // namespace qsync
