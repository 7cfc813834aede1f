#include "qsync/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsync/errors.hpp"
#include "qsync/measures.hpp"
#include "qsync/threading.hpp"

namespace qsync {

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

Mat9 cell_initial(const SweepSettings& s, const SystemModel& model,
                  const BathSpec& bath, const std::optional<Mat9>& seed) {
    if (seed) return *seed;
    if (s.custom_initial) return *s.custom_initial;
    return make_initial(s.preset, model, bath);
}

}  // namespace

namespace {

CellRecord run_cell_impl(double delta, double lambda, double beta,
                         const SweepSettings& settings,
                         const std::optional<Mat9>& seed, Mat9* rho_out) {
    CellRecord rec;
    rec.delta = delta;
    rec.lambda = lambda;
    rec.beta = beta;
    rec.s_r_max = qnan;
    rec.phi_star = qnan;
    rec.mutual_information = qnan;
    rec.log_negativity = qnan;
    rec.t_reached = qnan;
    try {
        const SystemModel model = build_model(settings.omega1, delta, settings.h);
        const BathSpec bath = make_bath(lambda, settings.gamma, beta, settings.m_cut);
        const HierarchySpace space = enumerate_indices(
            settings.channel_count * (settings.m_cut + 1), settings.tier_cap);
        const Mat9 initial = cell_initial(settings, model, bath, seed);
        const SteadyResult res =
            steady_state(initial, model, bath, space, settings.steady);
        rec.converged = res.converged;
        rec.t_reached = res.t_reached;
        if (rho_out) *rho_out = res.rho;
        const MaxSync ms = max_sync(res.rho, settings.phi_samples);
        rec.s_r_max = ms.s_r_max;
        rec.phi_star = ms.phi_star;
        rec.log_negativity = negativity_measures(res.rho).log_negativity;
        // Keep the cell usable for tongue widths even when truncation noise
        // pushes an eigenvalue below the entropy validation floor.
        try {
            rec.mutual_information = mutual_information(res.rho);
        } catch (const std::exception& ex) {
            rec.mutual_information = qnan;
            rec.error = std::string("mutual_information: ") + ex.what();
        }
    } catch (const std::exception& ex) {
        rec.error = ex.what();
        rec.converged = false;
    }
    return rec;
}

}  // namespace

CellRecord run_cell(double delta, double lambda, double beta,
                    const SweepSettings& settings, const std::optional<Mat9>& seed) {
    return run_cell_impl(delta, lambda, beta, settings, seed, nullptr);
}

SweepGrid arnold_tongue(SweepGrid grid) {
    if (grid.delta_values.empty() || grid.lambda_values.empty())
        throw std::invalid_argument("arnold_tongue: empty parameter grid");

    const std::size_t nd = grid.delta_values.size();
    const std::size_t nl = grid.lambda_values.size();
    grid.results.assign(nd * nl, CellRecord{});

    if (grid.settings.warm_start) {
        // Seed each cell with the previous steady state (physical state only;
        // the hierarchy restarts from zero inside steady_state).
        std::optional<Mat9> seed;
        Mat9 last;
        for (std::size_t i = 0; i < nd; ++i) {
            for (std::size_t j = 0; j < nl; ++j) {
                const CellRecord rec =
                    run_cell_impl(grid.delta_values[i], grid.lambda_values[j],
                                  grid.settings.beta, grid.settings, seed, &last);
                grid.results[i * nl + j] = rec;
                if (rec.error.empty())
                    seed = last;
                else
                    seed.reset();
            }
        }
        return grid;
    }

    parallel_for(nd * nl, worker_count(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t cell = begin; cell < end; ++cell) {
            const std::size_t i = cell / nl;
            const std::size_t j = cell % nl;
            grid.results[cell] = run_cell(grid.delta_values[i],
                                          grid.lambda_values[j],
                                          grid.settings.beta, grid.settings);
        }
    });
    return grid;
}

std::vector<CellRecord> fixed_lambda_row(const SweepGrid& grid,
                                         std::size_t lambda_index) {
    if (lambda_index >= grid.lambda_values.size())
        throw std::invalid_argument("fixed_lambda_row: lambda index out of range");
    if (grid.results.size() != grid.delta_values.size() * grid.lambda_values.size())
        throw std::invalid_argument("fixed_lambda_row: grid has no results");
    std::vector<CellRecord> row;
    row.reserve(grid.delta_values.size());
    for (std::size_t i = 0; i < grid.delta_values.size(); ++i)
        row.push_back(grid.results[i * grid.lambda_values.size() + lambda_index]);
    return row;
}

double tongue_width(const std::vector<CellRecord>& row, double threshold) {
    if (row.empty()) throw std::invalid_argument("tongue_width: empty row");
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("tongue_width: threshold must be in (0, 1]");
    for (std::size_t i = 1; i < row.size(); ++i)
        if (!(row[i].delta > row[i - 1].delta))
            throw std::invalid_argument("tongue_width: row must be sorted by delta");

    std::size_t ref = 0;
    for (std::size_t i = 1; i < row.size(); ++i)
        if (std::abs(row[i].delta) < std::abs(row[ref].delta)) ref = i;
    const double reference = row[ref].s_r_max;
    if (std::isnan(reference))
        throw std::runtime_error("tongue_width: reference cell failed");
    if (!(reference > 1e-12))
        throw ZeroReference("tongue_width: reference cell has no synchronization");

    const double level = threshold * reference;
    auto cross = [&](std::size_t inside, std::size_t outside) {
        const double si = row[inside].s_r_max, so = row[outside].s_r_max;
        if (std::isnan(so))
            throw std::runtime_error("tongue_width: failed cell at the tongue boundary");
        const double f = (si - level) / (si - so);
        return row[inside].delta + f * (row[outside].delta - row[inside].delta);
    };

    std::size_t hi = ref;
    while (hi + 1 < row.size() && row[hi + 1].s_r_max >= level) ++hi;
    const double right =
        (hi + 1 < row.size()) ? cross(hi, hi + 1) : row.back().delta;

    std::size_t lo = ref;
    while (lo > 0 && row[lo - 1].s_r_max >= level) --lo;
    const double left = (lo > 0) ? cross(lo, lo - 1) : row.front().delta;

    return right - left;
}

std::vector<CellRecord> temperature_scan(const std::vector<double>& deltas,
                                         const std::vector<double>& betas,
                                         double lambda,
                                         const SweepSettings& settings) {
    if (deltas.empty() || betas.empty())
        throw std::invalid_argument("temperature_scan: empty parameter grid");

    std::vector<CellRecord> out(deltas.size() * betas.size());
    parallel_for(out.size(), worker_count(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t cell = begin; cell < end; ++cell) {
            const std::size_t i = cell / betas.size();
            const std::size_t j = cell % betas.size();
            out[cell] = run_cell(deltas[i], lambda, betas[j], settings);
        }
    });
    return out;
}

}  // namespace qsync
