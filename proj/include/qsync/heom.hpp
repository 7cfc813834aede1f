#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsync/bath.hpp"
#include "qsync/operators.hpp"
#include "qsync/types.hpp"

namespace qsync {

// The set of hierarchy multi-indices n over K exponential modes with
// sum(n) <= tier_cap, enumerated in lexicographic order (all-zeros first),
// plus raise/lower neighbor tables with -1 marking "outside truncation".
class HierarchySpace {
public:
    HierarchySpace() = default;

    int modes() const { return modes_; }
    int tier_cap() const { return tier_cap_; }
    std::size_t size() const { return count_; }

    const std::uint8_t* index(std::size_t rank) const {
        return indices_.data() + rank * static_cast<std::size_t>(modes_);
    }
    int tier(std::size_t rank) const { return tiers_[rank]; }
    std::int64_t raised(std::size_t rank, int mode) const {
        return raise_[rank * static_cast<std::size_t>(modes_) +
                      static_cast<std::size_t>(mode)];
    }
    std::int64_t lowered(std::size_t rank, int mode) const {
        return lower_[rank * static_cast<std::size_t>(modes_) +
                      static_cast<std::size_t>(mode)];
    }

    friend HierarchySpace enumerate_indices(int modes, int tier_cap);

private:
    int modes_ = 0;
    int tier_cap_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint8_t> indices_;  // count * modes, row per rank
    std::vector<std::uint8_t> tiers_;
    std::vector<std::int64_t> raise_;  // count * modes, -1 outside truncation
    std::vector<std::int64_t> lower_;  // count * modes, -1 when component is 0
};

// Enumerates all multi-indices; count = binomial(modes + tier_cap, tier_cap).
HierarchySpace enumerate_indices(int modes, int tier_cap);

// Full hierarchy state: ados[0] is the physical reduced density matrix,
// the rest are bookkeeping operators for the bath memory.
struct HierarchyState {
    double time = 0.0;
    std::vector<Mat9> ados;
};

// rho0 in slot 0, all other ADOs zero (factorized system-bath start).
HierarchyState make_hierarchy_state(const Mat9& rho0, const HierarchySpace& space);

// Reference right-hand side, valid for arbitrary (non-Hermitian) ADOs:
//   d rho^n/dt = -(i[H,.] + sum n_m nu_m) rho^n
//                - channels * Xi [V,[V,rho^n]]
//                - i sum_m n_m (c_m V rho^{n_m-} - c_m^* rho^{n_m-} V)
//                - i sum_m [V, rho^{n_m+}]
// with out-of-truncation neighbors treated as zero.
HierarchyState heom_rhs(const HierarchyState& state, const SystemModel& model,
                        const BathSpec& bath, const HierarchySpace& space);

enum class InitialPreset { EquatorialProduct, DiagonalThermal, Ground };

InitialPreset parse_preset(const std::string& name);
std::string preset_name(InitialPreset preset);

Mat9 make_initial(InitialPreset preset, const SystemModel& model,
                  const BathSpec& bath);

// Throws InvalidInitialState unless rho is a finite, Hermitian, unit-trace,
// positive-semidefinite matrix.
void validate_initial(const Mat9& rho);

// Step size above which the fastest hierarchy decay mode destabilizes the
// fixed-step integrator: 1 / (2 max_k nu_k).
double max_stable_step(const BathSpec& bath);

// Fixed-step RK4 propagator over the flat hierarchy, optimized for the
// Hermitian invariant subspace (every ADO stays Hermitian when the initial
// physical state is Hermitian and the rest start at zero).
class HeomPropagator {
public:
    HeomPropagator(const SystemModel& model, const BathSpec& bath,
                   const HierarchySpace& space, const Mat9& initial, double dt);

    void step();              // one RK4 step
    void advance(int steps);  // convenience loop

    double time() const { return time_; }
    double dt() const { return dt_; }
    std::size_t ado_count() const { return n_; }

    Mat9 rho0() const;        // physical state (slot 0)
    bool finite() const;      // false once any entry is non-finite

private:
    void rhs(const Complex* in, Complex* out);

    std::size_t n_ = 0;
    int modes_ = 0;
    double dt_ = 0.0;
    double time_ = 0.0;
    std::size_t steps_done_ = 0;
    Mat9 vmat_;
    Eigen::Array<Complex, 9, 9> lam_;  // -i (E_j - E_k), column-major
    double xi_channels_ = 0.0;         // channel count times the closure Xi
    std::vector<double> decay_;        // sum_m n_m nu_m per ADO

    struct Edge {
        std::int32_t src;  // neighbor rank whose V*rho block feeds this ADO
        Complex coef;
    };
    std::vector<Edge> edges_;
    std::vector<std::uint64_t> edge_start_;  // CSR offsets, size n_+1

    Eigen::VectorXcd y_, k_, ytmp_, acc_, p_, w_, t_;
};

struct TrajectorySample {
    double time = 0.0;
    Mat9 rho;
};

// RK4 trajectory of the physical state, sampled every sample_every steps
// (the initial state is sample 0; the final time is always included).
std::vector<TrajectorySample> evolve(const Mat9& initial, const SystemModel& model,
                                     const BathSpec& bath, const HierarchySpace& space,
                                     double dt, double t_final, int sample_every = 1);

struct SteadyOptions {
    double dt = 5e-3;
    double tolerance = 1e-6;
    double window = 50.0;    // trailing window length (time units)
    double max_time = 2000.0;
    int check_every = 100;   // steps between convergence snapshots
};

struct SteadyResult {
    Mat9 rho;
    bool converged = false;
    double t_reached = 0.0;
};

// Integrates until, over the trailing window, both the elementwise magnitudes
// of rho0 and the synchronization profile S_r(phi) on a fixed phase grid stop
// drifting (their per-entry spread falls below tolerance). Returns the last
// state with converged = false once max_time is exhausted.
SteadyResult steady_state(const Mat9& initial, const SystemModel& model,
                          const BathSpec& bath, const HierarchySpace& space,
                          const SteadyOptions& options);

struct ConvergenceRow {
    int m_cut = 0;
    int tier_cap = 0;
    std::size_t ado_count = 0;
    double s_r_max = 0.0;
    double diff_prev = 0.0;  // |s_r_max - previous row|, 0 for the first row
    bool converged = false;
    double t_reached = 0.0;
};

// Steady-state max_phi S_r across a sequence of (m_cut, tier_cap) pairs,
// with successive differences, to establish truncation adequacy.
std::vector<ConvergenceRow> convergence_study(
    const SystemModel& model, double lambda, double gamma, double beta,
    const std::vector<std::pair<int, int>>& truncations, const Mat9& initial,
    const SteadyOptions& options, int channel_count = 2);

}  // namespace qsync
