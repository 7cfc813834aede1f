#include "qsync/heom.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qsync/errors.hpp"
#include "qsync/measures.hpp"

namespace qsync {

namespace {

unsigned long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / i;
    return r;
}

int infer_channels(const BathSpec& bath, const HierarchySpace& space) {
    const int per = bath.m_cut + 1;
    if (space.modes() % per != 0)
        throw std::invalid_argument(
            "hierarchy mode count is not a multiple of the bath expansion size");
    const int channels = space.modes() / per;
    if (channels != 1 && channels != 2)
        throw std::invalid_argument("hierarchy must carry one or two coupling channels");
    return channels;
}

Eigen::Array<Complex, 9, 9> level_spacing_factors(const Mat9& hs) {
    // H_S is diagonal, so the commutator acts elementwise: -i (E_j - E_k).
    Eigen::Array<Complex, 9, 9> lam;
    for (int j = 0; j < 9; ++j)
        for (int k = 0; k < 9; ++k)
            lam(j, k) = Complex{0.0, -1.0} * (hs(j, j).real() - hs(k, k).real());
    return lam;
}

}  // namespace

HierarchySpace enumerate_indices(int modes, int tier_cap) {
    if (modes < 1)
        throw std::invalid_argument("enumerate_indices: need at least one mode");
    if (tier_cap < 0)
        throw std::invalid_argument("enumerate_indices: tier cap must be non-negative");
    if (tier_cap > 255)
        throw std::invalid_argument("enumerate_indices: tier cap too large");

    HierarchySpace s;
    s.modes_ = modes;
    s.tier_cap_ = tier_cap;

    std::map<std::vector<std::uint8_t>, std::size_t> rank;
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(modes), 0);
    std::function<void(int, int)> emit = [&](int pos, int left) {
        if (pos == modes) {
            rank.emplace(cur, s.count_);
            s.indices_.insert(s.indices_.end(), cur.begin(), cur.end());
            s.tiers_.push_back(static_cast<std::uint8_t>(tier_cap - left));
            ++s.count_;
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(v);
            emit(pos + 1, left - v);
        }
        cur[static_cast<std::size_t>(pos)] = 0;
    };
    emit(0, tier_cap);

    if (s.count_ != binomial(modes + tier_cap, tier_cap))
        throw std::logic_error("enumerate_indices: count does not match binomial");

    const std::size_t km = static_cast<std::size_t>(modes);
    s.raise_.assign(s.count_ * km, -1);
    s.lower_.assign(s.count_ * km, -1);
    std::vector<std::uint8_t> probe(km);
    for (std::size_t r = 0; r < s.count_; ++r) {
        const std::uint8_t* idx = s.index(r);
        for (int m = 0; m < modes; ++m) {
            const std::size_t slot = r * km + static_cast<std::size_t>(m);
            std::copy(idx, idx + modes, probe.begin());
            if (s.tiers_[r] < tier_cap) {
                ++probe[static_cast<std::size_t>(m)];
                s.raise_[slot] = static_cast<std::int64_t>(rank.at(probe));
                --probe[static_cast<std::size_t>(m)];
            }
            if (idx[m] > 0) {
                --probe[static_cast<std::size_t>(m)];
                s.lower_[slot] = static_cast<std::int64_t>(rank.at(probe));
            }
        }
    }
    return s;
}

HierarchyState make_hierarchy_state(const Mat9& rho0, const HierarchySpace& space) {
    validate_initial(rho0);
    HierarchyState st;
    st.ados.assign(space.size(), Mat9::Zero());
    st.ados[0] = rho0;
    return st;
}

HierarchyState heom_rhs(const HierarchyState& state, const SystemModel& model,
                        const BathSpec& bath, const HierarchySpace& space) {
    if (state.ados.size() != space.size())
        throw std::invalid_argument("hierarchy state size does not match index space");
    const int channels = infer_channels(bath, space);
    const int per = bath.m_cut + 1;
    const int modes = space.modes();

    std::vector<double> nu_mode(static_cast<std::size_t>(modes));
    std::vector<Complex> c_mode(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) {
        const std::size_t k = static_cast<std::size_t>(m % per);
        nu_mode[static_cast<std::size_t>(m)] = bath.nu[k];
        c_mode[static_cast<std::size_t>(m)] = bath.c[k];
    }
    const Eigen::Array<Complex, 9, 9> lam = level_spacing_factors(model.hs);
    const Mat9& v = model.v;
    const Complex xi = static_cast<double>(channels) * bath.terminator;
    const Complex mi{0.0, -1.0};

    HierarchyState out;
    out.time = state.time;
    out.ados.assign(space.size(), Mat9::Zero());
    for (std::size_t r = 0; r < space.size(); ++r) {
        const Mat9& rho = state.ados[r];
        const std::uint8_t* n = space.index(r);
        double decay = 0.0;
        for (int m = 0; m < modes; ++m)
            decay += n[m] * nu_mode[static_cast<std::size_t>(m)];

        Mat9 d;
        d.array() = (lam - decay) * rho.array();
        const Mat9 w = v * rho - rho * v;
        d -= xi * (v * w - w * v);
        for (int m = 0; m < modes; ++m) {
            if (n[m] > 0) {
                const Mat9& lo = state.ados[static_cast<std::size_t>(space.lowered(r, m))];
                const Complex ck = c_mode[static_cast<std::size_t>(m)];
                d += mi * static_cast<double>(n[m]) *
                     (ck * (v * lo) - std::conj(ck) * (lo * v));
            }
            const std::int64_t up = space.raised(r, m);
            if (up >= 0) {
                const Mat9& hi = state.ados[static_cast<std::size_t>(up)];
                d += mi * (v * hi - hi * v);
            }
        }
        out.ados[r] = d;
    }
    return out;
}

InitialPreset parse_preset(const std::string& name) {
    if (name == "equatorial_product") return InitialPreset::EquatorialProduct;
    if (name == "diagonal_thermal") return InitialPreset::DiagonalThermal;
    if (name == "ground") return InitialPreset::Ground;
    throw std::invalid_argument("unknown initial-state preset: " + name);
}

std::string preset_name(InitialPreset preset) {
    switch (preset) {
        case InitialPreset::EquatorialProduct: return "equatorial_product";
        case InitialPreset::DiagonalThermal: return "diagonal_thermal";
        case InitialPreset::Ground: return "ground";
    }
    throw std::invalid_argument("unknown initial-state preset");
}

Mat9 make_initial(InitialPreset preset, const SystemModel& model, const BathSpec& bath) {
    switch (preset) {
        case InitialPreset::EquatorialProduct: {
            Vec3 a;
            a << 0.5, 1.0 / std::numbers::sqrt2, 0.5;
            Vec9 psi;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) psi(3 * i + j) = a(i) * a(j);
            return psi * psi.adjoint();
        }
        case InitialPreset::DiagonalThermal: {
            double emin = std::numeric_limits<double>::infinity();
            for (int j = 0; j < 9; ++j) emin = std::min(emin, model.hs(j, j).real());
            Mat9 rho = Mat9::Zero();
            double z = 0.0;
            for (int j = 0; j < 9; ++j) {
                const double w = std::exp(-bath.beta * (model.hs(j, j).real() - emin));
                rho(j, j) = w;
                z += w;
            }
            rho /= z;
            return rho;
        }
        case InitialPreset::Ground: {
            int best = 0;
            for (int j = 1; j < 9; ++j)
                if (model.hs(j, j).real() < model.hs(best, best).real()) best = j;
            Mat9 rho = Mat9::Zero();
            rho(best, best) = 1.0;
            return rho;
        }
    }
    throw std::invalid_argument("unknown initial-state preset");
}

void validate_initial(const Mat9& rho) {
    if (!rho.allFinite())
        throw InvalidInitialState("initial state has non-finite entries");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw InvalidInitialState("initial state is not Hermitian");
    if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-9)
        throw InvalidInitialState("initial state trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Mat9> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw InvalidInitialState("initial state has a negative eigenvalue");
}

double max_stable_step(const BathSpec& bath) {
    double numax = 0.0;
    for (double nu : bath.nu) numax = std::max(numax, nu);
    return 1.0 / (2.0 * numax);
}

HeomPropagator::HeomPropagator(const SystemModel& model, const BathSpec& bath,
                               const HierarchySpace& space, const Mat9& initial,
                               double dt)
    : n_(space.size()), modes_(space.modes()), dt_(dt) {
    if (dt <= 0.0) throw std::invalid_argument("step size must be positive");
    validate_initial(initial);
    const int channels = infer_channels(bath, space);
    const int per = bath.m_cut + 1;

    vmat_ = model.v;
    lam_ = level_spacing_factors(model.hs);
    xi_channels_ = static_cast<double>(channels) * std::real(bath.terminator);

    std::vector<double> nu_mode(static_cast<std::size_t>(modes_));
    std::vector<Complex> c_mode(static_cast<std::size_t>(modes_));
    for (int m = 0; m < modes_; ++m) {
        const std::size_t k = static_cast<std::size_t>(m % per);
        nu_mode[static_cast<std::size_t>(m)] = bath.nu[k];
        c_mode[static_cast<std::size_t>(m)] = bath.c[k];
    }

    const Complex mi{0.0, -1.0};
    decay_.resize(n_);
    edge_start_.resize(n_ + 1);
    for (std::size_t r = 0; r < n_; ++r) {
        edge_start_[r] = edges_.size();
        const std::uint8_t* n = space.index(r);
        double decay = 0.0;
        for (int m = 0; m < modes_; ++m) {
            decay += n[m] * nu_mode[static_cast<std::size_t>(m)];
            if (n[m] > 0)
                edges_.push_back({static_cast<std::int32_t>(space.lowered(r, m)),
                                  mi * static_cast<double>(n[m]) *
                                      c_mode[static_cast<std::size_t>(m)]});
            const std::int64_t up = space.raised(r, m);
            if (up >= 0) edges_.push_back({static_cast<std::int32_t>(up), mi});
        }
        decay_[r] = decay;
    }
    edge_start_[n_] = edges_.size();

    const Eigen::Index len = static_cast<Eigen::Index>(81 * n_);
    y_.setZero(len);
    k_.setZero(len);
    ytmp_.setZero(len);
    acc_.setZero(len);
    p_.setZero(len);
    w_.setZero(len);
    t_.setZero(len);
    Eigen::Map<Mat9>(y_.data()) = initial;
}

void HeomPropagator::rhs(const Complex* in, Complex* out) {
    using BlockRow = Eigen::Matrix<Complex, 9, Eigen::Dynamic>;
    const Eigen::Index cols = static_cast<Eigen::Index>(9 * n_);
    Eigen::Map<const BlockRow> all_in(in, 9, cols);
    Eigen::Map<BlockRow> all_p(p_.data(), 9, cols);
    Eigen::Map<BlockRow> all_w(w_.data(), 9, cols);
    Eigen::Map<BlockRow> all_t(t_.data(), 9, cols);

    // One batched product V * [rho_0 | rho_1 | ...] gives every V*rho block.
    all_p.noalias() = vmat_ * all_in;
    for (std::size_t r = 0; r < n_; ++r) {
        // Hermitian ADOs: rho V = (V rho)^+, so [V, rho] = P - P^+.
        Eigen::Map<const Mat9> pr(p_.data() + 81 * r);
        Eigen::Map<Mat9> wr(w_.data() + 81 * r);
        wr = pr;
        wr -= pr.adjoint().eval();
    }
    all_t.noalias() = vmat_ * all_w;

    for (std::size_t r = 0; r < n_; ++r) {
        Eigen::Map<const Mat9> rho(in + 81 * r);
        Eigen::Map<Mat9> d(out + 81 * r);

        // Every bath term lands as u + u^+: the closure -Xi_c (T + T^+), the
        // lower couplings -i n (c P - c* P^+), and the raises -i (P - P^+).
        Mat9 u = (-xi_channels_) * Eigen::Map<const Mat9>(t_.data() + 81 * r);
        for (std::uint64_t e = edge_start_[r]; e < edge_start_[r + 1]; ++e)
            u += edges_[e].coef * Eigen::Map<const Mat9>(p_.data() + 81 * edges_[e].src);

        d.array() = (lam_ - decay_[r]) * rho.array();
        d += u;
        d += u.adjoint().eval();
    }
}

void HeomPropagator::step() {
    const double h = dt_;
    rhs(y_.data(), k_.data());
    acc_ = k_;
    ytmp_ = y_ + (h / 2.0) * k_;
    rhs(ytmp_.data(), k_.data());
    acc_ += 2.0 * k_;
    ytmp_ = y_ + (h / 2.0) * k_;
    rhs(ytmp_.data(), k_.data());
    acc_ += 2.0 * k_;
    ytmp_ = y_ + h * k_;
    rhs(ytmp_.data(), k_.data());
    acc_ += k_;
    y_ += (h / 6.0) * acc_;
    ++steps_done_;
    time_ = static_cast<double>(steps_done_) * dt_;
}

void HeomPropagator::advance(int steps) {
    for (int s = 0; s < steps; ++s) step();
}

Mat9 HeomPropagator::rho0() const { return Eigen::Map<const Mat9>(y_.data()); }

bool HeomPropagator::finite() const { return y_.allFinite(); }

std::vector<TrajectorySample> evolve(const Mat9& initial, const SystemModel& model,
                                     const BathSpec& bath, const HierarchySpace& space,
                                     double dt, double t_final, int sample_every) {
    if (sample_every < 1)
        throw std::invalid_argument("evolve: sample_every must be at least 1");
    if (t_final < 0.0) throw std::invalid_argument("evolve: t_final must be non-negative");

    HeomPropagator prop(model, bath, space, initial, dt);
    const long n_steps = std::lround(std::ceil(t_final / dt - 1e-12));

    std::vector<TrajectorySample> samples;
    samples.reserve(static_cast<std::size_t>(n_steps / sample_every) + 2);
    samples.push_back({0.0, prop.rho0()});
    for (long s = 1; s <= n_steps; ++s) {
        prop.step();
        if (s % sample_every == 0 || s == n_steps) {
            if (!prop.finite())
                throw NonFiniteState("integration diverged at t = " +
                                     std::to_string(prop.time()) +
                                     " (step size too large)");
            samples.push_back({prop.time(), prop.rho0()});
        }
    }
    return samples;
}

SteadyResult steady_state(const Mat9& initial, const SystemModel& model,
                          const BathSpec& bath, const HierarchySpace& space,
                          const SteadyOptions& options) {
    if (options.tolerance <= 0.0)
        throw std::invalid_argument("steady_state: tolerance must be positive");
    if (options.window <= 0.0)
        throw std::invalid_argument("steady_state: window must be positive");
    if (options.max_time < options.window)
        throw std::invalid_argument("steady_state: max_time shorter than the window");
    if (options.check_every < 1)
        throw std::invalid_argument("steady_state: check_every must be at least 1");

    constexpr int profile_n = 64;
    struct Snapshot {
        double t;
        std::array<double, 81> mag;
        std::array<double, profile_n> profile;
    };

    HeomPropagator prop(model, bath, space, initial, options.dt);
    auto take = [&]() {
        const Mat9 rho = prop.rho0();
        if (!rho.allFinite())
            throw NonFiniteState("integration diverged at t = " +
                                 std::to_string(prop.time()) +
                                 " (step size too large)");
        Snapshot s;
        s.t = prop.time();
        for (int i = 0; i < 81; ++i) s.mag[static_cast<std::size_t>(i)] = std::abs(rho.data()[i]);
        const SyncCoherences c = sync_coherences(rho);
        for (int p = 0; p < profile_n; ++p)
            s.profile[static_cast<std::size_t>(p)] =
                sync_from_coherences(c, 2.0 * std::numbers::pi * p / profile_n);
        return s;
    };

    std::deque<Snapshot> window;
    window.push_back(take());

    const long steps_max =
        std::lround(std::ceil(options.max_time / options.dt - 1e-12));
    long done = 0;
    SteadyResult res;
    while (done < steps_max) {
        const int chunk = static_cast<int>(
            std::min<long>(options.check_every, steps_max - done));
        prop.advance(chunk);
        done += chunk;
        window.push_back(take());

        const double t = prop.time();
        // Keep the newest snapshot at or before t - window so the retained
        // span always covers a full window.
        while (window.size() >= 2 && window[1].t <= t - options.window + 1e-12)
            window.pop_front();
        if (window.front().t > t - options.window + 1e-12 || window.size() < 2)
            continue;

        double drift = 0.0;
        for (int i = 0; i < 81; ++i) {
            double lo = window.front().mag[static_cast<std::size_t>(i)], hi = lo;
            for (const Snapshot& s : window) {
                lo = std::min(lo, s.mag[static_cast<std::size_t>(i)]);
                hi = std::max(hi, s.mag[static_cast<std::size_t>(i)]);
            }
            drift = std::max(drift, hi - lo);
        }
        for (int p = 0; p < profile_n && drift < options.tolerance; ++p) {
            double lo = window.front().profile[static_cast<std::size_t>(p)], hi = lo;
            for (const Snapshot& s : window) {
                lo = std::min(lo, s.profile[static_cast<std::size_t>(p)]);
                hi = std::max(hi, s.profile[static_cast<std::size_t>(p)]);
            }
            drift = std::max(drift, hi - lo);
        }
        if (drift < options.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.rho = prop.rho0();
    res.t_reached = prop.time();
    return res;
}

std::vector<ConvergenceRow> convergence_study(
    const SystemModel& model, double lambda, double gamma, double beta,
    const std::vector<std::pair<int, int>>& truncations, const Mat9& initial,
    const SteadyOptions& options, int channel_count) {
    if (truncations.empty())
        throw std::invalid_argument("convergence_study: no truncation pairs given");
    if (channel_count != 1 && channel_count != 2)
        throw std::invalid_argument("convergence_study: channel count must be 1 or 2");

    std::vector<ConvergenceRow> rows;
    rows.reserve(truncations.size());
    for (const auto& [m_cut, tier_cap] : truncations) {
        const BathSpec bath = make_bath(lambda, gamma, beta, m_cut);
        const HierarchySpace space =
            enumerate_indices(channel_count * (m_cut + 1), tier_cap);
        const SteadyResult res = steady_state(initial, model, bath, space, options);
        const MaxSync ms = max_sync(res.rho);
        ConvergenceRow row;
        row.m_cut = m_cut;
        row.tier_cap = tier_cap;
        row.ado_count = space.size();
        row.s_r_max = ms.s_r_max;
        row.diff_prev = rows.empty() ? 0.0 : std::abs(ms.s_r_max - rows.back().s_r_max);
        row.converged = res.converged;
        row.t_reached = res.t_reached;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qsync
