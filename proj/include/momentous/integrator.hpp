#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "momentous/errors.hpp"
#include "momentous/frame.hpp"
#include "momentous/model_system.hpp"

namespace momentous {

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 80.0;
    int sample_every = 100;

    void validate() const {
        if (!(std::isfinite(dt) && dt > 0)) throw ConfigError("dt must be positive");
        if (!(std::isfinite(t_end) && t_end > 0)) throw ConfigError("t-end must be positive");
        if (sample_every < 1) throw ConfigError("sample-every must be at least 1");
        if (t_end / dt < 1 - 1e-9) throw ConfigError("t-end must cover at least one step");
    }

    /// Whole steps that fit in [0, t_end]; a ratio within 1e-9 of an integer is
    /// rounded to it so 80 / 1e-3 gives 80000.
    std::size_t steps() const {
        const double r = t_end / dt;
        const double nearest = std::round(r);
        const double n = std::abs(r - nearest) <= 1e-9 * std::max(1.0, r) ? nearest : std::floor(r);
        return static_cast<std::size_t>(n);
    }

    double sample_interval() const { return dt * sample_every; }
};

template <int N>
struct Sample {
    double t;
    MeanVector<N> means;
    CovarianceMatrix<N> cov;
};

template <int N>
struct Trajectory {
    std::optional<ModelParams> params;
    CanonicalFrame frame;
    ModelLabel label;
    double step;
    std::vector<Sample<N>> samples;
    /// Largest |cov - cov^T| seen before symmetrisation.
    double max_asymmetry = 0.0;
};

namespace detail {

template <int N>
struct State {
    Vec<N> z;
    Mat<N> s;
};

template <int N>
State<N> rk4_step(const ModelSystem<N>& sys, const State<N>& y, double dt) {
    const Vec<N> k1z = sys.mean_rate(y.z);
    const Mat<N> k1s = sys.moment_rate(y.s);
    const Vec<N> k2z = sys.mean_rate(y.z + 0.5 * dt * k1z);
    const Mat<N> k2s = sys.moment_rate(y.s + 0.5 * dt * k1s);
    const Vec<N> k3z = sys.mean_rate(y.z + 0.5 * dt * k2z);
    const Mat<N> k3s = sys.moment_rate(y.s + 0.5 * dt * k2s);
    const Vec<N> k4z = sys.mean_rate(y.z + dt * k3z);
    const Mat<N> k4s = sys.moment_rate(y.s + dt * k3s);
    return {y.z + (dt / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
            y.s + (dt / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)};
}

}  // namespace detail

/// Fixed-step classical Runge-Kutta propagation of means and covariance.
/// The covariance is re-symmetrised after every step. Throws NumericalFailure
/// if the state stops being finite.
template <int N>
Trajectory<N> integrate(const ModelSystem<N>& sys, const MeanVector<N>& means0,
                        const CovarianceMatrix<N>& cov0, const IntegratorConfig& cfg) {
    cfg.validate();
    require_same_frame(sys.frame, means0.frame());
    require_same_frame(sys.frame, cov0.frame());

    Trajectory<N> traj{sys.params, sys.frame, sys.label, cfg.sample_interval(), {}, 0.0};
    const std::size_t n = cfg.steps();
    const auto every = static_cast<std::size_t>(cfg.sample_every);
    traj.samples.reserve(n / every + 1);
    traj.samples.push_back({0.0, means0, cov0});

    detail::State<N> y{means0.values(), cov0.entries()};
    for (std::size_t step = 1; step <= n; ++step) {
        y = detail::rk4_step(sys, y, cfg.dt);
        const double t = static_cast<double>(step) * cfg.dt;
        if (!y.z.allFinite() || !y.s.allFinite()) throw NumericalFailure(step, t);
        const double asym = (y.s - y.s.transpose()).cwiseAbs().maxCoeff();
        if (asym > traj.max_asymmetry) traj.max_asymmetry = asym;
        y.s = (y.s + y.s.transpose()) * 0.5;
        if (step % every == 0)
            traj.samples.push_back({t, MeanVector<N>(sys.frame, y.z), CovarianceMatrix<N>(sys.frame, y.s)});
    }
    return traj;
}

/// Final means followed by packed moments.
template <int N>
Eigen::VectorXd final_state_vector(const Trajectory<N>& traj) {
    const auto& last = traj.samples.back();
    const auto packed = last.cov.packed();
    Eigen::VectorXd v(N + packed.size());
    v << last.means.values(), packed;
    return v;
}

/// Observed order from runs at dt, dt/2 and dt/4:
/// log2(|y(dt) - y(dt/2)| / |y(dt/2) - y(dt/4)|).
template <int N>
double convergence_order(const ModelSystem<N>& sys, const MeanVector<N>& means0,
                         const CovarianceMatrix<N>& cov0, const IntegratorConfig& cfg) {
    auto run = [&](double dt) {
        IntegratorConfig c = cfg;
        c.dt = dt;
        c.sample_every = static_cast<int>(c.steps());
        return final_state_vector(integrate(sys, means0, cov0, c));
    };
    const auto y1 = run(cfg.dt);
    const auto y2 = run(cfg.dt / 2);
    const auto y4 = run(cfg.dt / 4);
    return std::log2((y1 - y2).norm() / (y2 - y4).norm());
}

}  // namespace momentous
