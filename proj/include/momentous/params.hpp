#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "momentous/errors.hpp"

namespace momentous {

/// Raw parameter values as supplied by a caller. Exactly one of big_omega and
/// omega0 is normally set; if both are, they must agree.
struct ParamInput {
    double m = 1.0;
    double hbar = 1.0;
    double lambda = 0.04;
    std::optional<double> big_omega = 1.5;
    std::optional<double> omega0;
    double gamma = 0.08;
    double omega = 1.5;
    double omega_prime = 1.5;
    double nbar = 0.0;
    int n_level = 3;
};

/// Validated constants for both the Bateman-Tikochinsky and the Lindblad
/// oscillator. Satisfies omega0^2 = big_omega^2 + lambda^2 by construction.
class ModelParams {
public:
    static ModelParams make(const ParamInput& in) {
        auto finite = [](double v) { return std::isfinite(v); };
        auto require = [](bool ok, const std::string& what) {
            if (!ok) throw ConfigError(what);
        };
        require(finite(in.m) && in.m > 0, "m must be positive");
        require(finite(in.hbar) && in.hbar > 0, "hbar must be positive");
        require(finite(in.lambda) && in.lambda >= 0, "lambda must be non-negative");
        require(finite(in.gamma) && in.gamma >= 0, "gamma must be non-negative");
        require(finite(in.omega) && in.omega > 0, "omega must be positive");
        require(finite(in.omega_prime), "omega-prime must be finite");
        require(finite(in.nbar) && in.nbar >= 0, "nbar must be non-negative");
        require(in.n_level >= 0, "n-level must be non-negative");
        require(in.big_omega.has_value() || in.omega0.has_value(),
                "one of big-omega or omega0 is required");

        ModelParams p;
        p.m_ = in.m;
        p.hbar_ = in.hbar;
        p.lambda_ = in.lambda;
        p.gamma_ = in.gamma;
        p.omega_ = in.omega;
        p.omega_prime_ = in.omega_prime;
        p.nbar_ = in.nbar;
        p.n_level_ = in.n_level;

        if (in.big_omega) {
            require(finite(*in.big_omega) && *in.big_omega > 0, "big-omega must be positive");
            p.big_omega_ = *in.big_omega;
            p.omega0_ = std::sqrt(p.big_omega_ * p.big_omega_ + p.lambda_ * p.lambda_);
            if (in.omega0) {
                require(finite(*in.omega0) &&
                            std::abs(*in.omega0 - p.omega0_) <= 1e-12 * p.omega0_,
                        "omega0 inconsistent with big-omega and lambda");
            }
        } else {
            const double w0 = *in.omega0;
            require(finite(w0) && w0 > 0, "omega0 must be positive");
            const double sq = w0 * w0 - p.lambda_ * p.lambda_;
            // Underdamped regime only.
            require(sq > 0, "overdamped or critical parameters (lambda >= omega0) are not supported");
            p.omega0_ = w0;
            p.big_omega_ = std::sqrt(sq);
        }
        return p;
    }

    double m() const noexcept { return m_; }
    double hbar() const noexcept { return hbar_; }
    double lambda() const noexcept { return lambda_; }
    double big_omega() const noexcept { return big_omega_; }
    double omega0() const noexcept { return omega0_; }
    double gamma() const noexcept { return gamma_; }
    double omega() const noexcept { return omega_; }
    double omega_prime() const noexcept { return omega_prime_; }
    double nbar() const noexcept { return nbar_; }
    int n_level() const noexcept { return n_level_; }

    /// SBTH and Lindblad dynamics coincide: omega' = omega = big_omega, gamma = 2 lambda.
    bool equivalence_mode() const noexcept {
        return omega_prime_ == omega_ && omega_ == big_omega_ && gamma_ == 2.0 * lambda_;
    }

private:
    ModelParams() = default;

    double m_ = 1, hbar_ = 1, lambda_ = 0, big_omega_ = 1, omega0_ = 1;
    double gamma_ = 0, omega_ = 1, omega_prime_ = 1, nbar_ = 0;
    int n_level_ = 0;
};

/// The parameter set used for the published figures: gamma = 0.08,
/// omega = omega' = big_omega = 1.5, lambda = gamma / 2, m = hbar = 1, n = 3.
inline ModelParams paper_params(double nbar = 0.0) {
    ParamInput in;
    in.gamma = 0.08;
    in.lambda = in.gamma / 2;
    in.omega = 1.5;
    in.omega_prime = 1.5;
    in.big_omega = 1.5;
    in.nbar = nbar;
    in.n_level = 3;
    return ModelParams::make(in);
}

}  // namespace momentous
