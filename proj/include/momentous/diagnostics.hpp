#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momentous/dynamics.hpp"
#include "momentous/integrator.hpp"
#include "momentous/table.hpp"
#include "momentous/transform.hpp"

namespace momentous {

/// Coherent state displaced so that its energy is the n-th oscillator level,
/// with the mirror oscillator prepared identically, expressed in BT1:
/// x1 = 2 sqrt(n hbar / m w), other means zero; position variances
/// hbar / (2 m w), momentum variances m hbar w / 2, no cross moments.
inline std::pair<MeanVector<4>, CovarianceMatrix<4>> coherent_initial_state(const ModelParams& p) {
    const double mw = p.m() * p.omega();
    const double qvar = p.hbar() / (2 * mw);
    const double pvar = mw * p.hbar() / 2;
    Vec<4> z = Vec<4>::Zero();
    z(0) = 2 * std::sqrt(p.n_level() * p.hbar() / mw);
    Mat<4> c = Mat<4>::Zero();
    c(0, 0) = qvar;  // x1
    c(1, 1) = pvar;  // p1
    c(2, 2) = pvar;  // p2
    c(3, 3) = qvar;  // x2
    return {MeanVector<4>(CanonicalFrame::bt1(), z), CovarianceMatrix<4>(CanonicalFrame::bt1(), c)};
}

/// The same coherent state for a single oscillator: x0 = sqrt(2 n hbar / m w).
inline std::pair<MeanVector<2>, CovarianceMatrix<2>> single_coherent_state(const ModelParams& p) {
    const double mw = p.m() * p.omega();
    Vec<2> z(std::sqrt(2.0 * p.n_level() * p.hbar() / mw), 0.0);
    Mat<2> c = Mat<2>::Zero();
    c(0, 0) = p.hbar() / (2 * mw);
    c(1, 1) = mw * p.hbar() / 2;
    return {MeanVector<2>(CanonicalFrame::l1(), z), CovarianceMatrix<2>(CanonicalFrame::l1(), c)};
}

/// Mean and moments of the physical (x, p) oscillator at one instant.
struct OscillatorSample {
    double t;
    double x, p;
    double g20, g02, g11;
};

/// (x, p_x) block of an SBTH run, obtained by transforming each BT1 sample.
inline std::vector<OscillatorSample> oscillator_view(const Trajectory<4>& traj) {
    require_same_frame(traj.frame, CanonicalFrame::bt1());
    const auto t = build_transform(CanonicalFrame::bt1(), CanonicalFrame::xy());
    std::vector<OscillatorSample> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        const auto [m, c] = transform_state(s.means, s.cov, t);
        out.push_back({s.t, m[0], m[1], c(0, 0), c(1, 1), c(0, 1)});
    }
    return out;
}

inline std::vector<OscillatorSample> oscillator_view(const Trajectory<2>& traj) {
    std::vector<OscillatorSample> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples)
        out.push_back({s.t, s.means[0], s.means[1], s.cov(0, 0), s.cov(1, 1), s.cov(0, 1)});
    return out;
}

/// Closed-form Lindblad mean energy ((n0 - nbar) e^{-gamma t} + nbar + 1/2) hbar w
/// with n0 the initial excitation level.
inline double lindblad_mean_energy(const ModelParams& p, double t) {
    return ((p.n_level() - p.nbar()) * std::exp(-p.gamma() * t) + p.nbar() + 0.5) * p.hbar() *
           p.omega();
}

struct EnergyReport {
    double t;
    double e_mean;
    double e_plus;
    double e_minus;
    double e_lindblad_analytic;
};

/// Mean energy p^2/2m + m w^2 x^2/2 + G02/2m + m w^2 G20/2, and the belt
/// energies with x -> x +- sqrt(G20), p -> p +- sqrt(G02).
inline EnergyReport energy_at(const OscillatorSample& s, const ModelParams& p) {
    if (s.g20 < 0 || s.g02 < 0)
        throw std::domain_error("negative variance at t = " + std::to_string(s.t));
    const double m = p.m();
    const double k = m * p.omega() * p.omega();
    const double dx = std::sqrt(s.g20), dp = std::sqrt(s.g02);
    auto mech = [&](double x, double px) { return px * px / (2 * m) + 0.5 * k * x * x; };
    return {s.t, mech(s.x, s.p) + s.g02 / (2 * m) + 0.5 * k * s.g20, mech(s.x + dx, s.p + dp),
            mech(s.x - dx, s.p - dp), lindblad_mean_energy(p, s.t)};
}

inline std::vector<EnergyReport> energy_report(const std::vector<OscillatorSample>& view,
                                               const ModelParams& p) {
    std::vector<EnergyReport> out;
    out.reserve(view.size());
    for (const auto& s : view) out.push_back(energy_at(s, p));
    return out;
}

/// Per-sample quantities checked by the audit; NaN marks "not applicable".
struct AuditRow {
    static constexpr double na = std::numeric_limits<double>::quiet_NaN();

    double t;
    double u_pair1 = na;      // uncertainty determinant of the primary pair
    double u_xy = na;         // same for the restored (x, p_x) pair
    double e_mean = na;
    double sbth_margin = na;  // D_Gxx D_Gpp - D_Gpx^2 - (lambda hbar)^2
};

struct InvariantAudit {
    std::vector<AuditRow> rows;
    double tol = 0.0;
    double uncertainty_floor = 0.0;  // hbar^2 / 4
    double ground_bound = 0.0;       // hbar w / 2
    int uncertainty_violations = 0;
    int ground_state_violations = 0;
    std::optional<double> first_violation_time;
    double min_u_pair1 = std::numeric_limits<double>::infinity();
    double min_u_xy = std::numeric_limits<double>::infinity();
    double min_sbth_margin = std::numeric_limits<double>::infinity();
    std::optional<double> lindblad_margin;
    double final_e_mean = AuditRow::na;

    int violations() const { return uncertainty_violations + ground_state_violations; }
    bool ok() const { return violations() == 0; }
};

/// Flags samples with an uncertainty determinant below hbar^2/4 - tol or a
/// mean energy below hbar w / 2 - tol. Never throws on violations.
inline InvariantAudit summarize_audit(std::vector<AuditRow> rows, const ModelParams& p, double tol) {
    InvariantAudit a;
    a.tol = tol;
    a.uncertainty_floor = p.hbar() * p.hbar() / 4;
    a.ground_bound = p.hbar() * p.omega() / 2;
    for (const auto& r : rows) {
        bool bad = false;
        for (double u : {r.u_pair1, r.u_xy})
            if (!std::isnan(u) && u < a.uncertainty_floor - tol) bad = true;
        if (bad) ++a.uncertainty_violations;
        const bool low = !std::isnan(r.e_mean) && r.e_mean < a.ground_bound - tol;
        if (low) ++a.ground_state_violations;
        if ((bad || low) && !a.first_violation_time) a.first_violation_time = r.t;
        if (!std::isnan(r.u_pair1)) a.min_u_pair1 = std::min(a.min_u_pair1, r.u_pair1);
        if (!std::isnan(r.u_xy)) a.min_u_xy = std::min(a.min_u_xy, r.u_xy);
        if (!std::isnan(r.sbth_margin)) a.min_sbth_margin = std::min(a.min_sbth_margin, r.sbth_margin);
    }
    if (!rows.empty()) a.final_e_mean = rows.back().e_mean;
    a.rows = std::move(rows);
    return a;
}

inline InvariantAudit audit(const Trajectory<4>& traj, const ModelParams& p, double tol) {
    const auto view = oscillator_view(traj);
    std::vector<AuditRow> rows;
    rows.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) {
        const auto& c = traj.samples[i].cov;
        const auto& v = view[i];
        AuditRow r{v.t};
        r.u_pair1 = c.uncertainty_determinant(0);
        r.u_xy = v.g20 * v.g02 - v.g11 * v.g11;
        r.e_mean = energy_at(v, p).e_mean;
        r.sbth_margin = sbth_diffusion_margin(p, c(0, 0), c(1, 1), c(0, 1));
        rows.push_back(r);
    }
    return summarize_audit(std::move(rows), p, tol);
}

/// Single-oscillator runs. Classical runs carry no quantum state and only
/// record the energy.
inline InvariantAudit audit(const Trajectory<2>& traj, const ModelParams& p, double tol) {
    const bool quantum = traj.label != ModelLabel::Classical;
    std::vector<AuditRow> rows;
    rows.reserve(traj.samples.size());
    for (const auto& v : oscillator_view(traj)) {
        AuditRow r{v.t};
        const double e = energy_at(v, p).e_mean;
        if (quantum) {
            r.u_pair1 = v.g20 * v.g02 - v.g11 * v.g11;
            r.e_mean = e;
        }
        rows.push_back(r);
    }
    auto a = summarize_audit(std::move(rows), p, tol);
    if (traj.label == ModelLabel::Lindblad) {
        const double dxx = lindblad_dxx(p), dpp = lindblad_dpp(p), hg = p.hbar() * p.gamma() / 2;
        a.lindblad_margin = dxx * dpp - hg * hg;
    }
    return a;
}

/// The common observable columns of every model: t, x, p, G20, G02, G11, E_mean.
inline Table observable_table(const std::vector<OscillatorSample>& view, const ModelParams& p) {
    Table t;
    t.columns = {"t", "x", "p", "G20", "G02", "G11", "E_mean"};
    t.rows.reserve(view.size());
    for (const auto& s : view)
        t.rows.push_back({s.t, s.x, s.p, s.g20, s.g02, s.g11, energy_at(s, p).e_mean});
    return t;
}

struct ColumnMetrics {
    std::string column;
    double max_abs;
    double rms;
    double at_time;  // time of the largest difference
};

/// Per-column max-abs and RMS difference between two tables sampled on the
/// same grid (column "t", or row order when absent).
inline std::vector<ColumnMetrics> compare(const Table& a, const Table& b,
                                          const std::vector<std::string>& columns) {
    if (a.rows.size() != b.rows.size())
        throw GridMismatch("row counts differ: " + std::to_string(a.rows.size()) + " vs " +
                           std::to_string(b.rows.size()));
    std::vector<double> ta, tb;
    if (a.has("t") && b.has("t")) {
        ta = a.column("t");
        tb = b.column("t");
        for (std::size_t i = 0; i < ta.size(); ++i)
            if (std::abs(ta[i] - tb[i]) > 1e-9 * std::max(1.0, std::abs(ta[i])))
                throw GridMismatch("time grids differ at row " + std::to_string(i));
    } else {
        for (std::size_t i = 0; i < a.rows.size(); ++i) ta.push_back(static_cast<double>(i));
    }

    std::vector<ColumnMetrics> out;
    for (const auto& name : columns) {
        const auto ca = a.column(name), cb = b.column(name);
        ColumnMetrics m{name, 0.0, 0.0, ta.empty() ? 0.0 : ta.front()};
        double ss = 0.0;
        for (std::size_t i = 0; i < ca.size(); ++i) {
            const double d = std::abs(ca[i] - cb[i]);
            ss += d * d;
            if (d > m.max_abs) {
                m.max_abs = d;
                m.at_time = ta[i];
            }
        }
        m.rms = ca.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(ca.size()));
        out.push_back(m);
    }
    return out;
}

}  // namespace momentous
