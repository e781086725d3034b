#pragma once

#include <cmath>
#include <utility>

#include "momentous/frame.hpp"
#include "momentous/model_system.hpp"
#include "momentous/params.hpp"

namespace momentous {

/// Mean equations of the semiclassical BT model in BT1 order (x1, p1, p2, x2):
///   x1' =  p1/m - l x2       p1' = -m W^2 x1 + l p2
///   p2' =  m W^2 x2 + l p1   x2' = -p2/m - l x1
inline Mat<4> sbth_classical_matrix(const ModelParams& p) {
    const double k = p.m() * p.big_omega() * p.big_omega();
    const double l = p.lambda();
    const double im = 1.0 / p.m();
    Mat<4> a;
    // clang-format off
    a <<  0,  im,   0, -l,
         -k,   0,   l,  0,
          0,   l,   0,  k,
         -l,   0, -im,  0;
    // clang-format on
    return a;
}

/// The ten moment equations of the semiclassical BT model written out row by
/// row on packed moments (2000, 1100, 1010, 1001, 0200, 0110, 0101, 0020,
/// 0011, 0002). Built independently of the bracket machinery so the two can
/// be checked against each other.
inline Eigen::Matrix<double, 10, 10> sbth_moment_table(const ModelParams& p) {
    enum : int { G2000, G1100, G1010, G1001, G0200, G0110, G0101, G0020, G0011, G0002 };
    const double k = p.m() * p.big_omega() * p.big_omega();
    const double l = p.lambda();
    const double im = 1.0 / p.m();
    Eigen::Matrix<double, 10, 10> t = Eigen::Matrix<double, 10, 10>::Zero();

    t(G2000, G1001) = -2 * l;
    t(G2000, G1100) = 2 * im;

    t(G0200, G0110) = 2 * l;
    t(G0200, G1100) = -2 * k;

    t(G0020, G0110) = -2 * l;
    t(G0020, G0011) = -2 * k;

    t(G0002, G1001) = 2 * l;
    t(G0002, G0011) = 2 * im;

    t(G1010, G1100) = -l;
    t(G1010, G0011) = -l;
    t(G1010, G0110) = im;
    t(G1010, G1001) = -k;

    t(G0101, G1100) = l;
    t(G0101, G0011) = l;
    // Sign fixed by the bracket {G0101, -G0020/2m} = +G0110/m.
    t(G0101, G0110) = im;
    t(G0101, G1001) = -k;

    t(G1001, G2000) = l;
    t(G1001, G0002) = -l;
    t(G1001, G0101) = im;
    t(G1001, G1010) = im;

    t(G0110, G0020) = l;
    t(G0110, G0200) = -l;
    t(G0110, G1010) = -k;
    t(G0110, G0101) = -k;

    t(G1100, G1010) = l;
    t(G1100, G0101) = -l;
    t(G1100, G0200) = im;
    t(G1100, G2000) = -k;

    t(G0011, G1010) = l;
    t(G0011, G0101) = -l;
    t(G0011, G0020) = im;
    t(G0011, G0002) = -k;
    return t;
}

/// Semiclassical Bateman-Tikochinsky model with hard-coded coefficients. The
/// moment generator is read off the variance rows of the moment table
/// (G_aa' = 2 sum_c A_ac G_ca).
inline ModelSystem<4> build_sbth(const ModelParams& p) {
    const double k = p.m() * p.big_omega() * p.big_omega();
    const double l = p.lambda();
    const double im = 1.0 / p.m();
    Mat<4> a;
    // clang-format off
    a <<  0,  im,  0, -l,
         -k,   0,  l,  0,
          0,  -l,  0, -k,
          l,   0, im,  0;
    // clang-format on
    return {CanonicalFrame::bt1(), sbth_classical_matrix(p), a, Mat<4>::Zero(), p,
            ModelLabel::SBTH};
}

inline double lindblad_dxx(const ModelParams& p) {
    return p.gamma() * p.hbar() * (2 * p.nbar() + 1) / (2 * p.m() * p.omega());
}

inline double lindblad_dpp(const ModelParams& p) {
    return p.gamma() * p.hbar() * p.m() * p.omega() * (2 * p.nbar() + 1) / 2;
}

/// Lindblad oscillator in (x, p). The same drift matrix drives means and
/// moments; thermal diffusion enters only the moments.
inline ModelSystem<2> build_lindblad(const ModelParams& p) {
    const double mw = p.m() * p.omega();
    const double wp = p.omega_prime();
    Mat<2> a;
    a << -p.gamma() / 2, wp / mw, -mw * wp, -p.gamma() / 2;
    Mat<2> d = Mat<2>::Zero();
    d(0, 0) = lindblad_dxx(p);
    d(1, 1) = lindblad_dpp(p);
    return {CanonicalFrame::l1(), a, a, d, p, ModelLabel::Lindblad};
}

/// Classical damped oscillator x'' + 2 l x' + w0^2 x = 0 with canonical
/// momentum p = m (x' + l x); moments are carried along with the same drift.
inline ModelSystem<2> build_classical(const ModelParams& p) {
    const double k = p.m() * p.big_omega() * p.big_omega();
    Mat<2> a;
    a << -p.lambda(), 1.0 / p.m(), -k, -p.lambda();
    return {CanonicalFrame::l1(), a, a, Mat<2>::Zero(), p, ModelLabel::Classical};
}

/// Restored-frame description: the decoupled (x, p_x) mean block plus the
/// (x, p_x) moment equations, whose sources involve BT1 moments. It is
/// evaluated alongside an SBTH run rather than integrated on its own.
struct QdhoXyModel {
    ModelParams params;
    Mat<2> classical;  // x' = p_x/m - l x, p_x' = -m W^2 x - l p_x

    struct Rates {
        double g20;
        double g02;
        double g11;
    };

    /// Time derivatives of the (x, p_x) moments given the current XY pair
    /// moments and the BT1 moments they are sourced from.
    Rates moment_rates(double gxx, double gpp, double gxp, const Mat<4>& bt1) const {
        enum : int { X1 = 0, P1 = 1, P2 = 2, X2 = 3 };
        const double l = params.lambda();
        const double im = 1.0 / params.m();
        const double k = params.m() * params.big_omega() * params.big_omega();
        const double g2000 = bt1(X1, X1), g0200 = bt1(P1, P1), g0020 = bt1(P2, P2),
                     g0002 = bt1(X2, X2), g1100 = bt1(X1, P1), g1010 = bt1(X1, P2),
                     g1001 = bt1(X1, X2), g0110 = bt1(P1, P2), g0101 = bt1(P1, X2),
                     g0011 = bt1(P2, X2);
        Rates r;
        r.g20 = -2 * l * gxx + 2 * im * gxp + 2 * im * (g0011 + g1010) + 2 * l * (g2000 + g1001);
        r.g02 = -2 * l * gpp - 2 * k * gxp + 2 * l * (g0200 - g0110) - 2 * k * (g0011 - g0101);
        r.g11 = -2 * l * gxp + im * gpp - k * gxx + l * (2 * g1100 + g0101 - g1010) -
                im * g0020 + k * (g0002 + g1001) + im * g0110;
        return r;
    }
};

inline QdhoXyModel build_qdho_xy(const ModelParams& p) {
    Mat<2> a;
    a << -p.lambda(), 1.0 / p.m(), -p.m() * p.big_omega() * p.big_omega(), -p.lambda();
    return {p, a};
}

/// Closed-form underdamped solution for the mean (x, p_x), p_x = m (x' + l x).
inline std::pair<double, double> classical_analytic(const ModelParams& p, double x0, double px0,
                                                    double t) {
    const double w = p.big_omega();
    if (!(w > 0) || !(p.lambda() < p.omega0()))
        throw ConfigError("classical_analytic requires the underdamped regime");
    const double decay = std::exp(-p.lambda() * t);
    const double c = std::cos(w * t), s = std::sin(w * t);
    const double x = decay * (x0 * c + px0 / (p.m() * w) * s);
    const double px = decay * (px0 * c - p.m() * w * x0 * s);
    return {x, px};
}

struct DiffusionReport {
    double dxx, dpp, dpx;
    double dgxx, dgpp, dgpx;
    /// dxx dpp - dpx^2 - (hbar gamma / 2)^2
    double lindblad_margin;
    /// dgxx dgpp - dgpx^2 - (lambda hbar)^2
    double sbth_margin;
};

inline double sbth_diffusion_margin(const ModelParams& p, double g2000, double g0200,
                                    double g1100) {
    const double two_l = 2 * p.lambda();
    const double dxx = two_l * g2000, dpp = two_l * g0200, dpx = two_l * g1100;
    const double floor = p.lambda() * p.hbar();
    return dxx * dpp - dpx * dpx - floor * floor;
}

inline DiffusionReport diffusion_report(const ModelParams& p, const CovarianceMatrix<4>& bt1) {
    if (bt1.frame().id() != FrameId::BT1) throw FrameMismatch("diffusion_report needs BT1 moments");
    DiffusionReport r{};
    r.dxx = lindblad_dxx(p);
    r.dpp = lindblad_dpp(p);
    r.dpx = 0.0;
    const double g2000 = bt1(0, 0), g0200 = bt1(1, 1), g1100 = bt1(0, 1);
    r.dgxx = 2 * p.lambda() * g2000;
    r.dgpp = 2 * p.lambda() * g0200;
    r.dgpx = 2 * p.lambda() * g1100;
    const double hg = p.hbar() * p.gamma() / 2;
    r.lindblad_margin = r.dxx * r.dpp - r.dpx * r.dpx - hg * hg;
    r.sbth_margin = sbth_diffusion_margin(p, g2000, g0200, g1100);
    return r;
}

}  // namespace momentous
