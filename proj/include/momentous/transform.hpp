#pragma once

#include <numbers>
#include <utility>

#include "momentous/frame.hpp"

namespace momentous {

/// Linear change of canonical coordinates z_to = matrix * z_from.
struct LinearMap {
    CanonicalFrame from;
    CanonicalFrame to;
    Mat<4> matrix;
};

/// Maps between the Bateman-Tikochinsky frame and the restored (x, y) frame:
///   x = (x1 + x2)/sqrt2,  p_x = (p1 - p2)/sqrt2,
///   y = (x1 - x2)/sqrt2,  p_y = (p1 + p2)/sqrt2.
/// The matrix is orthogonal, so the reverse direction is its transpose.
inline LinearMap build_transform(CanonicalFrame from, CanonicalFrame to) {
    auto supported = [](const CanonicalFrame& f) {
        return f.id() == FrameId::BT1 || f.id() == FrameId::XY;
    };
    if (!supported(from) || !supported(to)) {
        throw FrameMismatch("no transform between " + std::string(from.name()) + " and " +
                            std::string(to.name()));
    }
    if (from == to) return {from, to, Mat<4>::Identity()};

    constexpr double s = 1.0 / std::numbers::sqrt2;
    Mat<4> bt1_to_xy;
    // clang-format off
    bt1_to_xy << s,  0,  0,  s,
                 0,  s, -s,  0,
                 s,  0,  0, -s,
                 0,  s,  s,  0;
    // clang-format on
    if (from.id() == FrameId::BT1) return {from, to, bt1_to_xy};
    return {from, to, bt1_to_xy.transpose()};
}

/// Pushes means and covariance through T: means' = T means, cov' = T cov T^T.
inline std::pair<MeanVector<4>, CovarianceMatrix<4>> transform_state(const MeanVector<4>& means,
                                                                     const CovarianceMatrix<4>& cov,
                                                                     const LinearMap& t) {
    require_same_frame(means.frame(), t.from);
    require_same_frame(cov.frame(), t.from);
    const Mat<4> c = t.matrix * cov.entries() * t.matrix.transpose();
    const Mat<4> sym = (c + c.transpose()) * 0.5;
    return {MeanVector<4>(t.to, t.matrix * means.values()), CovarianceMatrix<4>(t.to, sym)};
}

/// The three (x, p_x) moments written out term by term from BT1 moments.
struct XyPairMoments {
    double g20;
    double g02;
    double g11;
};

inline XyPairMoments explicit_xy_moments(const CovarianceMatrix<4>& bt1) {
    auto g = [&](std::array<int, 4> e) { return g1(bt1, e); };
    return {
        0.5 * (g({2, 0, 0, 0}) + g({0, 0, 0, 2}) + 2.0 * g({1, 0, 0, 1})),
        0.5 * (g({0, 2, 0, 0}) + g({0, 0, 2, 0}) - 2.0 * g({0, 1, 1, 0})),
        0.5 * (g({1, 1, 0, 0}) - g({0, 0, 1, 1}) - g({1, 0, 1, 0}) + g({0, 1, 0, 1})),
    };
}

}  // namespace momentous
