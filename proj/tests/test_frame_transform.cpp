#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "momentous/diagnostics.hpp"
#include "momentous/moment_algebra.hpp"
#include "momentous/transform.hpp"

using namespace momentous;

namespace {

Mat<4> random_covariance(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat<4> m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = n(rng);
    const Mat<4> c = m * m.transpose();
    return (c + c.transpose()) * 0.5;
}

}  // namespace

TEST(Frame, Bt1LayoutAndSignatures) {
    constexpr auto f = CanonicalFrame::bt1();
    static_assert(f.dimension() == 4);
    EXPECT_EQ(f.coordinate_name(0), "x1");
    EXPECT_EQ(f.coordinate_name(1), "p1");
    EXPECT_EQ(f.coordinate_name(2), "p2");
    EXPECT_EQ(f.coordinate_name(3), "x2");
    EXPECT_EQ(f.pair(0).q, 0);
    EXPECT_EQ(f.pair(0).p, 1);
    EXPECT_EQ(f.pair(0).signature, 1);
    EXPECT_EQ(f.pair(1).q, 3);
    EXPECT_EQ(f.pair(1).p, 2);
    EXPECT_EQ(f.pair(1).signature, -1);
}

TEST(Frame, MomentIndexingIsLexicographic) {
    const auto idx = moment_indices<4>();
    const char* expected[] = {"2000", "1100", "1010", "1001", "0200",
                              "0110", "0101", "0020", "0011", "0002"};
    ASSERT_EQ(idx.size(), 10u);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        EXPECT_EQ(exponent_label<4>(idx[k]), expected[k]);
        EXPECT_EQ(moment_position<4>(idx[k]), static_cast<int>(k));
    }
    EXPECT_EQ(moment_from_exponents<4>({1, 0, 0, 1}), (MomentIndex{0, 3}));
    EXPECT_THROW(moment_from_exponents<4>({1, 1, 1, 0}), std::invalid_argument);
}

TEST(Frame, CovarianceValidation) {
    Mat<4> c = Mat<4>::Identity();
    c(0, 1) = 0.1;
    EXPECT_THROW(CovarianceMatrix<4>(CanonicalFrame::bt1(), c), std::invalid_argument);
    c(1, 0) = 0.1;
    EXPECT_NO_THROW(CovarianceMatrix<4>(CanonicalFrame::bt1(), c));
    c(2, 2) = -1e-3;
    EXPECT_THROW(CovarianceMatrix<4>(CanonicalFrame::bt1(), c), std::invalid_argument);
    EXPECT_THROW(CovarianceMatrix<2>(CanonicalFrame::bt1(), Mat<2>::Identity()), FrameMismatch);
}

TEST(Frame, G1RequiresBt1) {
    const auto xy = CovarianceMatrix<4>::zero(CanonicalFrame::xy());
    EXPECT_THROW(g1(xy, {2, 0, 0, 0}), FrameMismatch);
}

TEST(Transform, CoherentMeanMapsToEqualOscillators) {
    const auto p = paper_params();
    const auto [z, c] = coherent_initial_state(p);
    const auto t = build_transform(CanonicalFrame::bt1(), CanonicalFrame::xy());
    const auto [zx, cx] = transform_state(z, c, t);
    EXPECT_EQ(zx.frame(), CanonicalFrame::xy());
    EXPECT_NEAR(zx[0], 2.0, 1e-15);  // x
    EXPECT_NEAR(zx[1], 0.0, 1e-15);  // p_x
    EXPECT_NEAR(zx[2], 2.0, 1e-15);  // y
    EXPECT_NEAR(zx[3], 0.0, 1e-15);  // p_y
    EXPECT_NEAR(cx(0, 0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(cx(1, 1), 0.75, 1e-15);
    EXPECT_NEAR(cx(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(cx.uncertainty_determinant(0), 0.25, 1e-15);
    EXPECT_NEAR(cx.uncertainty_determinant(1), 0.25, 1e-15);
}

TEST(Transform, ComponentsOfTheMap) {
    const auto t = build_transform(CanonicalFrame::bt1(), CanonicalFrame::xy());
    const double r = std::sqrt(0.5);
    // x1 = e0, p1 = e1, p2 = e2, x2 = e3
    auto image = [&](int k) { return Vec<4>(t.matrix.col(k)); };
    EXPECT_TRUE(image(0).isApprox(Vec<4>(r, 0, r, 0)));   // x1 -> (x + y)/sqrt2
    EXPECT_TRUE(image(3).isApprox(Vec<4>(r, 0, -r, 0)));  // x2 -> (x - y)/sqrt2
    EXPECT_TRUE(image(1).isApprox(Vec<4>(0, r, 0, r)));   // p1 -> (p_x + p_y)/sqrt2
    EXPECT_TRUE(image(2).isApprox(Vec<4>(0, -r, 0, r)));  // p2 -> -(p_x - p_y)/sqrt2
}

TEST(Transform, MapsQuantumFormOntoStandardForm) {
    const auto t = build_transform(CanonicalFrame::bt1(), CanonicalFrame::xy());
    const auto w_bt1 = SymplecticForm<4>::quantum(CanonicalFrame::bt1()).matrix;
    const auto w_xy = SymplecticForm<4>::quantum(CanonicalFrame::xy()).matrix;
    EXPECT_LE((t.matrix * w_bt1 * t.matrix.transpose() - w_xy).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Transform, RoundTrip) {
    std::mt19937_64 rng(7);
    const auto fwd = build_transform(CanonicalFrame::bt1(), CanonicalFrame::xy());
    const auto back = build_transform(CanonicalFrame::xy(), CanonicalFrame::bt1());
    for (int k = 0; k < 20; ++k) {
        const Mat<4> c = random_covariance(rng);
        const Vec<4> z = Vec<4>::Random();
        const MeanVector<4> m(CanonicalFrame::bt1(), z);
        const CovarianceMatrix<4> cov(CanonicalFrame::bt1(), c);
        const auto [m1, c1] = transform_state(m, cov, fwd);
        const auto [m2, c2] = transform_state(m1, c1, back);
        EXPECT_EQ(m2.frame(), CanonicalFrame::bt1());
        EXPECT_LE((m2.values() - z).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LE((c2.entries() - c).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Transform, IdentityForSameFrame) {
    const auto t = build_transform(CanonicalFrame::xy(), CanonicalFrame::xy());
    EXPECT_EQ(t.matrix, Mat<4>::Identity());
}

TEST(Transform, RejectsUnsupportedAndMismatchedFrames) {
    EXPECT_THROW(build_transform(CanonicalFrame::bt1(), CanonicalFrame::l1()), FrameMismatch);
    const auto t = build_transform(CanonicalFrame::bt1(), CanonicalFrame::xy());
    const auto m = MeanVector<4>::zero(CanonicalFrame::xy());
    const auto c = CovarianceMatrix<4>::zero(CanonicalFrame::xy());
    EXPECT_THROW(transform_state(m, c, t), FrameMismatch);
}

TEST(Transform, ExplicitMomentFormulasAgreeWithCongruence) {
    std::mt19937_64 rng(42);
    const auto t = build_transform(CanonicalFrame::bt1(), CanonicalFrame::xy());
    for (int k = 0; k < 100; ++k) {
        const CovarianceMatrix<4> c(CanonicalFrame::bt1(), random_covariance(rng));
        const auto [unused, cx] = transform_state(MeanVector<4>::zero(CanonicalFrame::bt1()), c, t);
        const auto e = explicit_xy_moments(c);
        const double scale = c.entries().cwiseAbs().maxCoeff();
        EXPECT_NEAR(e.g20, cx(0, 0), 1e-14 * scale);
        EXPECT_NEAR(e.g02, cx(1, 1), 1e-14 * scale);
        EXPECT_NEAR(e.g11, cx(0, 1), 1e-14 * scale);
    }
}

TEST(Transform, HandWorkedExplicitMoments) {
    Mat<4> c;
    // x1, p1, p2, x2
    // clang-format off
    c << 2.0, 0.3, 0.1, 0.5,
         0.3, 3.0, 0.7, 0.2,
         0.1, 0.7, 4.0, 0.4,
         0.5, 0.2, 0.4, 5.0;
    // clang-format on
    const auto e = explicit_xy_moments(CovarianceMatrix<4>(CanonicalFrame::bt1(), c));
    EXPECT_DOUBLE_EQ(e.g20, 0.5 * (2.0 + 5.0 + 2 * 0.5));
    EXPECT_DOUBLE_EQ(e.g02, 0.5 * (3.0 + 4.0 - 2 * 0.7));
    EXPECT_DOUBLE_EQ(e.g11, 0.5 * (0.3 - 0.4 - 0.1 + 0.2));
}
