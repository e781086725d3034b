#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "momentous/diagnostics.hpp"

using namespace momentous;

TEST(InitialState, CoherentBt1Values) {
    const auto p = paper_params();
    const auto [z, c] = coherent_initial_state(p);
    EXPECT_NEAR(z[0], 2 * std::sqrt(2.0), 1e-15);
    EXPECT_EQ(z[1], 0.0);
    EXPECT_EQ(z[2], 0.0);
    EXPECT_EQ(z[3], 0.0);
    EXPECT_DOUBLE_EQ(g1(c, {2, 0, 0, 0}), 1 / 3.0);
    EXPECT_DOUBLE_EQ(g1(c, {0, 0, 0, 2}), 1 / 3.0);
    EXPECT_DOUBLE_EQ(g1(c, {0, 2, 0, 0}), 0.75);
    EXPECT_DOUBLE_EQ(g1(c, {0, 0, 2, 0}), 0.75);
    EXPECT_EQ(g1(c, {1, 0, 0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(c.uncertainty_determinant(0), 0.25);
    EXPECT_DOUBLE_EQ(c.uncertainty_determinant(1), 0.25);
}

TEST(InitialState, SingleOscillatorValues) {
    const auto p = paper_params();
    const auto [z, c] = single_coherent_state(p);
    EXPECT_DOUBLE_EQ(z[0], 2.0);
    EXPECT_EQ(z[1], 0.0);
    EXPECT_DOUBLE_EQ(c(0, 0), 1 / 3.0);
    EXPECT_DOUBLE_EQ(c(1, 1), 0.75);
}

TEST(Energy, InitialValues) {
    const auto p = paper_params();
    const OscillatorSample s{0.0, 2.0, 0.0, 1 / 3.0, 0.75, 0.0};
    const auto e = energy_at(s, p);
    EXPECT_DOUBLE_EQ(e.e_mean, 5.25);
    const double dx = std::sqrt(1 / 3.0), dp = std::sqrt(0.75);
    EXPECT_DOUBLE_EQ(e.e_plus, dp * dp / 2 + 1.125 * (2 + dx) * (2 + dx));
    EXPECT_NEAR(e.e_plus, 7.84808, 1e-5);
    EXPECT_DOUBLE_EQ(e.e_minus, dp * dp / 2 + 1.125 * (2 - dx) * (2 - dx));
    EXPECT_DOUBLE_EQ(e.e_lindblad_analytic, 5.25);
}

TEST(Energy, LindbladClosedForm) {
    const auto p = paper_params(2);
    EXPECT_DOUBLE_EQ(lindblad_mean_energy(p, 0), 5.25);
    EXPECT_NEAR(lindblad_mean_energy(p, 1e4), 3.75, 1e-15);
    EXPECT_NEAR(lindblad_mean_energy(p, 10), (std::exp(-0.8) + 2.5) * 1.5, 1e-15);
}

TEST(Energy, RejectsNegativeVariance) {
    EXPECT_THROW(energy_at(OscillatorSample{1.0, 0, 0, -1e-3, 1, 0}, paper_params()), std::domain_error);
}

TEST(Energy, SbthRunMatchesClosedFormAtNbarZero) {
    const auto p = paper_params();
    const auto [z, c] = coherent_initial_state(p);
    const auto rep = energy_report(oscillator_view(integrate(build_sbth(p), z, c, IntegratorConfig{})), p);
    double worst = 0;
    for (std::size_t i = 0; i < rep.size(); ++i) {
        const double exact = (3 * std::exp(-0.08 * rep[i].t) + 0.5) * 1.5;
        worst = std::max(worst, std::abs(rep[i].e_mean - exact) / exact);
        if (i > 0) {
            EXPECT_LE(rep[i].e_mean, rep[i - 1].e_mean);
        }
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(Audit, PresetRunsAreClean) {
    for (double nb : {0.0, 1.0, 2.0}) {
        const auto p = paper_params(nb);
        const auto [z4, c4] = coherent_initial_state(p);
        const auto a = audit(integrate(build_sbth(p), z4, c4, IntegratorConfig{}), p, 1e-9);
        EXPECT_TRUE(a.ok());
        EXPECT_EQ(a.rows.size(), 801u);
        EXPECT_NEAR(a.min_u_pair1, 0.25, 1e-12);
        EXPECT_GE(a.min_sbth_margin, -1e-9);

        const auto [z2, c2] = single_coherent_state(p);
        const auto b = audit(integrate(build_lindblad(p), z2, c2, IntegratorConfig{}), p, 1e-9);
        EXPECT_TRUE(b.ok());
        ASSERT_TRUE(b.lindblad_margin.has_value());
        // Saturated at nbar = 0.
        if (nb == 0.0) {
            EXPECT_NEAR(*b.lindblad_margin, 0.0, 1e-15);
        } else {
            EXPECT_GT(*b.lindblad_margin, 0);
        }
    }
}

TEST(Audit, FlagsViolations) {
    const auto p = paper_params();
    std::vector<AuditRow> rows(3);
    rows[0].t = 0;
    rows[0].u_pair1 = 0.25;
    rows[0].e_mean = 1.0;
    rows[1].t = 0.1;
    rows[1].u_pair1 = 0.0;
    rows[1].e_mean = 1.0;
    rows[2].t = 0.2;
    rows[2].u_pair1 = 0.25;
    rows[2].e_mean = 0.5;
    const auto a = summarize_audit(rows, p, 1e-9);
    EXPECT_EQ(a.uncertainty_violations, 1);
    EXPECT_EQ(a.ground_state_violations, 1);
    EXPECT_EQ(a.violations(), 2);
    ASSERT_TRUE(a.first_violation_time.has_value());
    EXPECT_EQ(*a.first_violation_time, 0.1);
    EXPECT_FALSE(a.ok());
    EXPECT_EQ(a.min_u_pair1, 0.0);
}

TEST(Audit, ToleranceAdmitsRoundingBelowFloor) {
    const auto p = paper_params();
    std::vector<AuditRow> rows(1);
    rows[0].t = 0;
    rows[0].u_xy = 0.25 - 1e-16;
    EXPECT_TRUE(summarize_audit(rows, p, 1e-9).ok());
    rows[0].u_xy = 0.25 - 1e-6;
    EXPECT_FALSE(summarize_audit(rows, p, 1e-9).ok());
}

TEST(Audit, ClassicalRunsSkipQuantumChecks) {
    const auto p = paper_params();
    const auto [z, c] = single_coherent_state(p);
    const auto a = audit(integrate(build_classical(p), z, CovarianceMatrix<2>::zero(CanonicalFrame::l1()),
                                   IntegratorConfig{}),
                         p, 1e-9);
    EXPECT_TRUE(a.ok());
    EXPECT_FALSE(a.lindblad_margin.has_value());
    EXPECT_TRUE(std::isinf(a.min_u_pair1));
}

TEST(Compare, IdenticalAndSymmetric) {
    Table a;
    a.columns = {"t", "x"};
    a.rows = {{0, 1.0}, {1, 2.0}, {2, 3.0}};
    Table b = a;
    b.rows[1][1] = 2.5;
    const auto same = compare(a, a, {"x"});
    EXPECT_EQ(same[0].max_abs, 0.0);
    EXPECT_EQ(same[0].rms, 0.0);
    const auto ab = compare(a, b, {"x"}), ba = compare(b, a, {"x"});
    EXPECT_EQ(ab[0].max_abs, 0.5);
    EXPECT_EQ(ab[0].max_abs, ba[0].max_abs);
    EXPECT_EQ(ab[0].rms, ba[0].rms);
    EXPECT_DOUBLE_EQ(ab[0].rms, std::sqrt(0.25 / 3));
    EXPECT_EQ(ab[0].at_time, 1.0);
}

TEST(Compare, GridMismatch) {
    Table a;
    a.columns = {"t", "x"};
    a.rows = {{0, 1.0}, {1, 2.0}};
    Table b = a;
    b.rows.pop_back();
    EXPECT_THROW(compare(a, b, {"x"}), GridMismatch);
    b = a;
    b.rows[1][0] = 1.5;
    EXPECT_THROW(compare(a, b, {"x"}), GridMismatch);
}

TEST(Csv, RoundTripIsExact) {
    Table t;
    t.meta = {{"model", "sbth"}, {"dt", "0.001"}};
    t.columns = {"t", "x"};
    t.rows = {{0.1, 1.0 / 3.0}, {0.2, -2.718281828459045e-300}};
    std::stringstream ss;
    write_csv(ss, t);
    const auto r = read_csv(ss);
    EXPECT_EQ(r.meta, t.meta);
    EXPECT_EQ(r.columns, t.columns);
    EXPECT_EQ(r.rows, t.rows);
    ASSERT_NE(r.meta_value("dt"), nullptr);
    EXPECT_EQ(*r.meta_value("dt"), "0.001");
}

TEST(Csv, MalformedInput) {
    std::stringstream width("t,x\n1,2,3\n");
    EXPECT_THROW(read_csv(width), ParseError);
    std::stringstream number("t,x\n1,abc\n");
    EXPECT_THROW(read_csv(number), ParseError);
    std::stringstream empty("# model = sbth\n");
    EXPECT_THROW(read_csv(empty), ParseError);
}
