#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "momentous/frame.hpp"
#include "momentous/model_system.hpp"
#include "momentous/params.hpp"

namespace momentous {

/// Antisymmetric bracket matrix {z_a, z_b} of a frame. Pair k with sign s
/// contributes [[0, s], [-s, 0]] on its (q, p) positions.
template <int N>
struct SymplecticForm {
    CanonicalFrame frame;
    Mat<N> matrix;

    /// Signs taken from the frame's commutators. For BT1 this gives
    /// {x1, p1} = +1 and {p2, x2} = +1.
    static SymplecticForm quantum(CanonicalFrame f) { return build(f, false); }

    /// Every pair with sign +1, i.e. {q_k, p_k} = +1.
    static SymplecticForm classical(CanonicalFrame f) { return build(f, true); }

    double operator()(int a, int b) const { return matrix(a, b); }

private:
    static SymplecticForm build(CanonicalFrame f, bool all_positive) {
        require_frame_dimension(f, N);
        Mat<N> w = Mat<N>::Zero();
        for (const auto& pr : f.pairs()) {
            const double s = all_positive ? 1.0 : static_cast<double>(pr.signature);
            w(pr.q, pr.p) = s;
            w(pr.p, pr.q) = -s;
        }
        return {f, w};
    }
};

/// H(z) = 1/2 z^T hessian z + linear . z + constant.
template <int N>
struct QuadraticHamiltonian {
    CanonicalFrame frame;
    Mat<N> hessian;
    Vec<N> linear = Vec<N>::Zero();
    double constant = 0.0;

    double classical_value(const Vec<N>& z) const {
        return 0.5 * z.dot(hessian * z) + linear.dot(z) + constant;
    }

    /// 1/2 sum_ab H_ab cov_ab: the second-order quantum correction.
    double moment_value(const Mat<N>& cov) const { return 0.5 * hessian.cwiseProduct(cov).sum(); }
};

/// Bateman-Tikochinsky Hamiltonian in BT1 coordinates (x1, p1, p2, x2):
///   (p1^2/2m + m W^2 x1^2/2) - (p2^2/2m + m W^2 x2^2/2) - lambda (x1 p2 + x2 p1)
inline QuadraticHamiltonian<4> bth_hamiltonian(const ModelParams& p) {
    const double k = p.m() * p.big_omega() * p.big_omega();
    const double l = p.lambda();
    Mat<4> h;
    // clang-format off
    h <<  k,          0,           -l,  0,
          0,          1.0 / p.m(),  0, -l,
         -l,          0,  -1.0 / p.m(),  0,
          0,         -l,            0, -k;
    // clang-format on
    return {CanonicalFrame::bt1(), h};
}

/// Plain oscillator p^2/2m + m w^2 x^2/2 in the single-pair frame.
inline QuadraticHamiltonian<2> oscillator_hamiltonian(double m, double w) {
    Mat<2> h;
    h << m * w * w, 0, 0, 1.0 / m;
    return {CanonicalFrame::l1(), h};
}

struct MomentTerm {
    double coeff;
    MomentIndex index;

    friend bool operator==(const MomentTerm&, const MomentTerm&) = default;
};

/// Linear combination of second moments, kept sorted by index with no zero terms.
using MomentCombination = std::vector<MomentTerm>;

inline MomentCombination normalized(MomentCombination terms) {
    std::sort(terms.begin(), terms.end(),
              [](const MomentTerm& a, const MomentTerm& b) { return a.index < b.index; });
    MomentCombination out;
    for (const auto& t : terms) {
        if (!out.empty() && out.back().index == t.index)
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const MomentTerm& t) { return t.coeff == 0.0; });
    return out;
}

inline MomentIndex ordered(int a, int b) { return a <= b ? MomentIndex{a, b} : MomentIndex{b, a}; }

/// {cov_ab, cov_cd} = W_ac cov_bd + W_ad cov_bc + W_bc cov_ad + W_bd cov_ac.
template <int N>
MomentCombination moment_bracket(MomentIndex lhs, MomentIndex rhs, const SymplecticForm<N>& form) {
    auto check = [](MomentIndex m) {
        if (m.i < 0 || m.j < 0 || m.i >= N || m.j >= N)
            throw std::out_of_range("moment index outside the frame");
    };
    check(lhs);
    check(rhs);
    const int a = lhs.i, b = lhs.j, c = rhs.i, d = rhs.j;
    return normalized({
        {form(a, c), ordered(b, d)},
        {form(a, d), ordered(b, c)},
        {form(b, c), ordered(a, d)},
        {form(b, d), ordered(a, c)},
    });
}

/// Bilinear extension of moment_bracket to combinations.
template <int N>
MomentCombination moment_bracket(const MomentCombination& lhs, const MomentCombination& rhs,
                                 const SymplecticForm<N>& form) {
    MomentCombination acc;
    for (const auto& l : lhs)
        for (const auto& r : rhs)
            for (const auto& t : moment_bracket<N>(l.index, r.index, form))
                acc.push_back({l.coeff * r.coeff * t.coeff, t.index});
    return normalized(std::move(acc));
}

template <int N>
double evaluate(const MomentCombination& comb, const Mat<N>& cov) {
    double s = 0.0;
    for (const auto& t : comb) s += t.coeff * cov(t.index.i, t.index.j);
    return s;
}

struct BracketEntry {
    MomentIndex lhs;
    MomentIndex rhs;
    MomentCombination value;
};

/// All brackets between distinct second moments, lhs before rhs in
/// lexicographic moment order.
template <int N = 4>
std::vector<BracketEntry> bracket_table(const SymplecticForm<N>& form) {
    const auto idx = moment_indices<N>();
    std::vector<BracketEntry> out;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            out.push_back({idx[i], idx[j], moment_bracket<N>(idx[i], idx[j], form)});
    return out;
}

template <int N>
std::string format_moment(MomentIndex m) {
    return "G[" + exponent_label<N>(m) + "]";
}

inline std::string format_coeff(double c) {
    std::ostringstream os;
    if (c == std::round(c) && std::abs(c) < 1e15) {
        os << static_cast<long long>(c);
    } else {
        os.precision(17);
        os << c;
    }
    return os.str();
}

template <int N>
std::string format_combination(const MomentCombination& comb) {
    if (comb.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < comb.size(); ++k) {
        if (k) s += " + ";
        s += format_coeff(comb[k].coeff) + "*" + format_moment<N>(comb[k].index);
    }
    return s;
}

/// `{G[abcd],G[efgh]} = <coeff>*G[ijkl] + ...`
template <int N>
std::string format_bracket(const BracketEntry& e) {
    return "{" + format_moment<N>(e.lhs) + "," + format_moment<N>(e.rhs) +
           "} = " + format_combination<N>(e.value);
}

/// Coefficients of the quantum correction 1/2 sum_ab H_ab G_ab on the
/// independent moments (diagonal: H_aa / 2, off-diagonal: H_ab).
template <int N>
MomentCombination quantum_correction(const QuadraticHamiltonian<N>& h) {
    MomentCombination out;
    for (const auto& m : moment_indices<N>()) {
        const double c = m.i == m.j ? 0.5 * h.hessian(m.i, m.i) : h.hessian(m.i, m.j);
        out.push_back({c, m});
    }
    return normalized(std::move(out));
}

/// Second-order effective Hamiltonian H_class(means) + 1/2 sum_ab H_ab cov_ab.
/// Exact for quadratic Hamiltonians.
template <int N>
double expand_effective_hamiltonian(const QuadraticHamiltonian<N>& h, const MeanVector<N>& means,
                                    const CovarianceMatrix<N>& cov) {
    require_same_frame(h.frame, means.frame());
    require_same_frame(h.frame, cov.frame());
    return h.classical_value(means.values()) + h.moment_value(cov.entries());
}

/// Hamiltonian flow of a quadratic H: means follow z' = W_c H z, moments follow
/// cov' = A cov + cov A^T with A = W_q H. Means and moments are mutually
/// bracket-orthogonal so the two sectors never mix.
template <int N>
ModelSystem<N> generate_dynamics(const QuadraticHamiltonian<N>& h,
                                 const SymplecticForm<N>& classical_form,
                                 const SymplecticForm<N>& moment_form,
                                 std::optional<ModelParams> params = std::nullopt) {
    require_same_frame(h.frame, classical_form.frame);
    require_same_frame(h.frame, moment_form.frame);
    return {h.frame,
            classical_form.matrix * h.hessian,
            moment_form.matrix * h.hessian,
            Mat<N>::Zero(),
            params,
            ModelLabel::SBTHGenerated};
}

}  // namespace momentous
