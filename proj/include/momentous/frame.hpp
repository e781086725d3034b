#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "momentous/errors.hpp"

namespace momentous {

enum class FrameId { BT1, XY, L1 };

/// One canonical pair: positions of q and p in the frame, and the sign s in
/// [q, p] = s i hbar.
struct CanonicalPair {
    int q;
    int p;
    int signature;
};

/// Named coordinate ordering with per-pair commutator signs.
///
///   BT1: (x1, p1, p2, x2)   pairs (x1, p1; +1), (x2, p2; -1)
///   XY:  (x, p_x, y, p_y)   pairs (x, p_x; +1), (y, p_y; +1)
///   L1:  (x, p)             pair  (x, p; +1)
class CanonicalFrame {
public:
    static constexpr CanonicalFrame bt1() {
        return CanonicalFrame(FrameId::BT1, 4, {{{0, 1, +1}, {3, 2, -1}}});
    }
    static constexpr CanonicalFrame xy() {
        return CanonicalFrame(FrameId::XY, 4, {{{0, 1, +1}, {2, 3, +1}}});
    }
    static constexpr CanonicalFrame l1() {
        return CanonicalFrame(FrameId::L1, 2, {{{0, 1, +1}, {0, 0, 0}}});
    }

    constexpr FrameId id() const noexcept { return id_; }
    constexpr int dimension() const noexcept { return dim_; }
    constexpr int pair_count() const noexcept { return dim_ / 2; }
    constexpr CanonicalPair pair(int k) const { return pairs_[static_cast<std::size_t>(k)]; }
    std::span<const CanonicalPair> pairs() const {
        return {pairs_.data(), static_cast<std::size_t>(pair_count())};
    }

    constexpr std::string_view name() const noexcept {
        switch (id_) {
            case FrameId::BT1: return "BT1";
            case FrameId::XY: return "XY";
            case FrameId::L1: return "L1";
        }
        return "?";
    }

    std::string_view coordinate_name(int i) const {
        static constexpr std::array<std::string_view, 4> bt1_names{"x1", "p1", "p2", "x2"};
        static constexpr std::array<std::string_view, 4> xy_names{"x", "p_x", "y", "p_y"};
        static constexpr std::array<std::string_view, 2> l1_names{"x", "p"};
        const auto idx = static_cast<std::size_t>(i);
        switch (id_) {
            case FrameId::BT1: return bt1_names.at(idx);
            case FrameId::XY: return xy_names.at(idx);
            case FrameId::L1: return l1_names.at(idx);
        }
        return "?";
    }

    friend constexpr bool operator==(const CanonicalFrame& a, const CanonicalFrame& b) {
        return a.id_ == b.id_;
    }

private:
    constexpr CanonicalFrame(FrameId id, int dim, std::array<CanonicalPair, 2> pairs)
        : id_(id), dim_(dim), pairs_(pairs) {}

    FrameId id_;
    int dim_;
    std::array<CanonicalPair, 2> pairs_;
};

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;
template <int N>
using Mat = Eigen::Matrix<double, N, N>;

inline void require_frame_dimension(const CanonicalFrame& f, int n) {
    if (f.dimension() != n) {
        throw FrameMismatch("frame " + std::string(f.name()) + " has dimension " +
                            std::to_string(f.dimension()) + ", expected " + std::to_string(n));
    }
}

inline void require_same_frame(const CanonicalFrame& a, const CanonicalFrame& b) {
    if (!(a == b)) {
        throw FrameMismatch("frame mismatch: " + std::string(a.name()) + " vs " +
                            std::string(b.name()));
    }
}

/// Expectation values of the canonical coordinates.
template <int N>
class MeanVector {
public:
    MeanVector(CanonicalFrame frame, const Vec<N>& values) : frame_(frame), values_(values) {
        require_frame_dimension(frame, N);
        if (!values.allFinite()) throw std::invalid_argument("mean vector has non-finite entries");
    }

    static MeanVector zero(CanonicalFrame frame) { return MeanVector(frame, Vec<N>::Zero()); }

    const CanonicalFrame& frame() const noexcept { return frame_; }
    const Vec<N>& values() const noexcept { return values_; }
    double operator[](int i) const { return values_(i); }

private:
    CanonicalFrame frame_;
    Vec<N> values_;
};

/// Position of a second moment in the symmetric covariance matrix (i <= j).
struct MomentIndex {
    int i;
    int j;

    friend constexpr bool operator==(MomentIndex, MomentIndex) = default;
    friend constexpr auto operator<=>(MomentIndex, MomentIndex) = default;
};

constexpr int moment_count(int n) { return n * (n + 1) / 2; }

/// Second moments in lexicographic order of their exponent tuples; for BT1 this
/// is 2000, 1100, 1010, 1001, 0200, 0110, 0101, 0020, 0011, 0002.
template <int N>
constexpr std::array<MomentIndex, moment_count(N)> moment_indices() {
    std::array<MomentIndex, moment_count(N)> out{};
    std::size_t k = 0;
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) out[k++] = {i, j};
    return out;
}

template <int N>
constexpr int moment_position(MomentIndex idx) {
    const auto all = moment_indices<N>();
    for (std::size_t k = 0; k < all.size(); ++k)
        if (all[k] == idx) return static_cast<int>(k);
    return -1;
}

/// Converts an exponent tuple such as {1,0,0,1} into the matrix position it
/// names. The exponents must sum to two.
template <int N>
MomentIndex moment_from_exponents(const std::array<int, N>& exps) {
    int first = -1, second = -1, total = 0;
    for (int k = 0; k < N; ++k) {
        const int e = exps[static_cast<std::size_t>(k)];
        if (e < 0 || e > 2) throw std::invalid_argument("moment exponent out of range");
        total += e;
        for (int r = 0; r < e; ++r) (first < 0 ? first : second) = k;
    }
    if (total != 2) throw std::invalid_argument("only second-order moments are represented");
    return {first, second};
}

/// Exponent string for a moment index, e.g. (0,3) -> "1001".
template <int N>
std::string exponent_label(MomentIndex idx) {
    std::string s(static_cast<std::size_t>(N), '0');
    s[static_cast<std::size_t>(idx.i)]++;
    s[static_cast<std::size_t>(idx.j)]++;
    return s;
}

/// Symmetric matrix of Weyl-ordered centred second moments.
template <int N>
class CovarianceMatrix {
public:
    CovarianceMatrix(CanonicalFrame frame, const Mat<N>& entries)
        : frame_(frame), entries_(entries) {
        require_frame_dimension(frame, N);
        if (!entries.allFinite())
            throw std::invalid_argument("covariance has non-finite entries");
        if (entries != entries.transpose())
            throw std::invalid_argument("covariance matrix is not symmetric");
        if ((entries.diagonal().array() < 0.0).any())
            throw std::invalid_argument("covariance has a negative variance");
    }

    static CovarianceMatrix zero(CanonicalFrame frame) { return {frame, Mat<N>::Zero()}; }

    const CanonicalFrame& frame() const noexcept { return frame_; }
    const Mat<N>& entries() const noexcept { return entries_; }

    double operator()(int i, int j) const { return entries_(i, j); }
    double moment(MomentIndex idx) const { return entries_(idx.i, idx.j); }
    double moment(const std::array<int, N>& exps) const {
        return moment(moment_from_exponents<N>(exps));
    }

    /// q-q times p-p variance minus squared q-p covariance for pair k.
    double uncertainty_determinant(int k) const {
        const auto pr = frame_.pair(k);
        const double c = entries_(pr.q, pr.p);
        return entries_(pr.q, pr.q) * entries_(pr.p, pr.p) - c * c;
    }

    /// Moments packed in moment_indices order.
    Eigen::Matrix<double, moment_count(N), 1> packed() const {
        Eigen::Matrix<double, moment_count(N), 1> v;
        const auto idx = moment_indices<N>();
        for (std::size_t k = 0; k < idx.size(); ++k)
            v(static_cast<Eigen::Index>(k)) = entries_(idx[k].i, idx[k].j);
        return v;
    }

private:
    CanonicalFrame frame_;
    Mat<N> entries_;
};

/// Exponent-tuple view of a BT1 covariance: g1(c, {2,0,0,0}) is the x1 variance.
inline double g1(const CovarianceMatrix<4>& cov, std::array<int, 4> exps) {
    if (cov.frame().id() != FrameId::BT1) throw FrameMismatch("g1 requires a BT1 covariance");
    return cov.moment(exps);
}

}  // namespace momentous
