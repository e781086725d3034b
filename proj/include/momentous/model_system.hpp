#pragma once

#include <optional>
#include <string_view>

#include "momentous/frame.hpp"
#include "momentous/params.hpp"

namespace momentous {

enum class ModelLabel { SBTH, SBTHGenerated, QdhoXY, Lindblad, Classical };

constexpr std::string_view to_string(ModelLabel l) {
    switch (l) {
        case ModelLabel::SBTH: return "SBTH";
        case ModelLabel::SBTHGenerated: return "SBTH-generated";
        case ModelLabel::QdhoXY: return "QDHO-XY";
        case ModelLabel::Lindblad: return "LINDBLAD";
        case ModelLabel::Classical: return "CLASSICAL";
    }
    return "?";
}

/// Linear dynamics of one model:
///   d means / dt = a_classical * means
///   d cov / dt   = a_moment * cov + cov * a_moment^T + diffusion
template <int N>
struct ModelSystem {
    CanonicalFrame frame;
    Mat<N> a_classical;
    Mat<N> a_moment;
    Mat<N> diffusion;
    std::optional<ModelParams> params;
    ModelLabel label;

    Vec<N> mean_rate(const Vec<N>& z) const { return a_classical * z; }

    Mat<N> moment_rate(const Mat<N>& cov) const {
        const Mat<N> ac = a_moment * cov;
        return ac + ac.transpose() + diffusion;
    }
};

/// Coefficient matrix of the moment equations on packed moments: row k gives
/// d/dt of moment k as a combination of all moments (excluding diffusion).
template <int N>
Eigen::Matrix<double, moment_count(N), moment_count(N)> moment_rows(const Mat<N>& a) {
    constexpr int K = moment_count(N);
    Eigen::Matrix<double, K, K> rows = Eigen::Matrix<double, K, K>::Zero();
    const auto idx = moment_indices<N>();
    auto pos = [](int r, int c) {
        return moment_position<N>(r <= c ? MomentIndex{r, c} : MomentIndex{c, r});
    };
    for (int k = 0; k < K; ++k) {
        const auto [i, j] = idx[static_cast<std::size_t>(k)];
        for (int c = 0; c < N; ++c) {
            rows(k, pos(c, j)) += a(i, c);
            rows(k, pos(c, i)) += a(j, c);
        }
    }
    return rows;
}

}  // namespace momentous
