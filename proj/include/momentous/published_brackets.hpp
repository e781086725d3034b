#pragma once

#include <array>
#include <utility>
#include <vector>

namespace momentous {

/// One listed bracket {G_lhs, G_rhs} = sum coeff * G_term between BT1 moments,
/// each moment written as its exponent tuple over (x1, p1, p2, x2).
struct PublishedBracket {
    std::array<int, 4> lhs;
    std::array<int, 4> rhs;
    std::vector<std::pair<double, std::array<int, 4>>> value;
};

/// The non-trivial brackets of the BT1 second-moment algebra as tabulated in
/// the original derivation, in the order listed there (left column, then
/// right column). {2000,0101} appears in both orders.
inline const std::vector<PublishedBracket>& published_brackets() {
    using E = std::array<int, 4>;
    static const std::vector<PublishedBracket> table{
        {E{2, 0, 0, 0}, E{1, 0, 1, 0}, {}},
        {E{2, 0, 0, 0}, E{0, 1, 0, 1}, {{2, E{1, 0, 0, 1}}}},
        {E{2, 0, 0, 0}, E{0, 2, 0, 0}, {{4, E{1, 1, 0, 0}}}},
        {E{0, 2, 0, 0}, E{1, 0, 1, 0}, {{-2, E{0, 1, 1, 0}}}},
        {E{0, 0, 2, 0}, E{0, 1, 0, 1}, {{2, E{0, 1, 1, 0}}}},
        {E{0, 0, 2, 0}, E{0, 0, 0, 2}, {{4, E{0, 0, 1, 1}}}},
        {E{0, 0, 0, 2}, E{1, 0, 1, 0}, {{-2, E{1, 0, 0, 1}}}},
        {E{1, 1, 0, 0}, E{0, 1, 0, 1}, {{1, E{0, 1, 0, 1}}}},
        {E{0, 1, 0, 1}, E{2, 0, 0, 0}, {{-2, E{1, 0, 0, 1}}}},
        {E{1, 0, 0, 1}, E{1, 0, 1, 0}, {{-1, E{2, 0, 0, 0}}}},
        {E{1, 0, 0, 1}, E{0, 1, 0, 1}, {{1, E{0, 0, 0, 2}}}},
        {E{1, 0, 0, 1}, E{0, 2, 0, 0}, {{2, E{0, 1, 0, 1}}}},
        {E{1, 0, 0, 1}, E{0, 1, 1, 0}, {{1, E{0, 0, 1, 1}}, {-1, E{1, 1, 0, 0}}}},
        {E{1, 0, 0, 1}, E{0, 0, 2, 0}, {{-2, E{1, 0, 1, 0}}}},
        {E{0, 1, 1, 0}, E{1, 0, 1, 0}, {{-1, E{0, 0, 2, 0}}}},
        {E{0, 0, 1, 1}, E{0, 0, 0, 2}, {{2, E{0, 0, 0, 2}}}},
        {E{0, 1, 1, 0}, E{0, 1, 0, 1}, {{1, E{0, 2, 0, 0}}}},
        {E{0, 1, 1, 0}, E{2, 0, 0, 0}, {{-2, E{1, 0, 1, 0}}}},
        {E{0, 1, 1, 0}, E{0, 0, 0, 2}, {{2, E{0, 1, 0, 1}}}},
        {E{1, 1, 0, 0}, E{1, 0, 1, 0}, {{-1, E{1, 0, 1, 0}}}},
        {E{1, 1, 0, 0}, E{0, 2, 0, 0}, {{2, E{0, 2, 0, 0}}}},
        {E{1, 1, 0, 0}, E{2, 0, 0, 0}, {{-2, E{2, 0, 0, 0}}}},
        {E{0, 0, 1, 1}, E{1, 0, 1, 0}, {{-1, E{1, 0, 1, 0}}}},
        {E{0, 0, 1, 1}, E{0, 1, 0, 1}, {{1, E{0, 1, 0, 1}}}},
        {E{0, 0, 1, 1}, E{0, 0, 2, 0}, {{-2, E{0, 0, 2, 0}}}},
        {E{1, 0, 1, 0}, E{0, 1, 0, 1}, {{1, E{1, 1, 0, 0}}, {1, E{0, 0, 1, 1}}}},
    };
    return table;
}

}  // namespace momentous
