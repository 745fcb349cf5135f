#pragma once

#include <string>
#include <vector>

#include "gbs/labeled_graph.hpp"

namespace gbs {

/// Isomorphism type of a finitely generated abelian group:
/// Z^rank + Z/t1 + ... + Z/tk with 2 <= t1 | t2 | ... | tk.
struct AbelianInvariant {
    long rank = 0;
    std::vector<Label> torsion;

    bool operator==(const AbelianInvariant&) const = default;
};

std::string to_string(const AbelianInvariant& a);

/// Diagonal of the Smith normal form of an integer matrix (row-major), with
/// nonnegative entries in divisor-chain order; zero entries are kept so the
/// result has min(rows, cols) entries.
std::vector<Label> smith_diagonal(const std::vector<std::vector<Label>>& matrix);

/// Abelianized fundamental group of the graph of groups.  One relation row
/// per geometric edge (a*x_u - b*x_w, or (a - b)*x_v for a loop), one free
/// generator per stable letter.
AbelianInvariant abelianization(const LabeledGraph& g);

}  // namespace gbs
