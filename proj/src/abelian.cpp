#include "gbs/abelian.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

using Big = boost::multiprecision::cpp_int;
using BigMatrix = std::vector<std::vector<Big>>;

Big big_abs(const Big& x) { return x < 0 ? Big(-x) : x; }

// In-place reduction to diagonal form; returns the diagonal.
std::vector<Big> diagonalize(BigMatrix m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    const std::size_t n = std::min(rows, cols);
    std::vector<Big> diag;

    for (std::size_t t = 0; t < n; ++t) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        for (;;) {
            std::size_t pr = rows, pc = cols;
            for (std::size_t i = t; i < rows; ++i) {
                for (std::size_t j = t; j < cols; ++j) {
                    if (m[i][j] != 0 && (pr == rows || big_abs(m[i][j]) < big_abs(m[pr][pc]))) {
                        pr = i;
                        pc = j;
                    }
                }
            }
            if (pr == rows) {
                // Remaining block is zero.
                for (std::size_t k = t; k < n; ++k) diag.emplace_back(0);
                return diag;
            }
            std::swap(m[t], m[pr]);
            for (auto& row : m) std::swap(row[t], row[pc]);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                Big q = m[i][t] / m[t][t];
                if (q != 0) {
                    for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
                }
                if (m[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                Big q = m[t][j] / m[t][t];
                if (q != 0) {
                    for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
                }
                if (m[t][j] != 0) clean = false;
            }
            if (!clean) continue;

            // Pivot must divide the rest of the block; otherwise fold a row in.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (m[i][j] % m[t][t] != 0) {
                        for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
                        divides = false;
                        break;
                    }
                }
            }
            if (divides) break;
        }
        diag.push_back(big_abs(m[t][t]));
    }
    return diag;
}

Label to_label(const Big& x) {
    if (x > Big(std::numeric_limits<Label>::max())) {
        throw PreconditionError("label-overflow", "invariant factor exceeds 64 bits");
    }
    return static_cast<Label>(x);
}

}  // namespace

std::vector<Label> smith_diagonal(const std::vector<std::vector<Label>>& matrix) {
    BigMatrix m;
    m.reserve(matrix.size());
    for (const auto& row : matrix) {
        std::vector<Big> r;
        r.reserve(row.size());
        for (Label x : row) r.emplace_back(x);
        m.push_back(std::move(r));
    }
    std::vector<Big> d = diagonalize(std::move(m));
    // The pivoting above already yields a divisor chain among nonzero
    // entries; zeros were appended last.
    std::vector<Label> out;
    out.reserve(d.size());
    for (const auto& x : d) out.push_back(to_label(x));
    return out;
}

AbelianInvariant abelianization(const LabeledGraph& g) {
    require_valid(g);
    std::map<VertexId, std::size_t> column;
    for (VertexId v : g.vertices()) column.emplace(v, column.size());

    std::vector<std::vector<Label>> rows;
    for (const auto& [id, e] : g.edges()) {
        std::vector<Label> row(column.size(), 0);
        const auto& [a, b] = e.ends;
        if (e.is_loop()) {
            row[column[a.vertex]] = a.label - b.label;
        } else {
            row[column[a.vertex]] = a.label;
            row[column[b.vertex]] = -b.label;
        }
        rows.push_back(std::move(row));
    }

    AbelianInvariant out;
    long matrix_rank = 0;
    if (!rows.empty()) {
        for (Label d : smith_diagonal(rows)) {
            if (d == 0) continue;
            ++matrix_rank;
            if (d > 1) out.torsion.push_back(d);
        }
    }
    out.rank = static_cast<long>(column.size()) - matrix_rank + betti(g);
    return out;
}

std::string to_string(const AbelianInvariant& a) {
    std::ostringstream os;
    os << "Z^" << a.rank;
    for (Label t : a.torsion) os << " + Z/" << t;
    return os.str();
}

}  // namespace gbs
