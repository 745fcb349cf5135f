#include <doctest.h>

#include <numeric>
#include <random>

#include "gbs/abelian.hpp"
#include "support.hpp"

using namespace gbs;

namespace {

using Matrix = std::vector<std::vector<Label>>;

// Fraction-free elimination.
__int128 determinant(std::vector<std::vector<__int128>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    __int128 sign = 1;
    __int128 prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// Invariant factors from determinantal divisors: d_k = gcd of all k x k
// minors, s_k = d_k / d_{k-1}.
std::vector<Label> invariant_factors(const Matrix& a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<Label> out;
    __int128 prev = 1;
    for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(rows, k, 0, cur, rs);
        subsets(cols, k, 0, cur, cs);
        __int128 d = 0;
        for (const auto& r : rs) {
            for (const auto& c : cs) {
                std::vector<std::vector<__int128>> minor(k, std::vector<__int128>(k));
                for (std::size_t i = 0; i < k; ++i) {
                    for (std::size_t j = 0; j < k; ++j) minor[i][j] = a[r[i]][c[j]];
                }
                d = gcd128(d, determinant(minor));
            }
        }
        if (d == 0) {
            out.resize(std::min(rows, cols), 0);
            return out;
        }
        out.push_back(static_cast<Label>(d / prev));
        prev = d;
    }
    return out;
}

AbelianInvariant oracle(const LabeledGraph& g) {
    std::map<VertexId, std::size_t> col;
    for (VertexId v : g.vertices()) col.emplace(v, col.size());
    Matrix rows;
    for (const auto& [id, e] : g.edges()) {
        std::vector<Label> row(col.size(), 0);
        row[col[e.ends[0].vertex]] += e.ends[0].label;
        row[col[e.ends[1].vertex]] -= e.ends[1].label;
        rows.push_back(row);
    }
    AbelianInvariant out;
    long matrix_rank = 0;
    if (!rows.empty()) {
        for (Label s : invariant_factors(rows)) {
            if (s != 0) ++matrix_rank;
            if (s >= 2) out.torsion.push_back(s);
        }
    }
    out.rank = static_cast<long>(g.vertex_count()) - matrix_rank + betti(g);
    return out;
}

}  // namespace

TEST_CASE("abelianization of small examples") {
    CHECK(abelianization(single_loop(2, 3)) == AbelianInvariant{1, {}});
    CHECK(abelianization(single_loop(2, 4)) == AbelianInvariant{1, {2}});

    auto g = testing::two_vertex({{0, 1, 0, 2}, {0, 2, 1, 2}});
    CHECK(abelianization(g) == AbelianInvariant{1, {2}});
    CHECK(abelianization(g) == oracle(g));
}

TEST_CASE("smith diagonal matches determinantal divisors") {
    CHECK(smith_diagonal({{-1}}) == std::vector<Label>{1});
    CHECK(smith_diagonal({{-2}}) == std::vector<Label>{2});
    CHECK(smith_diagonal({{-1, 0}, {2, -2}}) == std::vector<Label>{1, 2});
    CHECK(smith_diagonal({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == invariant_factors({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}));
    CHECK(smith_diagonal({{0, 0}, {0, 0}}) == std::vector<Label>{0, 0});

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto r = static_cast<std::size_t>(testing::pick(rng, 1, 4));
        const auto c = static_cast<std::size_t>(testing::pick(rng, 1, 4));
        Matrix m(r, std::vector<Label>(c));
        for (auto& row : m) {
            for (auto& x : row) x = testing::pick(rng, -9, 9);
        }
        CAPTURE(trial);
        CHECK(smith_diagonal(m) == invariant_factors(m));
    }
}

TEST_CASE("loop (p,q) torsion is |p - q|") {
    for (Label p = -10; p <= 10; ++p) {
        for (Label q = -10; q <= 10; ++q) {
            if (p == 0 || q == 0) continue;
            const Label diff = p > q ? p - q : q - p;
            AbelianInvariant expected{1, {}};
            if (diff >= 2) expected.torsion.push_back(diff);
            if (diff == 0) expected.rank = 2;
            CAPTURE(p);
            CAPTURE(q);
            CHECK(abelianization(single_loop(p, q)) == expected);
            CHECK(abelianization(single_loop(p, q)) == oracle(single_loop(p, q)));
        }
    }
}

TEST_CASE("abelianization agrees with the minor oracle on random graphs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        auto g = testing::random_graph(rng, 5, 7, 12);
        CAPTURE(to_string(g));
        CHECK(abelianization(g) == oracle(g));
    }
}
