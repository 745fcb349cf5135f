#include <doctest.h>

#include <random>

#include "gbs/abelian.hpp"
#include "gbs/errors.hpp"
#include "gbs/explorer.hpp"
#include "gbs/whitehead.hpp"
#include "support.hpp"

using namespace gbs;

namespace {

LabeledGraph bs24_expanded() {
    LabeledGraph g;
    g.add_vertex(0);
    g.add_vertex(1);
    g.add_edge(0, {1, 1}, {1, 2});
    g.add_edge(1, {1, 2}, {0, 2});
    return g;
}

bool contains(const Orbit& o, const LabeledGraph& g) {
    return std::binary_search(o.keys.begin(), o.keys.end(), canonical_form(g));
}

LabeledGraph replay(LabeledGraph g, const std::vector<Move>& moves) {
    for (const auto& m : moves) g = apply_move(g, m).graph;
    return g;
}

Bounds small() {
    Bounds b;
    b.max_label = 24;
    b.max_vertices = 4;
    b.max_edges = 5;
    b.max_depth = 3;
    b.max_frontier = 2000;
    return b;
}

}  // namespace

TEST_CASE("orbit examples") {
    auto rigid = reduced_orbit(single_loop(2, 3), Bounds{});
    CHECK(rigid.keys.size() == 1);
    CHECK(rigid.exhausted);

    Bounds zero;
    zero.max_depth = 0;
    auto at_zero = reduced_orbit(single_loop(2, 3), zero);
    CHECK(at_zero.keys.size() == 1);
    CHECK(at_zero.exhausted);

    auto bs = reduced_orbit(single_loop(2, 4), Bounds{});
    CHECK(contains(bs, single_loop(2, 4)));
    CHECK(contains(bs, bs24_expanded()));
    CHECK_FALSE(bs.exhausted);  // inductions keep raising labels

    auto cut = reduced_orbit(single_loop(2, 4), zero);
    CHECK(cut.keys.size() == 1);
    CHECK_FALSE(cut.exhausted);

    CHECK_THROWS_AS(reduced_orbit(testing::two_vertex({{0, 1, 1, 3}}), Bounds{}), PreconditionError);
    Bounds tight;
    tight.max_label = 3;
    CHECK_THROWS_AS(reduced_orbit(single_loop(2, 4), tight), PreconditionError);
}

TEST_CASE("orbit invariants and parallel determinism") {
    std::mt19937_64 rng(41);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto g = testing::random_graph(rng, 3, 3, 6);
        if (!is_reduced(g)) continue;
        ++checked;
        auto b = small();
        auto seq = reduced_orbit(g, b, 1);
        auto par = reduced_orbit(g, b, 4);
        CHECK(seq.keys == par.keys);
        CHECK(seq.exhausted == par.exhausted);
        const auto ab = abelianization(g);
        for (const auto& k : seq.keys) {
            CHECK(is_reduced(k.graph));
            CHECK(abelianization(k.graph) == ab);
            CHECK(betti(k.graph) == betti(g));
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("path examples") {
    auto same = find_path(single_loop(2, 3), single_loop(3, 2), Bounds{});
    CHECK(same.found);
    CHECK(same.moves.empty());

    Bounds b;
    b.max_depth = 3;
    auto one = find_path(single_loop(2, 4), bs24_expanded(), b);
    REQUIRE(one.found);
    REQUIRE(one.moves.size() == 1);
    CHECK(std::holds_alternative<AMove>(one.moves[0]));
    CHECK(equivalent(one.graphs.back(), bs24_expanded()));

    auto back = find_path(bs24_expanded(), single_loop(2, 4), b);
    REQUIRE(back.found);
    REQUIRE(back.moves.size() == 1);
    CHECK(std::holds_alternative<AInverseMove>(back.moves[0]));

    CHECK_FALSE(find_path(single_loop(2, 3), single_loop(2, 5), Bounds{}).found);
}

TEST_CASE("paths between orbit members replay both ways") {
    std::mt19937_64 rng(43);
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 25; ++trial) {
        auto g1 = testing::random_graph(rng, 3, 3, 6);
        if (!is_reduced(g1)) continue;
        auto b = small();
        auto orbit = reduced_orbit(g1, b);
        if (orbit.keys.size() < 2) continue;
        ++checked;
        const auto& g2 = orbit.keys[static_cast<std::size_t>(testing::pick(rng, 0, static_cast<std::int64_t>(orbit.keys.size()) - 1))].graph;
        CAPTURE(to_string(g1));
        CAPTURE(to_string(g2));
        auto there = find_path(g1, g2, b);
        REQUIRE(there.found);
        CHECK(there.moves.size() <= b.max_depth);
        CHECK(equivalent(replay(g1, there.moves), g2));
        for (const auto& g : there.graphs) CHECK(is_reduced(g));
        const auto reached = replay(g1, there.moves);
        auto back = find_path(reached, g1, b);
        REQUIRE(back.found);
        CHECK(equivalent(replay(reached, back.moves), g1));
    }
    CHECK(checked >= 10);
}

TEST_CASE("rigidity by conditions") {
    CHECK(is_rigid_conditions(single_loop(2, 3)).status == RigidStatus::Rigid);
    auto bs = is_rigid_conditions(single_loop(2, 4));
    CHECK(bs.status == RigidStatus::NotRigid);
    REQUIRE(bs.pair.has_value());
    CHECK(bs.pair->first.edge == bs.pair->second.edge);

    LabeledGraph lollipop;
    lollipop.add_vertex(0);
    lollipop.add_vertex(1);
    lollipop.add_edge(0, {0, 1}, {0, 1});
    lollipop.add_edge(1, {0, 5}, {1, 7});
    CHECK(is_rigid_conditions(lollipop).status == RigidStatus::Rigid);

    CHECK(is_rigid_conditions(testing::two_vertex({{0, 2, 1, 3}, {0, 4, 1, 5}})).status == RigidStatus::NotRigid);
    CHECK(is_rigid_conditions(single_loop(1, 2)).status == RigidStatus::AscendingHnnExcluded);
    CHECK_THROWS_AS(is_rigid_conditions(testing::two_vertex({{0, 1, 1, 3}})), PreconditionError);
}

TEST_CASE("rigidity by moves") {
    CHECK(is_rigid_moves(single_loop(2, 3)).status == RigidStatus::Rigid);
    auto bs = is_rigid_moves(single_loop(2, 4));
    CHECK(bs.status == RigidStatus::NotRigid);
    REQUIRE(bs.move.has_value());
    CHECK(std::holds_alternative<AMove>(bs.move->move));

    auto two = is_rigid_moves(testing::two_vertex({{0, 2, 1, 3}, {0, 4, 1, 5}}));
    CHECK(two.status == RigidStatus::NotRigid);
    REQUIRE(two.move.has_value());
    CHECK(std::holds_alternative<Slide>(two.move->move));

    CHECK(is_rigid_moves(single_loop(1, 3)).status == RigidStatus::AscendingHnnExcluded);
    LabeledGraph lollipop;
    lollipop.add_vertex(0);
    lollipop.add_vertex(1);
    lollipop.add_edge(0, {0, 1}, {0, 1});
    lollipop.add_edge(1, {0, 5}, {1, 7});
    CHECK(is_rigid_moves(lollipop).status == RigidStatus::UnitUnitLoopExcluded);
    // Only trivial slides exist there.
    for (const auto& em : enumerate_moves(lollipop, MoveBounds::unbounded())) CHECK(em.trivial);
}

TEST_CASE("ascending witnesses") {
    auto direct = ascending_witness(single_loop(1, 2), Bounds{});
    CHECK(direct.found);
    CHECK(direct.moves.empty());
    CHECK(direct.loop == 0);

    CHECK_FALSE(ascending_witness(single_loop(2, 3), Bounds{}).found);

    LabeledGraph iii;
    iii.add_vertex(0);
    iii.add_vertex(1);
    iii.add_edge(0, {1, 1}, {1, 6});
    iii.add_edge(1, {1, 12}, {0, 5});
    auto w = ascending_witness(iii, Bounds{});
    CHECK(w.found);
    CHECK(w.moves.empty());

    // BS(2,4) reaches a strict ascending loop through its A-move.
    auto bs = ascending_witness(single_loop(2, 4), Bounds{});
    REQUIRE(bs.found);
    CHECK(is_strict_ascending_loop(bs.graph, bs.loop));
    CHECK(equivalent(replay(single_loop(2, 4), bs.moves), bs.graph));
}
