#include "doctest.h"
#include "fixtures.hpp"
#include "flowcob/periodic.hpp"

using namespace flowcob;
using namespace fixtures;

namespace {

// dartless closed field with one marked entity
SkeletonMap minimal_leaf_field(bool vertex_mark) {
    SkeletonMap s;
    s.map = dartless_sphere();
    if (vertex_mark)
        s.marked_vertices = {0};
    else
        s.marked_faces = {0};
    return s;
}

Region minimal_leaf(int region_id, int orbit_id, Polarity pol) {
    Region r;
    r.id = region_id;
    r.closed_field = minimal_leaf_field(pol == Polarity::Attracting);
    r.marks = {OrbitMark{orbit_id, pol == Polarity::Attracting,
                         0}};
    return r;
}

// two minimal discs glued along one attracting orbit: the smallest sphere
// structure with a periodic trajectory
PeriodicStructure two_region_sphere() {
    PeriodicStructure p;
    p.orbits = {Orbit{0, Polarity::Attracting}};
    p.regions = {minimal_leaf(0, 0, Polarity::Attracting), minimal_leaf(1, 0, Polarity::Attracting)};
    return p;
}

// disc / annulus / disc with two nested orbits of opposite polarity
PeriodicStructure nested_sphere() {
    PeriodicStructure p;
    p.orbits = {Orbit{0, Polarity::Attracting}, Orbit{1, Polarity::Repelling}};
    Region annulus;
    annulus.id = 1;
    annulus.closed_field.map = dartless_sphere();
    annulus.closed_field.marked_vertices = {0};
    annulus.closed_field.marked_faces = {0};
    annulus.marks = {OrbitMark{0, true, 0}, OrbitMark{1, false, 0}};
    p.regions = {minimal_leaf(0, 0, Polarity::Attracting), annulus,
                 minimal_leaf(2, 1, Polarity::Repelling)};
    return p;
}

}  // namespace

TEST_CASE("the minimal sphere structure validates") {
    auto rep = validate_structure(two_region_sphere());
    CHECK(rep.valid);
    CHECK(rep.violations.empty());
    CHECK(implied_surface_genus(two_region_sphere()) == 0);
}

TEST_CASE("a mark without an orbit side invalidates the region") {
    auto p = two_region_sphere();
    // the face also gets marked, but only one orbit side touches the region
    p.regions[0].closed_field.marked_faces = {0};
    auto rep = validate_structure(p);
    CHECK(!rep.valid);
}

TEST_CASE("polarity must match the mark kind") {
    auto p = two_region_sphere();
    p.orbits[0].polarity = Polarity::Repelling;  // but both sides mark vertices
    CHECK(!validate_structure(p).valid);
}

TEST_CASE("orbit side counts are enforced") {
    auto p = two_region_sphere();
    p.regions.pop_back();  // orbit 0 keeps a single side
    CHECK(!validate_structure(p).valid);
}

TEST_CASE("sphere structures must form a tree") {
    // two orbits both joining the same two regions: a cycle
    PeriodicStructure p;
    p.orbits = {Orbit{0, Polarity::Attracting}, Orbit{1, Polarity::Attracting}};
    for (int id : {0, 1}) {
        Region r;
        r.id = id;
        SkeletonMap s;
        s.map = single_edge_on_sphere();
        s.marked_vertices = {0, 1};
        r.closed_field = s;
        r.marks = {OrbitMark{0, true, 0}, OrbitMark{1, true, 1}};
        p.regions.push_back(r);
    }
    auto rep = validate_structure(p);
    CHECK(!rep.valid);  // declared genus 0 but incidence has a cycle
    p.surface_genus = 1;
    CHECK(validate_structure(p).valid);  // as a torus structure it is fine
}

TEST_CASE("a doubly incident orbit on one region counts both sides") {
    PeriodicStructure p;
    p.surface_genus = 1;
    p.orbits = {Orbit{0, Polarity::Attracting}};
    Region r;
    r.id = 0;
    SkeletonMap s;
    s.map = single_edge_on_sphere();
    s.marked_vertices = {0, 1};
    r.closed_field = s;
    r.marks = {OrbitMark{0, true, 0}, OrbitMark{0, true, 1}};
    p.regions = {r};
    CHECK(validate_structure(p).valid);
    // both endpoints marked: the merge between two orbit points is forbidden
    CHECK(periodic_moves(p.regions[0]).empty());
}

TEST_CASE("periodic moves on leaf regions") {
    Region reduced = minimal_leaf(0, 0, Polarity::Attracting);
    CHECK(periodic_moves(reduced).empty());

    Region r;
    r.id = 3;
    r.closed_field.map = single_edge_on_sphere();
    r.closed_field.marked_vertices = {0};
    r.marks = {OrbitMark{0, true, 0}};
    auto moves = periodic_moves(r);
    REQUIRE(moves.size() == 1);
    CHECK(moves[0].kind == MoveKind::SinkMerge);
    CHECK(moves[0].region == 3);

    Region l;
    l.id = 4;
    l.closed_field.map = loop_on_sphere();
    l.closed_field.marked_faces = {0};
    l.marks = {OrbitMark{0, false, 0}};
    auto lmoves = periodic_moves(l);
    REQUIRE(lmoves.size() == 1);
    CHECK(lmoves[0].kind == MoveKind::SourceMerge);
}

TEST_CASE("swallow candidates") {
    auto p = two_region_sphere();
    auto cands = swallow_candidates(p);
    REQUIRE(cands.size() == 2);
    CHECK(cands[0] == std::pair<int, int>{0, 0});
    CHECK(cands[1] == std::pair<int, int>{0, 1});

    auto nested = nested_sphere();
    auto nc = swallow_candidates(nested);
    REQUIRE(nc.size() == 2);  // the two discs, never the annulus
    CHECK(nc[0] == std::pair<int, int>{0, 0});
    CHECK(nc[1] == std::pair<int, int>{1, 2});

    // an unreduced leaf is not a candidate
    PeriodicStructure q = two_region_sphere();
    q.regions[0].closed_field.map = single_edge_on_sphere();
    q.regions[0].closed_field.marked_vertices = {0};
    CHECK(swallow_candidates(q).size() == 1);
}

TEST_CASE("apply_swallow removes the region and the mark") {
    auto p = two_region_sphere();
    auto out = apply_swallow(p, 0, 0);
    CHECK(out.orbits.empty());
    REQUIRE(out.regions.size() == 1);
    CHECK(out.regions[0].id == 1);
    CHECK(out.regions[0].marks.empty());
    CHECK(out.regions[0].closed_field.unmarked());

    auto nested = nested_sphere();
    auto after = apply_swallow(nested, 0, 0);
    CHECK(after.orbits.size() == 1);
    CHECK(after.region_by_id(1)->marks.size() == 1);
    CHECK(after.region_by_id(1)->closed_field.marked_vertices.empty());
    CHECK(after.region_by_id(1)->closed_field.marked_faces.size() == 1);

    CHECK_THROWS_AS(apply_swallow(nested, 0, 1), Error);  // the annulus is no candidate
    try {
        apply_swallow(nested, 0, 1);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotACandidate);
    }
}

TEST_CASE("a 0-orbit structure reduces like a plain skeleton") {
    PeriodicStructure p;
    Region r;
    r.id = 0;
    r.closed_field.map = theta_on_sphere();
    p.regions = {r};
    auto tr = reduce_sphere_full(p);
    SkeletonMap plain;
    plain.map = theta_on_sphere();
    auto plain_tr = reduce(plain);
    REQUIRE(tr.size() == plain_tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.entries[i].move.kind == plain_tr.entries[i].move.kind);
        CHECK(tr.entries[i].move.edge == plain_tr.entries[i].move.edge);
    }
}

TEST_CASE("minimal structure reduces with exactly one swallow") {
    auto p = two_region_sphere();
    auto tr = reduce_sphere_full(p);
    REQUIRE(tr.size() == 1);
    CHECK(tr.entries[0].move.kind == MoveKind::Swallow);
    auto rp = replay_structure(p, tr);
    CHECK(rp.final_state.orbits.empty());
    CHECK(rp.final_state.regions.size() == 1);
    for (int g : rp.genus_along) CHECK(g == 0);
}

TEST_CASE("nested structure needs two swallows") {
    auto p = nested_sphere();
    auto tr = reduce_sphere_full(p);
    int swallows = 0;
    for (const auto& e : tr.entries)
        if (e.move.kind == MoveKind::Swallow) ++swallows;
    CHECK(swallows == 2);
    auto rp = replay_structure(p, tr);
    CHECK(rp.final_state.orbits.empty());
    CHECK(rp.final_state.regions[0].closed_field.map.n_darts() == 0);
}

TEST_CASE("unreduced leaves get merged before their swallow") {
    auto p = two_region_sphere();
    p.regions[0].closed_field.map = single_edge_on_sphere();
    p.regions[0].closed_field.marked_vertices = {0};
    REQUIRE(validate_structure(p).valid);
    auto tr = reduce_sphere_full(p);
    // one contraction inside region 0, then two swallows... no: one orbit only
    int swallows = 0, merges = 0;
    for (const auto& e : tr.entries) {
        if (e.move.kind == MoveKind::Swallow)
            ++swallows;
        else
            ++merges;
    }
    CHECK(swallows == 1);
    CHECK(merges == 1);
    auto rp = replay_structure(p, tr);
    for (int g : rp.genus_along) CHECK(g == 0);
}

TEST_CASE("only swallow changes the orbit count, by one, preserving the tree") {
    auto p = nested_sphere();
    p.regions[0].closed_field.map = single_edge_on_sphere();
    p.regions[0].closed_field.marked_vertices = {0};
    auto tr = reduce_sphere_full(p);
    PeriodicStructure state = canonical_structure(p);
    for (const auto& e : tr.entries) {
        std::size_t orbits_before = state.orbits.size();
        state = replay_structure(state, Trace{{e}}).final_state;
        if (e.move.kind == MoveKind::Swallow)
            CHECK(state.orbits.size() == orbits_before - 1);
        else
            CHECK(state.orbits.size() == orbits_before);
        CHECK(validate_structure(state).valid);  // tree + genus bookkeeping intact
    }
}

TEST_CASE("marks are destroyed only by swallow") {
    auto p = nested_sphere();
    p.regions[0].closed_field.map = single_edge_on_sphere();
    p.regions[0].closed_field.marked_vertices = {0};
    REQUIRE(validate_structure(p).valid);
    auto tr = reduce_sphere_full(p);
    PeriodicStructure state = canonical_structure(p);
    auto count_marks = [](const PeriodicStructure& s) {
        std::size_t n = 0;
        for (const auto& r : s.regions) n += r.marks.size();
        return n;
    };
    std::size_t marks = count_marks(state);
    for (const auto& e : tr.entries) {
        StructureReplay step = replay_structure(state, Trace{{e}});
        std::size_t after = count_marks(step.final_state);
        if (e.move.kind == MoveKind::Swallow)
            CHECK(after == marks - 2);  // the swallowed side and the surviving side
        else
            CHECK(after == marks);
        marks = after;
        state = step.final_state;
    }
    CHECK(marks == 0);
}

TEST_CASE("reduce_sphere_full rejects other surfaces") {
    PeriodicStructure p;
    p.surface_genus = 1;
    Region r;
    r.id = 0;
    r.genus = 1;
    r.closed_field.map = two_loops_torus();
    p.regions = {r};
    REQUIRE(validate_structure(p).valid);
    CHECK_THROWS_AS(reduce_sphere_full(p), Error);
}
