#pragma once

#include <algorithm>
#include <random>

#include "flowcob/field_graph.hpp"
#include "flowcob/surface_map.hpp"

namespace fixtures {

using namespace flowcob;

// One loop at one vertex: V=1, E=1, F=2, genus 0.
inline CombinatorialMap loop_on_sphere() {
    return CombinatorialMap::build({1, 0}, {1, 0});
}

// One edge between two vertices: V=2, E=1, F=1, genus 0.
inline CombinatorialMap single_edge_on_sphere() {
    return CombinatorialMap::build({1, 0}, {0, 1});
}

// Two loops at one vertex, interleaved: V=1, E=2, F=1, genus 1.
inline CombinatorialMap two_loops_torus() {
    return CombinatorialMap::build({1, 0, 3, 2}, {2, 3, 1, 0});
}

// Two loops at one vertex, nested: V=1, E=2, F=3, genus 0.
inline CombinatorialMap two_loops_sphere() {
    return CombinatorialMap::build({1, 0, 3, 2}, {1, 2, 3, 0});
}

// Two vertices joined by three parallel edges: V=2, E=3, F=3, genus 0.
inline CombinatorialMap theta_on_sphere() {
    // rotations (0 2 4) and (1 5 3): opposite senses so each pair of
    // consecutive edges bounds a digon.
    return CombinatorialMap::build({1, 0, 3, 2, 5, 4}, {2, 5, 4, 1, 0, 3});
}

inline CombinatorialMap dartless_sphere() {
    return CombinatorialMap::build({}, {}, 1);
}

// Source, sink, and one connecting edge: the minimal field graph.
inline FieldGraph reduced_sphere_field() {
    FieldGraph fg;
    fg.map = single_edge_on_sphere();
    fg.kinds = {NodeKind::Source, NodeKind::Sink};
    fg.tail_dart = {0};
    return fg;
}

// Two sources, one saddle, one sink on the sphere; V=4, E=6, F=4.
// Rotations: saddle (0 7 2 5), sink (1 9 3 11), sources (8 4) and (10 6).
inline FieldGraph four_vertex_sphere_field() {
    Perm alpha{1, 0, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10};
    Perm sigma(12);
    auto cyc = [&sigma](std::initializer_list<Dart> darts) {
        Dart prev = -1, first = -1;
        for (Dart d : darts) {
            if (first < 0)
                first = d;
            else
                sigma[prev] = d;
            prev = d;
        }
        sigma[prev] = first;
    };
    cyc({0, 7, 2, 5});
    cyc({1, 9, 3, 11});
    cyc({8, 4});
    cyc({10, 6});
    FieldGraph fg;
    fg.map = CombinatorialMap::build(alpha, sigma);
    fg.kinds = {NodeKind::Saddle, NodeKind::Sink, NodeKind::Source, NodeKind::Source};
    fg.tail_dart = {0, 2, 4, 6, 8, 10};
    return fg;
}

// Random connected map with `edges` edges (canonical alpha, random rotation).
inline CombinatorialMap random_map(std::mt19937& rng, int edges) {
    const int n = 2 * edges;
    Perm alpha(n);
    for (int i = 0; i < edges; ++i) {
        alpha[2 * i] = 2 * i + 1;
        alpha[2 * i + 1] = 2 * i;
    }
    Perm sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = i;
    while (true) {
        std::shuffle(sigma.begin(), sigma.end(), rng);
        try {
            return CombinatorialMap::build(alpha, sigma);
        } catch (const Error&) {
            continue;  // disconnected, reroll
        }
    }
}

// Conjugate both permutations by a random dart bijection.
inline CombinatorialMap random_relabeling(std::mt19937& rng, const CombinatorialMap& m) {
    const int n = m.n_darts();
    Perm r(n);
    for (int i = 0; i < n; ++i) r[i] = i;
    std::shuffle(r.begin(), r.end(), rng);
    Perm alpha(n), sigma(n);
    for (Dart d = 0; d < n; ++d) {
        alpha[r[d]] = r[m.alpha(d)];
        sigma[r[d]] = r[m.sigma(d)];
    }
    return CombinatorialMap::build(alpha, sigma, m.isolated_vertices());
}

}  // namespace fixtures
