#pragma once

#include <string>
#include <vector>

#include "flowcob/field_graph.hpp"

namespace flowcob {

enum class MoveKind { SinkMerge, SourceMerge, Swallow, TwistMacro };

const char* to_string(MoveKind k);

/// One local rewriting step.  SinkMerge contracts a non-loop edge (two
/// vertices and the edge between them collapse to one vertex); SourceMerge
/// deletes an edge separating two distinct faces.  Swallow and TwistMacro are
/// owned by the periodic and torus modules but share this record.
/// Every move is reversible; `inverse` marks a reversed application.
struct Move {
    MoveKind kind;
    bool inverse = false;
    int edge = -1;       // SinkMerge / SourceMerge / TwistMacro loop edge
    int orbit = -1;      // Swallow
    int region = -1;     // region scope for moves inside a periodic structure
    int direction = 0;   // TwistMacro: +1 or -1

    std::string describe() const;
};

/// Replayable rewriting history.  States are recorded as decodable canonical
/// forms; consecutive entries chain (post of one == pre of the next).
struct TraceEntry {
    Move move;
    std::string pre;
    std::string post;
};

struct Trace {
    std::vector<TraceEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool chained() const;
    Trace reversed_inverted() const;
};

enum class ReduceStrategy { PhaseOrdered, Interleaved };

// All contractible edges: non-loop, endpoints not both marked.
std::vector<Move> sink_moves(const SkeletonMap& s);

// All deletable edges: the two sides lie on distinct faces, not both marked.
std::vector<Move> source_moves(const SkeletonMap& s);

// Applies a forward move listed by the enumerators.  Genus and connectivity
// are preserved; V+F drops by exactly one.  Throws Error(MoveNotApplicable).
SkeletonMap apply_move(const SkeletonMap& s, const Move& m);

// apply_move plus the vertex/face id translation, for mark bookkeeping.
struct Surgery {
    SkeletonMap result;
    std::vector<int> vertex_map;  // old vertex id -> new vertex id
    std::vector<int> face_map;    // old face id -> new face id
};
Surgery apply_move_detail(const SkeletonMap& s, const Move& m);

// Greedy reduction: contract non-loop edges until one vertex remains, then
// delete face-separating edges until one face remains (PhaseOrdered), or take
// the lowest-edge applicable move of either kind at each step (Interleaved).
// Moves are recorded against the canonical labeling of each pre-state.
// Throws Error(StuckBeforeReduced) if no move applies before V=1, F=1.
Trace reduce(const SkeletonMap& s, ReduceStrategy strategy = ReduceStrategy::PhaseOrdered);

// One vertex, 2g loops, one face, in the standard handle pattern.
SkeletonMap canonical_reduced(int genus);

bool is_reduced(const SkeletonMap& s);

// reduce(a) followed by the reversed, inverted reduce(b); replaying from a
// ends in a state isomorphic to b.  Throws GenusMismatch / NotSphere.
Trace cobordant_sphere(const SkeletonMap& a, const SkeletonMap& b);

// Replays a trace from `initial`, verifying every state hash and that
// inverted entries really invert their forward move.  Records the genus of
// every intermediate state.  Throws Error on any mismatch.
struct Replay {
    SkeletonMap final_state;
    std::vector<int> genus_along;  // one entry per state, initial included
};
Replay replay(const SkeletonMap& initial, const Trace& trace);

}  // namespace flowcob
