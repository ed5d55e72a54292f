#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowcob/surface_map.hpp"

namespace flowcob {

enum class NodeKind { Source, Sink, Saddle };

const char* to_string(NodeKind k);

/// Directed embedded graph of the fixed points of a stable flow: one vertex
/// per fixed point, one edge per class of connecting trajectories.  Edge i is
/// the alpha-orbit {2i, 2i+1}; tail_dart[i] names the dart sitting at the
/// tail vertex, which orients the edge.
struct FieldGraph {
    CombinatorialMap map;
    std::vector<NodeKind> kinds;   // per vertex id
    std::vector<Dart> tail_dart;   // per edge id

    int tail_vertex(int edge) const { return map.vertex_of(tail_dart[edge]); }
    int head_vertex(int edge) const { return map.vertex_of(map.alpha(tail_dart[edge])); }
    bool dart_is_tail(Dart d) const { return tail_dart[d / 2] == d; }

    int count(NodeKind k) const;
    int sources() const { return count(NodeKind::Source); }
    int sinks() const { return count(NodeKind::Sink); }
    int saddles() const { return count(NodeKind::Saddle); }
};

enum class SkeletonRole { SinkSkeleton, SourceSkeleton };

/// Undirected companion graph: sinks (or sources) as vertices, one edge per
/// saddle.  Marks flag vertices/faces that stand for closed-off periodic
/// orbits; both sets are empty for plain fields.
struct SkeletonMap {
    CombinatorialMap map;
    SkeletonRole role = SkeletonRole::SinkSkeleton;
    std::set<int> marked_vertices;
    std::set<int> marked_faces;

    bool unmarked() const { return marked_vertices.empty() && marked_faces.empty(); }
};

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
    int sources = 0, sinks = 0, saddles = 0, genus = 0;

    void fail(std::string what) {
        valid = false;
        violations.push_back(std::move(what));
    }
};

/// One triangle of the per-face flow certificate: the three corners by kind
/// and the three boundary edges by direction class.
struct FlowCertificate {
    struct Triangle {
        int face;
        int source_vertex, saddle_vertex, sink_vertex;
        int source_saddle_edge, saddle_sink_edge, source_sink_edge;
    };
    std::vector<Triangle> triangles;
};

struct SaddledCheck {
    bool ok = true;
    int offending_face = -1;
    std::string reason;
};

// Checks every field-graph invariant and reports all violations at once.
ValidationReport validate_field_graph(const FieldGraph& fg);

// sources + sinks - saddles - (2 - 2 genus); zero for every valid field graph.
int poincare_hopf_residual(const FieldGraph& fg);

// Derivation of a skeleton with provenance kept for the duality test.
struct SkeletonDerivation {
    SkeletonMap skeleton;
    // skeleton dart -> the fg dart it replaced (the head dart at the kept
    // endpoint of the corresponding half of the saddle edge).
    std::vector<Dart> fg_dart_of;
    // skeleton vertex id -> fg vertex id (a sink for role SinkSkeleton).
    std::vector<int> fg_vertex_of;
};

// Sinks as vertices, one edge per saddle; the embedding is induced by
// splicing each saddle's two outgoing half-edges into the sink rotations.
// Throws Error(InducedEmbeddingDegenerate) on structurally corrupt input.
SkeletonDerivation derive_sink_skeleton(const FieldGraph& fg);
SkeletonDerivation derive_source_skeleton(const FieldGraph& fg);
SkeletonMap sink_skeleton(const FieldGraph& fg);
SkeletonMap source_skeleton(const FieldGraph& fg);

// Deterministic inverse of sink_skeleton: subdivide each skeleton edge with a
// saddle, put one source in each face, and join it to every edge side and
// every corner of the face walk.  Role SourceSkeleton swaps source/sink.
FieldGraph reconstruct_field_graph(const SkeletonMap& s);

// True iff fg validates, every face is a triangle, and each triangle has one
// source, one saddle and one sink corner.
SaddledCheck is_saddled_triangulation(const FieldGraph& fg);

// The two skeletons are dual tessellations: dual(sink skeleton) must be
// isomorphic to the source skeleton by a bijection sending each sink-skeleton
// face to the source it contains.
bool duality_check(const FieldGraph& fg);

// Per-face corner/edge assignment; requires is_saddled_triangulation.
// Throws Error(NotSaddledTriangulation).
FlowCertificate flow_certificate(const FieldGraph& fg);

// For each source vertex of fg: the sink-skeleton face containing it, or
// nullopt if its edges do not land consistently in a single face.
std::vector<std::optional<int>> region_of_source(const FieldGraph& fg, const SkeletonDerivation& sink_skel);

// Skeleton state serialization: canonical map form extended with role and
// marks (marks written in the canonical labeling, minimized over the
// anchorings that realize the canonical map form).  Decodable; equal strings
// iff the marked skeletons are isomorphic.
std::string skeleton_form(const SkeletonMap& s);
SkeletonMap decode_skeleton(const std::string& form);

// Canonicalization with the id translation kept, for mark bookkeeping.
struct SkeletonCanonicalization {
    SkeletonMap skeleton;         // equals decode_skeleton(form)
    std::string form;
    std::vector<int> vertex_map;  // old vertex id -> canonical vertex id
    std::vector<int> face_map;
};
SkeletonCanonicalization canonicalize_skeleton(const SkeletonMap& s);

// Deterministic representative of the isomorphism class: decode(form(s)).
SkeletonMap canonical_skeleton(const SkeletonMap& s);

}  // namespace flowcob
