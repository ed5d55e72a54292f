#pragma once

#include <optional>
#include <string>
#include <vector>

namespace flowcob {

// A dart is a half-edge, identified by an index in [0, n_darts).
using Dart = int;
using Perm = std::vector<Dart>;

enum class Errc {
    SizeMismatch,
    NotInvolution,
    FixedPointInAlpha,
    Disconnected,
    NotConnected,
    InducedEmbeddingDegenerate,
    NotSaddledTriangulation,
    MoveNotApplicable,
    StuckBeforeReduced,
    GenusMismatch,
    NotSphere,
    NotUnimodular,
    NotACandidate,
    BudgetExceeded,
    TheoremViolation,
    ParseError,
    PreconditionViolated,
};

class Error : public std::exception {
public:
    Error(Errc code, std::string message) : code_(code), message_(std::move(message)) {}
    Errc code() const { return code_; }
    const char* what() const noexcept override { return message_.c_str(); }

private:
    Errc code_;
    std::string message_;
};

/// A graph cellularly embedded on a compact oriented surface, encoded as a
/// rotation system: `alpha` pairs the two darts of each edge, `sigma` is the
/// counterclockwise rotation of darts around each vertex.  Vertices are the
/// sigma-orbits, edges the alpha-orbits, and faces the orbits of
/// phi = sigma o alpha (faces are traced with their interior on the left).
///
/// Internally alpha is always kept canonical: edge i owns darts 2i and 2i+1.
/// build() renumbers any fixed-point-free involution into that shape.
///
/// The dartless map (n_darts == 0, one isolated vertex) represents the
/// single-vertex graph on the sphere; it has one face by convention.
///
/// Immutable after construction.
class CombinatorialMap {
public:
    // Inert placeholder (no vertices at all); real maps come from build().
    CombinatorialMap() = default;

    // Throws Error: SizeMismatch, NotInvolution, FixedPointInAlpha, Disconnected.
    static CombinatorialMap build(const Perm& alpha, const Perm& sigma, int isolated_vertices = 0);

    int n_darts() const { return n_darts_; }
    int isolated_vertices() const { return isolated_vertices_; }
    Dart alpha(Dart d) const { return alpha_[d]; }
    Dart sigma(Dart d) const { return sigma_[d]; }
    Dart sigma_inv(Dart d) const { return sigma_inv_[d]; }
    Dart phi(Dart d) const { return sigma_[alpha_[d]]; }
    const Perm& alpha_perm() const { return alpha_; }
    const Perm& sigma_perm() const { return sigma_; }

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return n_darts_ / 2; }
    int face_count() const { return static_cast<int>(faces_.size()); }

    // Orbit tables, indexed by id; ids are assigned in order of smallest dart.
    // The dartless map has one empty vertex cycle and one empty face cycle.
    const std::vector<std::vector<Dart>>& vertices() const { return vertices_; }
    const std::vector<std::vector<Dart>>& faces() const { return faces_; }
    int vertex_of(Dart d) const { return vertex_of_[d]; }
    int face_of(Dart d) const { return face_of_[d]; }
    int edge_of(Dart d) const { return d / 2; }

    int genus() const { return genus_; }

    bool operator==(const CombinatorialMap& o) const {
        return n_darts_ == o.n_darts_ && isolated_vertices_ == o.isolated_vertices_ &&
               alpha_ == o.alpha_ && sigma_ == o.sigma_;
    }

private:
    int n_darts_ = 0;
    int isolated_vertices_ = 0;
    Perm alpha_;
    Perm sigma_;
    Perm sigma_inv_;
    std::vector<std::vector<Dart>> vertices_;
    std::vector<std::vector<Dart>> faces_;
    std::vector<int> vertex_of_;
    std::vector<int> face_of_;
    int genus_ = 0;
};

/// Witness for a map isomorphism: a dart bijection conjugating alpha to alpha
/// and sigma to sigma.
struct DartBijection {
    std::vector<Dart> image;  // image[d] = corresponding dart in the target map

    bool conjugates(const CombinatorialMap& a, const CombinatorialMap& b) const;
};

// Faces of the dual live on the same darts: rotation of the dual is phi.
// dual_map(dual_map(m)) == m exactly.
CombinatorialMap dual_map(const CombinatorialMap& m);

// Orientation-preserving map isomorphism, found by anchoring dart 0 of `a`
// at each dart of `b` and propagating through sigma and alpha.  O(n^2).
std::optional<DartBijection> map_isomorphic(const CombinatorialMap& a, const CombinatorialMap& b);

// Lexicographically minimal serialization over all dart anchorings.
// Two maps have equal canonical forms iff map_isomorphic succeeds.
// The form is losslessly decodable, so it doubles as a state hash in traces.
std::string canonical_form(const CombinatorialMap& m);

// Inverse of canonical_form (accepts any serialized map, canonical or not).
// Throws Error(ParseError).
CombinatorialMap decode_map(const std::string& form);

namespace detail {
// BFS relabeling of all darts reachable from `anchor` (generator order:
// sigma first, then alpha).  relabel[old] = new.
std::vector<int> anchor_relabeling(const CombinatorialMap& m, Dart anchor);

// anchor_relabeling composed with edge re-pairing, so that the relabeled
// alpha is canonical (edge i owns 2i, 2i+1).  Decoding a form produced with
// this labeling reproduces the exact same dart numbers.
std::vector<int> canonical_relabeling(const CombinatorialMap& m, Dart anchor);
}  // namespace detail

}  // namespace flowcob
