#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flowcob/cobordism.hpp"

namespace flowcob {

/// A closed trajectory, absorbing on both sides (Attracting) or emitting on
/// both sides (Repelling).
enum class Polarity { Attracting, Repelling };

const char* to_string(Polarity p);

struct Orbit {
    int id = 0;
    Polarity polarity = Polarity::Attracting;
};

/// One side of an orbit, closed off inside a region: an attracting orbit
/// becomes a marked vertex of the region's skeleton, a repelling one a marked
/// face.
struct OrbitMark {
    int orbit = 0;
    bool on_vertex = true;
    int index = 0;

    bool operator==(const OrbitMark&) const = default;
};

/// A component cut out by the orbits, stored already closed: the skeleton of
/// the induced field on the closed-off surface, with one mark per incident
/// orbit side.
struct Region {
    int id = 0;
    int genus = 0;
    SkeletonMap closed_field;      // role SinkSkeleton; marked sets mirror `marks`
    std::vector<OrbitMark> marks;  // one per incident orbit side; orbit ids may repeat
};

struct PeriodicStructure {
    int surface_genus = 0;
    std::vector<Orbit> orbits;
    std::vector<Region> regions;

    const Region* region_by_id(int id) const;
    const Orbit* orbit_by_id(int id) const;
    int orbit_side_count(int orbit_id) const;
};

struct StructureReport {
    bool valid = true;
    std::vector<std::string> violations;

    void fail(std::string what) {
        valid = false;
        violations.push_back(std::move(what));
    }
};

// Every structural invariant: mark/orbit bijection with polarity-matched mark
// kinds, two sides per orbit, connected incidence, genus bookkeeping
// (sum of region genera plus incidence cycle rank equals the surface genus,
// which on the sphere forces a tree of genus-0 regions), and each region's
// closed field reconstructing to a valid field graph.
StructureReport validate_structure(const PeriodicStructure& p);

// Merge moves available inside one region under the marked-entity rules.
std::vector<Move> periodic_moves(const Region& r);

// (orbit id, region id) pairs where the region is a genus-0 disc bounded by
// that single orbit and already reduced: its closed field is the dartless
// skeleton carrying exactly the orbit's mark, the other entity is the one
// interior zero.
std::vector<std::pair<int, int>> swallow_candidates(const PeriodicStructure& p);

// Deletes the region; the orbit's point on the surviving side becomes an
// ordinary zero (the mark is erased).  Throws Error(NotACandidate).
PeriodicStructure apply_swallow(const PeriodicStructure& p, int orbit_id, int region_id);

// Repeatedly picks the lowest-id leaf region, reduces its closed field with
// periodic_moves, swallows its orbit, and finally reduces the last region.
// The trace carries exactly n swallow entries for n orbits and ends at the
// minimal field.  Throws Error(NotSphere).
Trace reduce_sphere_full(const PeriodicStructure& p);

// Deterministic serialization of the whole state (regions canonicalized).
std::string structure_form(const PeriodicStructure& p);

// Regions' closed fields canonicalized with their marks translated, regions
// and orbits sorted by id.  Moves in structure traces reference this labeling.
PeriodicStructure canonical_structure(const PeriodicStructure& p);

// Forward replay with state-hash verification; returns per-step surface genus.
struct StructureReplay {
    PeriodicStructure final_state;
    std::vector<int> genus_along;
};
StructureReplay replay_structure(const PeriodicStructure& initial, const Trace& trace);

// Surface genus implied by the pieces: sum of region genera + cycle rank of
// the orbit incidence graph.
int implied_surface_genus(const PeriodicStructure& p);

}  // namespace flowcob
