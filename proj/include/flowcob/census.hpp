#pragma once

#include <string>
#include <vector>

#include "flowcob/cobordism.hpp"
#include "flowcob/field_graph.hpp"

namespace flowcob {

/// Exhaustive verification tallies over all embedded skeletons with E <= max_edges
/// on a fixed genus.  Class counting quotients by map isomorphism, i.e. by
/// surface homeomorphism, which is coarser than isotopy for genus >= 1.
struct CensusReport {
    int genus = 0;
    int max_edges = 0;
    struct PerEdge {
        int edges = 0;
        long long n_classes = 0;
        long long n_cobordism_classes = 0;  // distinct reduction terminals
        long long reduction_failures = 0;   // must stay 0
        long long ph_ok = 0;
        long long one_source_per_region_ok = 0;  // skeleton connected with F = U
        long long duality_ok = 0;
        long long roundtrip_ok = 0;
        long long triangulation_ok = 0;
    };
    std::vector<PerEdge> per_edge;

    long long total_classes() const;
    long long cobordism_classes() const;  // distinct terminals across all edge counts
    std::vector<std::string> terminal_forms;
};

// All connected maps with exactly `edges` edges and the given genus, one
// canonical representative per isomorphism class, sorted by canonical form.
// Sweeps every rotation of 2E darts with alpha fixed canonically.
// Throws Error(BudgetExceeded) beyond the documented wall of 5 edges.
std::vector<SkeletonMap> enumerate_exact(int edges, int genus, int jobs = 1);

// Union of enumerate_exact(0..max_edges).
std::vector<SkeletonMap> enumerate_skeletons(int max_edges, int genus, int jobs = 1);

// Runs every check on every census instance: reconstruction validates, the
// index relation holds, the sink skeleton is connected with F = U and round
// trips, the two skeletons are dual, reconstructions with at least one saddle
// are saddled triangulations with a full certificate, and greedy reduction
// terminates in (V-1)+(F-1) moves at the expected terminal (the canonical
// reduced skeleton, for genus <= 1) with constant genus along the trace.
// The first failure writes the offending skeleton to `counterexample_path`
// and throws Error(TheoremViolation).
CensusReport verify_theorems(int genus, int max_edges, int jobs = 1,
                             const std::string& counterexample_path = "");

}  // namespace flowcob
