#include "flowcob/census.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

namespace flowcob {

long long CensusReport::total_classes() const {
    long long t = 0;
    for (const auto& pe : per_edge) t += pe.n_classes;
    return t;
}

long long CensusReport::cobordism_classes() const {
    return static_cast<long long>(terminal_forms.size());
}

namespace {

constexpr int kMaxEdgesWall = 5;  // all rotations of 2E darts: 10! is the limit

void check_budget(int edges) {
    if (edges < 0 || edges > kMaxEdgesWall)
        throw Error(Errc::BudgetExceeded,
                    "enumeration is exhaustive over (2E)! rotations; E must be in 0.." +
                        std::to_string(kMaxEdgesWall));
}

// Canonical forms of all connected maps with this exact edge count and genus.
std::set<std::string> sweep_forms(int edges, int genus, int jobs) {
    std::set<std::string> forms;
    if (edges == 0) {
        if (genus == 0) forms.insert(canonical_form(CombinatorialMap::build({}, {}, 1)));
        return forms;
    }
    const int n = 2 * edges;
    Perm alpha(n);
    for (int i = 0; i < edges; ++i) {
        alpha[2 * i] = 2 * i + 1;
        alpha[2 * i + 1] = 2 * i;
    }

    jobs = std::max(1, jobs);
    std::vector<std::set<std::string>> partial(jobs);
    auto worker = [&](int me) {
        Perm sigma(n);
        std::iota(sigma.begin(), sigma.end(), 0);
        long long index = 0;
        do {
            if (index++ % jobs != me) continue;
            // connectivity first, it is the cheap filter
            std::vector<char> seen(n, 0);
            std::vector<Dart> stack{0};
            seen[0] = 1;
            int reached = 1;
            while (!stack.empty()) {
                Dart x = stack.back();
                stack.pop_back();
                for (Dart y : {alpha[x], sigma[x]}) {
                    if (!seen[y]) {
                        seen[y] = 1;
                        ++reached;
                        stack.push_back(y);
                    }
                }
            }
            if (reached != n) continue;
            CombinatorialMap m = CombinatorialMap::build(alpha, sigma);
            if (m.genus() != genus) continue;
            partial[me].insert(canonical_form(m));
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    };

    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (auto& p : partial) forms.merge(p);
    return forms;
}

}  // namespace

std::vector<SkeletonMap> enumerate_exact(int edges, int genus, int jobs) {
    check_budget(edges);
    std::vector<SkeletonMap> out;
    for (const std::string& form : sweep_forms(edges, genus, jobs)) {
        SkeletonMap s;
        s.map = decode_map(form);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<SkeletonMap> enumerate_skeletons(int max_edges, int genus, int jobs) {
    check_budget(max_edges);
    std::vector<SkeletonMap> out;
    for (int e = 0; e <= max_edges; ++e) {
        auto batch = enumerate_exact(e, genus, jobs);
        out.insert(out.end(), batch.begin(), batch.end());
    }
    return out;
}

CensusReport verify_theorems(int genus, int max_edges, int jobs,
                             const std::string& counterexample_path) {
    check_budget(max_edges);
    CensusReport rep;
    rep.genus = genus;
    rep.max_edges = max_edges;

    auto bail = [&](const SkeletonMap& s, const std::string& why) {
        if (!counterexample_path.empty()) {
            std::ofstream out(counterexample_path);
            out << skeleton_form(s) << "\n" << why << "\n";
        }
        throw Error(Errc::TheoremViolation, why + " for " + skeleton_form(s));
    };

    std::set<std::string> terminals;
    for (int e = 0; e <= max_edges; ++e) {
        CensusReport::PerEdge pe;
        pe.edges = e;
        std::set<std::string> terminals_here;
        for (const SkeletonMap& s : enumerate_exact(e, genus, jobs)) {
            ++pe.n_classes;

            FieldGraph fg = reconstruct_field_graph(s);
            if (!validate_field_graph(fg).valid) bail(s, "reconstruction fails validation");

            if (poincare_hopf_residual(fg) != 0) bail(s, "index relation violated");
            ++pe.ph_ok;

            SkeletonDerivation back = derive_sink_skeleton(fg);
            // connectivity is enforced by the map type; F = U is the claim
            if (back.skeleton.map.face_count() != fg.sources())
                bail(s, "sink skeleton face count differs from source count");
            ++pe.one_source_per_region_ok;

            if (!map_isomorphic(back.skeleton.map, s.map)) bail(s, "skeleton round trip failed");
            ++pe.roundtrip_ok;

            if (!duality_check(fg)) bail(s, "skeleton duality failed");
            ++pe.duality_ok;

            if (e >= 1) {
                if (!is_saddled_triangulation(fg).ok) bail(s, "reconstruction is not a saddled triangulation");
                if (static_cast<int>(flow_certificate(fg).triangles.size()) != fg.map.face_count())
                    bail(s, "certificate does not cover every face");
            }
            ++pe.triangulation_ok;

            Trace tr;
            try {
                tr = reduce(s);
            } catch (const Error&) {
                ++pe.reduction_failures;
                bail(s, "reduction got stuck");
            }
            const std::size_t expected =
                static_cast<std::size_t>((s.map.vertex_count() - 1) + (s.map.face_count() - 1));
            if (tr.size() != expected) bail(s, "trace length is not (V-1)+(F-1)");
            Replay rp = replay(s, tr);
            for (int g : rp.genus_along)
                if (g != genus) bail(s, "genus drifted along the trace");
            if (rp.final_state.map.edge_count() != 2 * genus) bail(s, "terminal edge count is not 2g");
            if (genus <= 1 &&
                !map_isomorphic(rp.final_state.map, canonical_reduced(genus).map))
                bail(s, "terminal is not the canonical reduced skeleton");
            terminals_here.insert(skeleton_form(rp.final_state));
        }
        pe.n_cobordism_classes = static_cast<long long>(terminals_here.size());
        terminals.merge(terminals_here);
        rep.per_edge.push_back(pe);
    }
    rep.terminal_forms.assign(terminals.begin(), terminals.end());
    return rep;
}

}  // namespace flowcob
