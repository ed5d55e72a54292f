#include "flowcob/periodic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace flowcob {

const char* to_string(Polarity p) {
    return p == Polarity::Attracting ? "attracting" : "repelling";
}

const Region* PeriodicStructure::region_by_id(int id) const {
    for (const Region& r : regions)
        if (r.id == id) return &r;
    return nullptr;
}

const Orbit* PeriodicStructure::orbit_by_id(int id) const {
    for (const Orbit& o : orbits)
        if (o.id == id) return &o;
    return nullptr;
}

int PeriodicStructure::orbit_side_count(int orbit_id) const {
    int n = 0;
    for (const Region& r : regions)
        for (const OrbitMark& m : r.marks)
            if (m.orbit == orbit_id) ++n;
    return n;
}

namespace {

// Incidence graph: one node per region, one edge per orbit (joining the two
// regions carrying its sides).  Returns {component count, edge count} or
// nullopt if some orbit does not have exactly two sides.
struct Incidence {
    int components = 0;
    int edges = 0;
    bool well_formed = true;
};

Incidence incidence_graph(const PeriodicStructure& p) {
    Incidence inc;
    std::map<int, std::vector<int>> sides;  // orbit id -> region ids (with repeats)
    std::map<int, int> region_index;
    for (std::size_t i = 0; i < p.regions.size(); ++i) {
        region_index[p.regions[i].id] = static_cast<int>(i);
        for (const OrbitMark& m : p.regions[i].marks) sides[m.orbit].push_back(p.regions[i].id);
    }
    for (const Orbit& o : p.orbits)
        if (!sides.count(o.id)) sides[o.id] = {};

    std::vector<std::vector<int>> adj(p.regions.size());
    for (const auto& [orbit, rs] : sides) {
        if (rs.size() != 2) {
            inc.well_formed = false;
            continue;
        }
        ++inc.edges;
        adj[region_index[rs[0]]].push_back(region_index[rs[1]]);
        adj[region_index[rs[1]]].push_back(region_index[rs[0]]);
    }

    std::vector<char> seen(p.regions.size(), 0);
    for (std::size_t i = 0; i < p.regions.size(); ++i) {
        if (seen[i]) continue;
        ++inc.components;
        std::vector<int> stack{static_cast<int>(i)};
        seen[i] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
        }
    }
    return inc;
}

}  // namespace

int implied_surface_genus(const PeriodicStructure& p) {
    int total = 0;
    for (const Region& r : p.regions) total += r.genus;
    Incidence inc = incidence_graph(p);
    int cycle_rank = inc.edges - static_cast<int>(p.regions.size()) + inc.components;
    return total + cycle_rank;
}

StructureReport validate_structure(const PeriodicStructure& p) {
    StructureReport rep;
    if (p.regions.empty()) {
        rep.fail("no regions");
        return rep;
    }

    std::set<int> region_ids, orbit_ids;
    for (const Region& r : p.regions)
        if (!region_ids.insert(r.id).second) rep.fail("duplicate region id " + std::to_string(r.id));
    for (const Orbit& o : p.orbits)
        if (!orbit_ids.insert(o.id).second) rep.fail("duplicate orbit id " + std::to_string(o.id));

    for (const Orbit& o : p.orbits) {
        int sides = p.orbit_side_count(o.id);
        if (sides != 2)
            rep.fail("orbit " + std::to_string(o.id) + " has " + std::to_string(sides) +
                     " sides, expected 2");
    }

    for (const Region& r : p.regions) {
        const std::string tag = "region " + std::to_string(r.id) + ": ";
        if (r.closed_field.role != SkeletonRole::SinkSkeleton)
            rep.fail(tag + "closed field must use the sink-skeleton role");
        if (r.closed_field.map.genus() != r.genus)
            rep.fail(tag + "closed field genus " + std::to_string(r.closed_field.map.genus()) +
                     " does not match declared genus " + std::to_string(r.genus));

        std::set<int> mv, mf;
        for (const OrbitMark& m : r.marks) {
            const Orbit* o = p.orbit_by_id(m.orbit);
            if (!o) {
                rep.fail(tag + "mark references unknown orbit " + std::to_string(m.orbit));
                continue;
            }
            if (m.on_vertex != (o->polarity == Polarity::Attracting))
                rep.fail(tag + "orbit " + std::to_string(m.orbit) + " is " +
                         to_string(o->polarity) + " but marks a " + (m.on_vertex ? "vertex" : "face"));
            if (m.on_vertex) {
                if (m.index < 0 || m.index >= r.closed_field.map.vertex_count())
                    rep.fail(tag + "marked vertex " + std::to_string(m.index) + " out of range");
                else if (!mv.insert(m.index).second)
                    rep.fail(tag + "vertex " + std::to_string(m.index) + " marked twice");
            } else {
                if (m.index < 0 || m.index >= r.closed_field.map.face_count())
                    rep.fail(tag + "marked face " + std::to_string(m.index) + " out of range");
                else if (!mf.insert(m.index).second)
                    rep.fail(tag + "face " + std::to_string(m.index) + " marked twice");
            }
        }
        if (mv != r.closed_field.marked_vertices)
            rep.fail(tag + "marked vertex set does not mirror the orbit marks");
        if (mf != r.closed_field.marked_faces)
            rep.fail(tag + "marked face set does not mirror the orbit marks");

        try {
            FieldGraph fg = reconstruct_field_graph(r.closed_field);
            auto v = validate_field_graph(fg);
            if (!v.valid) rep.fail(tag + "reconstructed field invalid: " + v.violations.front());
        } catch (const Error& e) {
            rep.fail(tag + "reconstruction failed: " + e.what());
        }
    }

    Incidence inc = incidence_graph(p);
    if (inc.components != 1) rep.fail("orbit incidence graph is not connected");
    if (inc.well_formed && inc.components == 1) {
        int implied = implied_surface_genus(p);
        if (implied != p.surface_genus)
            rep.fail("region genera and incidence cycles imply genus " + std::to_string(implied) +
                     ", declared " + std::to_string(p.surface_genus));
        if (p.surface_genus == 0) {
            int cycle_rank = inc.edges - static_cast<int>(p.regions.size()) + inc.components;
            if (cycle_rank != 0) rep.fail("on the sphere the incidence graph must be a tree");
            for (const Region& r : p.regions)
                if (r.genus != 0)
                    rep.fail("on the sphere every region must have genus 0 (region " +
                             std::to_string(r.id) + ")");
        }
    }
    return rep;
}

std::vector<Move> periodic_moves(const Region& r) {
    std::vector<Move> out = sink_moves(r.closed_field);
    std::vector<Move> del = source_moves(r.closed_field);
    out.insert(out.end(), del.begin(), del.end());
    for (Move& m : out) m.region = r.id;
    return out;
}

std::vector<std::pair<int, int>> swallow_candidates(const PeriodicStructure& p) {
    std::vector<std::pair<int, int>> out;
    for (const Region& r : p.regions) {
        if (r.genus != 0) continue;
        if (r.marks.size() != 1) continue;
        if (r.closed_field.map.n_darts() != 0) continue;
        out.emplace_back(r.marks.front().orbit, r.id);
    }
    return out;
}

PeriodicStructure apply_swallow(const PeriodicStructure& p, int orbit_id, int region_id) {
    auto cands = swallow_candidates(p);
    if (std::find(cands.begin(), cands.end(), std::make_pair(orbit_id, region_id)) == cands.end())
        throw Error(Errc::NotACandidate, "orbit " + std::to_string(orbit_id) + " / region " +
                                             std::to_string(region_id) + " is not a swallow candidate");

    PeriodicStructure out;
    out.surface_genus = p.surface_genus;
    for (const Orbit& o : p.orbits)
        if (o.id != orbit_id) out.orbits.push_back(o);
    for (const Region& r : p.regions) {
        if (r.id == region_id) continue;
        Region nr = r;
        auto it = std::find_if(nr.marks.begin(), nr.marks.end(),
                               [&](const OrbitMark& m) { return m.orbit == orbit_id; });
        if (it != nr.marks.end()) {
            if (it->on_vertex)
                nr.closed_field.marked_vertices.erase(it->index);
            else
                nr.closed_field.marked_faces.erase(it->index);
            nr.marks.erase(it);
        }
        out.regions.push_back(std::move(nr));
    }
    return out;
}

PeriodicStructure canonical_structure(const PeriodicStructure& p) {
    PeriodicStructure out;
    out.surface_genus = p.surface_genus;
    out.orbits = p.orbits;
    std::sort(out.orbits.begin(), out.orbits.end(),
              [](const Orbit& a, const Orbit& b) { return a.id < b.id; });
    for (const Region& r : p.regions) {
        Region nr;
        nr.id = r.id;
        nr.genus = r.genus;
        SkeletonCanonicalization canon = canonicalize_skeleton(r.closed_field);
        nr.closed_field = canon.skeleton;
        for (OrbitMark m : r.marks) {
            m.index = m.on_vertex ? canon.vertex_map[m.index] : canon.face_map[m.index];
            nr.marks.push_back(m);
        }
        std::sort(nr.marks.begin(), nr.marks.end(), [](const OrbitMark& a, const OrbitMark& b) {
            return std::tie(a.orbit, a.on_vertex, a.index) < std::tie(b.orbit, b.on_vertex, b.index);
        });
        out.regions.push_back(std::move(nr));
    }
    std::sort(out.regions.begin(), out.regions.end(),
              [](const Region& a, const Region& b) { return a.id < b.id; });
    return out;
}

std::string structure_form(const PeriodicStructure& p) {
    PeriodicStructure c = canonical_structure(p);
    std::ostringstream os;
    os << "PS:g=" << c.surface_genus << ";orbits=[";
    for (std::size_t i = 0; i < c.orbits.size(); ++i)
        os << (i ? "," : "") << c.orbits[i].id << ":"
           << (c.orbits[i].polarity == Polarity::Attracting ? "a" : "r");
    os << "];regions=[";
    for (std::size_t i = 0; i < c.regions.size(); ++i) {
        const Region& r = c.regions[i];
        os << (i ? "|" : "") << r.id << ":g=" << r.genus << ":" << skeleton_form(r.closed_field)
           << ":marks=[";
        for (std::size_t j = 0; j < r.marks.size(); ++j)
            os << (j ? "," : "") << r.marks[j].orbit << (r.marks[j].on_vertex ? "v" : "f")
               << r.marks[j].index;
        os << "]";
    }
    os << "]";
    return os.str();
}

namespace {

// Applies one merge move inside the named region, keeping the region's
// closed field canonical and its marks translated.
void apply_region_move(PeriodicStructure& state, const Move& m) {
    Region* r = nullptr;
    for (Region& cand : state.regions)
        if (cand.id == m.region) r = &cand;
    if (!r) throw Error(Errc::MoveNotApplicable, "no region " + std::to_string(m.region));

    Surgery surgery = apply_move_detail(r->closed_field, m);
    SkeletonCanonicalization canon = canonicalize_skeleton(surgery.result);
    for (OrbitMark& mark : r->marks) {
        int mid = mark.on_vertex ? surgery.vertex_map[mark.index] : surgery.face_map[mark.index];
        mark.index = mark.on_vertex ? canon.vertex_map[mid] : canon.face_map[mid];
    }
    r->closed_field = canon.skeleton;
}

// Greedy merge choice within a region: contractions first, lowest edge id.
std::optional<Move> pick_region_move(const Region& r) {
    auto moves = periodic_moves(r);
    if (moves.empty()) return std::nullopt;
    return moves.front();
}

}  // namespace

Trace reduce_sphere_full(const PeriodicStructure& p) {
    StructureReport rep = validate_structure(p);
    if (!rep.valid)
        throw Error(Errc::PreconditionViolated, "invalid structure: " + rep.violations.front());
    if (p.surface_genus != 0)
        throw Error(Errc::NotSphere, "full reduction is proven on the sphere only");

    PeriodicStructure state = canonical_structure(p);
    Trace tr;
    auto record = [&](Move mv, const std::string& pre, PeriodicStructure&& next) {
        std::string post = structure_form(next);
        tr.entries.push_back(TraceEntry{mv, pre, post});
        state = std::move(next);
    };

    while (!state.orbits.empty()) {
        // lowest-id region bounded by exactly one orbit side; the incidence
        // tree always has leaves
        Region* leaf = nullptr;
        for (Region& r : state.regions)
            if (r.marks.size() == 1 && (!leaf || r.id < leaf->id)) leaf = &r;
        if (!leaf) throw Error(Errc::StuckBeforeReduced, "no leaf region found");
        const int leaf_id = leaf->id;

        while (true) {
            const Region* r = state.region_by_id(leaf_id);
            auto mv = pick_region_move(*r);
            if (!mv) break;
            std::string pre = structure_form(state);
            PeriodicStructure next = state;
            apply_region_move(next, *mv);
            record(*mv, pre, std::move(next));
        }

        const Region* r = state.region_by_id(leaf_id);
        const int orbit_id = r->marks.front().orbit;
        Move sw;
        sw.kind = MoveKind::Swallow;
        sw.orbit = orbit_id;
        sw.region = leaf_id;
        std::string pre = structure_form(state);
        record(sw, pre, apply_swallow(state, orbit_id, leaf_id));
    }

    // one region left; finish with plain merges
    const int last_id = state.regions.front().id;
    while (true) {
        const Region* r = state.region_by_id(last_id);
        auto mv = pick_region_move(*r);
        if (!mv) break;
        std::string pre = structure_form(state);
        PeriodicStructure next = state;
        apply_region_move(next, *mv);
        record(*mv, pre, std::move(next));
    }

    const Region& last = state.regions.front();
    if (last.closed_field.map.n_darts() != 0 || !last.closed_field.unmarked())
        throw Error(Errc::StuckBeforeReduced, "terminal state is not the minimal field");
    return tr;
}

StructureReplay replay_structure(const PeriodicStructure& initial, const Trace& trace) {
    PeriodicStructure state = canonical_structure(initial);
    StructureReplay rep;
    rep.genus_along.push_back(implied_surface_genus(state));
    for (const TraceEntry& e : trace.entries) {
        if (structure_form(state) != e.pre)
            throw Error(Errc::TheoremViolation, "structure trace broke: state mismatch");
        if (e.move.inverse)
            throw Error(Errc::MoveNotApplicable, "structure traces replay forward only");
        if (e.move.kind == MoveKind::Swallow) {
            state = apply_swallow(state, e.move.orbit, e.move.region);
        } else {
            apply_region_move(state, e.move);
        }
        if (structure_form(state) != e.post)
            throw Error(Errc::TheoremViolation, "structure trace broke: move does not yield post state");
        rep.genus_along.push_back(implied_surface_genus(state));
    }
    rep.final_state = std::move(state);
    return rep;
}

}  // namespace flowcob
