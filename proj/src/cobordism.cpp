#include "flowcob/cobordism.hpp"

#include <algorithm>

namespace flowcob {

const char* to_string(MoveKind k) {
    switch (k) {
        case MoveKind::SinkMerge: return "sink_merge";
        case MoveKind::SourceMerge: return "source_merge";
        case MoveKind::Swallow: return "swallow";
        case MoveKind::TwistMacro: return "twist";
    }
    return "?";
}

std::string Move::describe() const {
    std::string s = to_string(kind);
    if (inverse) s += "^-1";
    s += "(";
    if (edge >= 0) s += "edge=" + std::to_string(edge);
    if (orbit >= 0) s += (s.back() == '(' ? "" : ",") + std::string("orbit=") + std::to_string(orbit);
    if (region >= 0) s += (s.back() == '(' ? "" : ",") + std::string("region=") + std::to_string(region);
    if (direction != 0) s += (s.back() == '(' ? "" : ",") + std::string("dir=") + std::to_string(direction);
    s += ")";
    return s;
}

bool Trace::chained() const {
    for (std::size_t i = 0; i + 1 < entries.size(); ++i)
        if (entries[i].post != entries[i + 1].pre) return false;
    return true;
}

Trace Trace::reversed_inverted() const {
    Trace out;
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        TraceEntry e = *it;
        e.move.inverse = !e.move.inverse;
        std::swap(e.pre, e.post);
        out.entries.push_back(std::move(e));
    }
    return out;
}

std::vector<Move> sink_moves(const SkeletonMap& s) {
    std::vector<Move> out;
    for (int e = 0; e < s.map.edge_count(); ++e) {
        int v = s.map.vertex_of(2 * e), w = s.map.vertex_of(2 * e + 1);
        if (v == w) continue;
        if (s.marked_vertices.count(v) && s.marked_vertices.count(w)) continue;
        out.push_back(Move{MoveKind::SinkMerge, false, e, -1, -1, 0});
    }
    return out;
}

std::vector<Move> source_moves(const SkeletonMap& s) {
    std::vector<Move> out;
    for (int e = 0; e < s.map.edge_count(); ++e) {
        int f = s.map.face_of(2 * e), g = s.map.face_of(2 * e + 1);
        if (f == g) continue;
        if (s.marked_faces.count(f) && s.marked_faces.count(g)) continue;
        out.push_back(Move{MoveKind::SourceMerge, false, e, -1, -1, 0});
    }
    return out;
}

namespace {

bool listed(const std::vector<Move>& moves, const Move& m) {
    for (const Move& x : moves)
        if (x.kind == m.kind && x.edge == m.edge) return true;
    return false;
}

}  // namespace

Surgery apply_move_detail(const SkeletonMap& s, const Move& m) {
    const CombinatorialMap& map = s.map;
    if (m.inverse)
        throw Error(Errc::MoveNotApplicable, "inverse moves are only replayed, not applied: " + m.describe());
    if (m.kind == MoveKind::SinkMerge) {
        if (!listed(sink_moves(s), m))
            throw Error(Errc::MoveNotApplicable, m.describe() + " is not an applicable contraction");
    } else if (m.kind == MoveKind::SourceMerge) {
        if (!listed(source_moves(s), m))
            throw Error(Errc::MoveNotApplicable, m.describe() + " is not an applicable deletion");
    } else {
        throw Error(Errc::MoveNotApplicable, m.describe() + " does not act on a skeleton");
    }

    const Dart d = 2 * m.edge, dp = 2 * m.edge + 1;
    const int n = map.n_darts();

    // New rotation over the old dart ids, with d and d' gone.
    std::vector<Dart> next(n, -1);
    if (m.kind == MoveKind::SinkMerge) {
        const auto& vc = map.vertices()[map.vertex_of(d)];
        const auto& wc = map.vertices()[map.vertex_of(dp)];
        std::vector<Dart> merged;
        auto append_from = [&merged](const std::vector<Dart>& cyc, Dart skip) {
            std::size_t at = std::find(cyc.begin(), cyc.end(), skip) - cyc.begin();
            for (std::size_t i = 1; i < cyc.size(); ++i) merged.push_back(cyc[(at + i) % cyc.size()]);
        };
        append_from(vc, d);
        append_from(wc, dp);
        for (std::size_t i = 0; i < merged.size(); ++i)
            next[merged[i]] = merged[(i + 1) % merged.size()];
        for (const auto& cyc : map.vertices()) {
            if (&cyc == &vc || &cyc == &wc) continue;
            for (std::size_t i = 0; i < cyc.size(); ++i) next[cyc[i]] = cyc[(i + 1) % cyc.size()];
        }
    } else {
        for (const auto& cyc : map.vertices()) {
            std::vector<Dart> kept;
            for (Dart x : cyc)
                if (x != d && x != dp) kept.push_back(x);
            for (std::size_t i = 0; i < kept.size(); ++i)
                next[kept[i]] = kept[(i + 1) % kept.size()];
        }
    }

    // Compress dart ids; a full edge is removed, so pairs stay aligned.
    std::vector<int> comp(n, -1);
    int nn = 0;
    for (Dart x = 0; x < n; ++x)
        if (x != d && x != dp) comp[x] = nn++;
    Perm alpha(nn), sigma(nn);
    for (Dart x = 0; x < n; ++x) {
        if (comp[x] < 0) continue;
        alpha[comp[x]] = comp[map.alpha(x)];
        sigma[comp[x]] = comp[next[x]];
    }

    Surgery out;
    out.result.role = s.role;
    out.result.map = CombinatorialMap::build(alpha, sigma, nn == 0 ? 1 : 0);

    // Translate vertex and face ids via surviving representative darts.
    out.vertex_map.assign(map.vertex_count(), 0);
    for (int v = 0; v < map.vertex_count(); ++v) {
        Dart rep = -1;
        for (Dart x : map.vertices()[v])
            if (x != d && x != dp) {
                rep = x;
                break;
            }
        out.vertex_map[v] = rep >= 0 ? out.result.map.vertex_of(comp[rep]) : 0;
    }
    if (m.kind == MoveKind::SinkMerge && map.vertices()[map.vertex_of(d)].size() == 1) {
        // the contracted vertex had no other dart; it joins the other endpoint
        out.vertex_map[map.vertex_of(d)] = out.vertex_map[map.vertex_of(dp)];
    }
    if (m.kind == MoveKind::SinkMerge && map.vertices()[map.vertex_of(dp)].size() == 1) {
        out.vertex_map[map.vertex_of(dp)] = out.vertex_map[map.vertex_of(d)];
    }

    out.face_map.assign(map.face_count(), 0);
    for (int f = 0; f < map.face_count(); ++f) {
        Dart rep = -1;
        for (Dart x : map.faces()[f])
            if (x != d && x != dp) {
                rep = x;
                break;
            }
        out.face_map[f] = rep >= 0 ? out.result.map.face_of(comp[rep]) : 0;
    }
    if (m.kind == MoveKind::SourceMerge) {
        // deletion merges the two side faces; keep the pair consistent even
        // when one side kept no dart of its own
        int fa = map.face_of(d), fb = map.face_of(dp);
        Dart rep = -1;
        for (int f : {fa, fb})
            for (Dart x : map.faces()[f])
                if (x != d && x != dp && rep < 0) rep = x;
        int target = rep >= 0 ? out.result.map.face_of(comp[rep]) : 0;
        out.face_map[fa] = target;
        out.face_map[fb] = target;
    }

    for (int v : s.marked_vertices) out.result.marked_vertices.insert(out.vertex_map[v]);
    for (int f : s.marked_faces) out.result.marked_faces.insert(out.face_map[f]);
    return out;
}

SkeletonMap apply_move(const SkeletonMap& s, const Move& m) { return apply_move_detail(s, m).result; }

bool is_reduced(const SkeletonMap& s) {
    return s.map.vertex_count() == 1 && s.map.face_count() == 1 && s.unmarked();
}

Trace reduce(const SkeletonMap& s, ReduceStrategy strategy) {
    SkeletonMap state = canonical_skeleton(s);
    Trace tr;
    while (state.map.vertex_count() > 1 || state.map.face_count() > 1) {
        auto contractions = sink_moves(state);
        auto deletions = source_moves(state);
        Move chosen;
        if (strategy == ReduceStrategy::PhaseOrdered) {
            if (!contractions.empty())
                chosen = contractions.front();
            else if (!deletions.empty())
                chosen = deletions.front();
            else
                throw Error(Errc::StuckBeforeReduced,
                            "no move applies at " + skeleton_form(state));
        } else {
            if (contractions.empty() && deletions.empty())
                throw Error(Errc::StuckBeforeReduced,
                            "no move applies at " + skeleton_form(state));
            // lowest edge id across both kinds; contraction wins ties
            chosen = Move{MoveKind::SinkMerge, false, state.map.edge_count(), -1, -1, 0};
            bool have = false;
            for (const auto& lst : {contractions, deletions}) {
                if (lst.empty()) continue;
                const Move& c = lst.front();
                if (!have || c.edge < chosen.edge) {
                    chosen = c;
                    have = true;
                }
            }
        }
        std::string pre = skeleton_form(state);
        SkeletonMap applied = apply_move(state, chosen);
        std::string post = skeleton_form(applied);
        tr.entries.push_back(TraceEntry{chosen, pre, post});
        state = decode_skeleton(post);
    }
    return tr;
}

SkeletonMap canonical_reduced(int genus) {
    if (genus < 0) throw Error(Errc::PreconditionViolated, "negative genus");
    SkeletonMap s;
    s.role = SkeletonRole::SinkSkeleton;
    if (genus == 0) {
        s.map = CombinatorialMap::build({}, {}, 1);
        return s;
    }
    const int n = 4 * genus;
    Perm alpha(n), sigma(n);
    for (int d = 0; d < n; d += 2) {
        alpha[d] = d + 1;
        alpha[d + 1] = d;
    }
    // per handle j: rotation 4j, 4j+2, 4j+1, 4j+3, then on to the next handle
    std::vector<Dart> rot;
    for (int j = 0; j < genus; ++j)
        for (int k : {0, 2, 1, 3}) rot.push_back(4 * j + k);
    for (std::size_t i = 0; i < rot.size(); ++i) sigma[rot[i]] = rot[(i + 1) % rot.size()];
    s.map = CombinatorialMap::build(alpha, sigma);
    return s;
}

Trace cobordant_sphere(const SkeletonMap& a, const SkeletonMap& b) {
    if (a.map.genus() != b.map.genus())
        throw Error(Errc::GenusMismatch, "skeletons live on different surfaces");
    if (a.map.genus() != 0) throw Error(Errc::NotSphere, "only the sphere is a single class here");
    if (!a.unmarked() || !b.unmarked())
        throw Error(Errc::PreconditionViolated, "marked skeletons are handled by the periodic module");
    Trace down = reduce(a);
    Trace up = reduce(b).reversed_inverted();
    Trace out = down;
    out.entries.insert(out.entries.end(), up.entries.begin(), up.entries.end());
    return out;
}

Replay replay(const SkeletonMap& initial, const Trace& trace) {
    SkeletonMap state = canonical_skeleton(initial);
    Replay rep;
    rep.genus_along.push_back(state.map.genus());
    for (const TraceEntry& e : trace.entries) {
        if (skeleton_form(state) != e.pre)
            throw Error(Errc::TheoremViolation, "trace broke: state does not match " + e.pre);
        if (!e.move.inverse) {
            SkeletonMap applied = apply_move(state, e.move);
            if (skeleton_form(applied) != e.post)
                throw Error(Errc::TheoremViolation, "trace broke: move does not yield " + e.post);
            state = decode_skeleton(e.post);
        } else {
            // an inverted entry claims its forward move maps post back to pre
            SkeletonMap target = decode_skeleton(e.post);
            Move fwd = e.move;
            fwd.inverse = false;
            SkeletonMap applied = apply_move(target, fwd);
            if (skeleton_form(applied) != e.pre)
                throw Error(Errc::TheoremViolation,
                            "trace broke: inverted move is not reversible at " + e.pre);
            state = std::move(target);
        }
        rep.genus_along.push_back(state.map.genus());
    }
    rep.final_state = std::move(state);
    return rep;
}

}  // namespace flowcob
