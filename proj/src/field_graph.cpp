#include "flowcob/field_graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

namespace flowcob {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Source: return "source";
        case NodeKind::Sink: return "sink";
        case NodeKind::Saddle: return "saddle";
    }
    return "?";
}

int FieldGraph::count(NodeKind k) const {
    int n = 0;
    for (NodeKind x : kinds)
        if (x == k) ++n;
    return n;
}

ValidationReport validate_field_graph(const FieldGraph& fg) {
    ValidationReport rep;
    const CombinatorialMap& m = fg.map;
    rep.genus = m.genus();

    if (static_cast<int>(fg.kinds.size()) != m.vertex_count()) {
        rep.fail("kinds has " + std::to_string(fg.kinds.size()) + " entries for " +
                 std::to_string(m.vertex_count()) + " vertices");
        return rep;
    }
    if (static_cast<int>(fg.tail_dart.size()) != m.edge_count()) {
        rep.fail("tail has " + std::to_string(fg.tail_dart.size()) + " entries for " +
                 std::to_string(m.edge_count()) + " edges");
        return rep;
    }
    for (int e = 0; e < m.edge_count(); ++e) {
        Dart t = fg.tail_dart[e];
        if (t / 2 != e) {
            rep.fail("tail dart " + std::to_string(t) + " does not belong to edge " + std::to_string(e));
            return rep;
        }
    }

    rep.sources = fg.sources();
    rep.sinks = fg.sinks();
    rep.saddles = fg.saddles();

    for (int e = 0; e < m.edge_count(); ++e) {
        if (fg.kinds[fg.tail_vertex(e)] == fg.kinds[fg.head_vertex(e)])
            rep.fail("edge " + std::to_string(e) + " joins two " +
                     std::string(to_string(fg.kinds[fg.tail_vertex(e)])) + " vertices");
    }

    for (int v = 0; v < m.vertex_count(); ++v) {
        int in = 0, out = 0;
        for (Dart d : m.vertices()[v]) {
            if (fg.dart_is_tail(d))
                ++out;
            else
                ++in;
        }
        switch (fg.kinds[v]) {
            case NodeKind::Source:
                if (in != 0)
                    rep.fail("source vertex " + std::to_string(v) + " has in-degree " + std::to_string(in));
                break;
            case NodeKind::Sink:
                if (out != 0)
                    rep.fail("sink vertex " + std::to_string(v) + " has out-degree " + std::to_string(out));
                break;
            case NodeKind::Saddle:
                if (in != 2 || out != 2)
                    rep.fail("saddle vertex " + std::to_string(v) + " has in/out degree " +
                             std::to_string(in) + "/" + std::to_string(out) + ", expected 2/2");
                break;
        }
    }

    if (rep.sources == 0) rep.fail("no source vertex");
    if (rep.sinks == 0) rep.fail("no sink vertex");

    const int residual = rep.sources + rep.sinks - rep.saddles - (2 - 2 * rep.genus);
    if (residual != 0)
        rep.fail("index count U+I-A = " + std::to_string(rep.sources + rep.sinks - rep.saddles) +
                 " does not equal 2-2g = " + std::to_string(2 - 2 * rep.genus));
    return rep;
}

int poincare_hopf_residual(const FieldGraph& fg) {
    return fg.sources() + fg.sinks() - fg.saddles() - (2 - 2 * fg.map.genus());
}

namespace {

// Shared by both skeleton derivations: `vertex_kind` is the kind kept as
// skeleton vertices; each saddle contributes one skeleton edge joining the
// two kept endpoints of its legs on that side.
SkeletonDerivation derive_skeleton(const FieldGraph& fg, NodeKind vertex_kind, SkeletonRole role) {
    const CombinatorialMap& m = fg.map;
    auto corrupt = [](const std::string& why) {
        return Error(Errc::InducedEmbeddingDegenerate, "cannot induce skeleton embedding: " + why);
    };
    if (static_cast<int>(fg.kinds.size()) != m.vertex_count() ||
        static_cast<int>(fg.tail_dart.size()) != m.edge_count())
        throw corrupt("kind/tail tables do not match the map");

    // A saddle dart that leads to a skeleton vertex: for the sink skeleton
    // these are the saddle's outgoing darts, for the source skeleton the
    // incoming ones.
    auto saddle_dart_kept = [&](Dart d) {
        return vertex_kind == NodeKind::Sink ? fg.dart_is_tail(d) : !fg.dart_is_tail(d);
    };

    // Saddles in vertex order become skeleton edges 0,1,...
    std::vector<int> saddle_vertices;
    for (int v = 0; v < m.vertex_count(); ++v)
        if (fg.kinds[v] == NodeKind::Saddle) saddle_vertices.push_back(v);

    const int n_skel = 2 * static_cast<int>(saddle_vertices.size());
    std::vector<Dart> fg_dart_of(n_skel, -1);   // skeleton dart -> replaced fg dart
    std::map<Dart, Dart> skel_of;               // fg dart at skeleton vertex -> skeleton dart
    for (std::size_t j = 0; j < saddle_vertices.size(); ++j) {
        std::vector<Dart> kept;
        for (Dart d : m.vertices()[saddle_vertices[j]])
            if (saddle_dart_kept(d)) kept.push_back(d);
        if (kept.size() != 2) throw corrupt("saddle with " + std::to_string(kept.size()) + " legs");
        std::sort(kept.begin(), kept.end());
        for (int side = 0; side < 2; ++side) {
            Dart at_vertex = m.alpha(kept[side]);
            if (fg.kinds[m.vertex_of(at_vertex)] != vertex_kind)
                throw corrupt("saddle leg ends at a " +
                              std::string(to_string(fg.kinds[m.vertex_of(at_vertex)])));
            Dart nd = static_cast<Dart>(2 * j + side);
            fg_dart_of[nd] = at_vertex;
            skel_of[at_vertex] = nd;
        }
    }

    Perm alpha(n_skel), sigma(n_skel, -1);
    for (int j = 0; j < n_skel / 2; ++j) {
        alpha[2 * j] = 2 * j + 1;
        alpha[2 * j + 1] = 2 * j;
    }
    // Splice: at each kept vertex, the surviving darts keep their cyclic order.
    int kept_vertices = 0;
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (fg.kinds[v] != vertex_kind) continue;
        ++kept_vertices;
        std::vector<Dart> cycle;
        for (Dart d : m.vertices()[v]) {
            auto it = skel_of.find(d);
            if (it != skel_of.end()) cycle.push_back(it->second);
        }
        if (cycle.empty() && n_skel > 0)
            throw corrupt("a kept vertex touches no saddle; it would vanish from the skeleton");
        for (std::size_t i = 0; i < cycle.size(); ++i)
            sigma[cycle[i]] = cycle[(i + 1) % cycle.size()];
    }
    for (Dart d = 0; d < n_skel; ++d)
        if (sigma[d] < 0) throw corrupt("saddle leg not attached to any kept vertex");

    SkeletonDerivation out;
    try {
        out.skeleton.map = CombinatorialMap::build(alpha, sigma, n_skel == 0 ? 1 : 0);
    } catch (const Error& e) {
        throw corrupt(e.what());
    }
    out.skeleton.role = role;
    out.fg_dart_of = std::move(fg_dart_of);

    out.fg_vertex_of.assign(out.skeleton.map.vertex_count(), -1);
    if (n_skel == 0) {
        if (kept_vertices != 1) throw corrupt("no saddles but several kept vertices");
        for (int v = 0; v < m.vertex_count(); ++v)
            if (fg.kinds[v] == vertex_kind) out.fg_vertex_of[0] = v;
    } else {
        // build() keeps our canonical dart numbering, so ids line up directly.
        for (int sv = 0; sv < out.skeleton.map.vertex_count(); ++sv) {
            Dart d0 = out.skeleton.map.vertices()[sv].front();
            out.fg_vertex_of[sv] = m.vertex_of(out.fg_dart_of[d0]);
        }
    }
    return out;
}

}  // namespace

SkeletonDerivation derive_sink_skeleton(const FieldGraph& fg) {
    return derive_skeleton(fg, NodeKind::Sink, SkeletonRole::SinkSkeleton);
}

SkeletonDerivation derive_source_skeleton(const FieldGraph& fg) {
    return derive_skeleton(fg, NodeKind::Source, SkeletonRole::SourceSkeleton);
}

SkeletonMap sink_skeleton(const FieldGraph& fg) { return derive_sink_skeleton(fg).skeleton; }
SkeletonMap source_skeleton(const FieldGraph& fg) { return derive_source_skeleton(fg).skeleton; }

FieldGraph reconstruct_field_graph(const SkeletonMap& s) {
    const CombinatorialMap& S = s.map;
    if (S.vertex_count() == 0)
        throw Error(Errc::NotConnected, "skeleton map has no vertices");
    const bool sink_role = (s.role == SkeletonRole::SinkSkeleton);
    const NodeKind vertex_kind = sink_role ? NodeKind::Sink : NodeKind::Source;
    const NodeKind face_kind = sink_role ? NodeKind::Source : NodeKind::Sink;

    FieldGraph fg;
    if (S.n_darts() == 0) {
        // One vertex, one face: the output is a single directed edge.
        Perm alpha{1, 0}, sigma{0, 1};
        fg.map = CombinatorialMap::build(alpha, sigma);
        fg.kinds = {face_kind, vertex_kind};  // dart 0 end is the face point
        fg.tail_dart = {fg.kinds[0] == NodeKind::Source ? 0 : 1};
        return fg;
    }

    const int ns = S.n_darts();
    // Dart layout of the output, per skeleton dart d (faces lie on the RIGHT
    // of their boundary darts under phi = sigma o alpha):
    //   half-edge of the subdivided skeleton edge:  2d (at midpoint), 2d+1 (at vertex)
    //   midpoint <-> centre of the face right of d: 2ns+2d (at face), 2ns+2d+1 (at midpoint)
    //   corner edge of the sector swept ccw from d to sigma(d), which is a
    //   corner of the face containing sigma(d):     4ns+2d (at face), 4ns+2d+1 (at vertex)
    auto sub_mid = [&](Dart d) { return 2 * d; };
    auto sub_ver = [&](Dart d) { return 2 * d + 1; };
    auto rad_fac = [&](Dart d) { return 2 * ns + 2 * d; };
    auto rad_mid = [&](Dart d) { return 2 * ns + 2 * d + 1; };
    auto cor_fac = [&](Dart d) { return 4 * ns + 2 * d; };
    auto cor_ver = [&](Dart d) { return 4 * ns + 2 * d + 1; };

    const int n = 6 * ns;
    Perm alpha(n), sigma(n, -1);
    for (int d = 0; d < n; d += 2) {
        alpha[d] = d + 1;
        alpha[d + 1] = d;
    }

    // Rotation at each subdivided skeleton vertex: alternate the half-edge in
    // the old dart's slot with the corner edge of the following sector.
    for (const auto& cyc : S.vertices()) {
        std::vector<Dart> rot;
        for (Dart x : cyc) {
            rot.push_back(sub_ver(x));
            rot.push_back(cor_ver(x));
        }
        for (std::size_t i = 0; i < rot.size(); ++i) sigma[rot[i]] = rot[(i + 1) % rot.size()];
    }
    // Rotation at each edge midpoint: each side's radial sits ccw-after the
    // half-edge towards that side's tail vertex.
    for (int e = 0; e < ns / 2; ++e) {
        const Dart d = 2 * e, dp = 2 * e + 1;
        const Dart rot[4] = {sub_mid(d), rad_mid(d), sub_mid(dp), rad_mid(dp)};
        for (int i = 0; i < 4; ++i) sigma[rot[i]] = rot[(i + 1) % 4];
    }
    // Rotation at each face centre: the walk hugs the face clockwise as seen
    // from inside, so the ccw rotation is the reversed walk; the corner after
    // side x in the walk is the sector of alpha(x).
    for (const auto& walk : S.faces()) {
        std::vector<Dart> rot;
        for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
            rot.push_back(cor_fac(S.alpha(*it)));
            rot.push_back(rad_fac(*it));
        }
        for (std::size_t i = 0; i < rot.size(); ++i) sigma[rot[i]] = rot[(i + 1) % rot.size()];
    }

    fg.map = CombinatorialMap::build(alpha, sigma);

    fg.kinds.assign(fg.map.vertex_count(), NodeKind::Saddle);
    for (const auto& cyc : S.vertices())
        fg.kinds[fg.map.vertex_of(sub_ver(cyc.front()))] = vertex_kind;
    for (const auto& walk : S.faces())
        fg.kinds[fg.map.vertex_of(rad_fac(walk.front()))] = face_kind;

    fg.tail_dart.assign(fg.map.edge_count(), -1);
    for (Dart d = 0; d < ns; ++d) {
        // Half-edges run saddle->sink; with sources as skeleton vertices the
        // direction flips.  Face-centre edges start at the source end.
        fg.tail_dart[sub_mid(d) / 2] = sink_role ? sub_mid(d) : sub_ver(d);
        fg.tail_dart[rad_fac(d) / 2] = sink_role ? rad_fac(d) : rad_mid(d);
        fg.tail_dart[cor_fac(d) / 2] = sink_role ? cor_fac(d) : cor_ver(d);
    }
    return fg;
}

SaddledCheck is_saddled_triangulation(const FieldGraph& fg) {
    SaddledCheck res;
    ValidationReport rep = validate_field_graph(fg);
    if (!rep.valid) {
        res.ok = false;
        res.reason = "field graph invalid: " + rep.violations.front();
        return res;
    }
    for (int f = 0; f < fg.map.face_count(); ++f) {
        const auto& walk = fg.map.faces()[f];
        if (walk.size() != 3) {
            res.ok = false;
            res.offending_face = f;
            res.reason = "face has degree " + std::to_string(walk.size());
            return res;
        }
        bool seen[3] = {false, false, false};
        for (Dart d : walk) seen[static_cast<int>(fg.kinds[fg.map.vertex_of(d)])] = true;
        if (!(seen[0] && seen[1] && seen[2])) {
            res.ok = false;
            res.offending_face = f;
            res.reason = "corners are not one source, one sink, one saddle";
            return res;
        }
    }
    return res;
}

std::vector<std::optional<int>> region_of_source(const FieldGraph& fg,
                                                 const SkeletonDerivation& sink_skel) {
    const CombinatorialMap& m = fg.map;
    std::vector<int> skel_of(m.n_darts(), -1);
    for (std::size_t sd = 0; sd < sink_skel.fg_dart_of.size(); ++sd)
        skel_of[sink_skel.fg_dart_of[sd]] = static_cast<int>(sd);

    std::vector<std::optional<int>> region(m.vertex_count());
    for (int u = 0; u < m.vertex_count(); ++u) {
        if (fg.kinds[u] != NodeKind::Source) continue;
        if (fg.saddles() == 0) {
            region[u] = 0;  // the lone conventional face
            continue;
        }
        std::optional<int> found;
        bool consistent = true;
        for (Dart d : m.vertices()[u]) {
            Dart h = m.alpha(d);
            if (fg.kinds[m.vertex_of(h)] != NodeKind::Sink) continue;
            // Walk clockwise from the landing dart to the saddle leg that
            // opens this angular sector of the sink.  The sector swept ccw
            // from skeleton dart x is a corner of the face holding sigma(x).
            Dart y = h;
            int steps = 0;
            const int deg = static_cast<int>(m.vertices()[m.vertex_of(h)].size());
            while (skel_of[y] < 0 && steps++ < deg) y = m.sigma_inv(y);
            if (skel_of[y] < 0) {
                consistent = false;
                break;
            }
            const CombinatorialMap& skel = sink_skel.skeleton.map;
            int face = skel.face_of(skel.sigma(skel_of[y]));
            if (found && *found != face) {
                consistent = false;
                break;
            }
            found = face;
        }
        if (consistent && found) region[u] = found;
    }
    return region;
}

bool duality_check(const FieldGraph& fg) {
    if (!validate_field_graph(fg).valid) return false;
    SkeletonDerivation K, L;
    try {
        K = derive_sink_skeleton(fg);
        L = derive_source_skeleton(fg);
    } catch (const Error&) {
        return false;
    }
    if (K.skeleton.map.face_count() != fg.sources()) return false;
    if (L.skeleton.map.face_count() != fg.sinks()) return false;

    // Which sink-skeleton face holds each source; must be a bijection.
    auto region = region_of_source(fg, K);
    std::vector<int> source_of_face(K.skeleton.map.face_count(), -1);
    for (int u = 0; u < fg.map.vertex_count(); ++u) {
        if (fg.kinds[u] != NodeKind::Source) continue;
        if (!region[u]) return false;
        if (source_of_face[*region[u]] != -1) return false;
        source_of_face[*region[u]] = u;
    }

    // L's vertex ids by the fg source they came from.
    std::vector<int> l_vertex_of_source(fg.map.vertex_count(), -1);
    for (int lv = 0; lv < L.skeleton.map.vertex_count(); ++lv)
        l_vertex_of_source[L.fg_vertex_of[lv]] = lv;

    // With phi as the dual rotation, dual_map carries the opposite
    // orientation (its rotations run clockwise around the face centres), so
    // the source skeleton is reached by an orientation-reversing
    // correspondence: mirror the dual before searching.
    CombinatorialMap D;
    {
        CombinatorialMap Draw = dual_map(K.skeleton.map);
        Perm inv(Draw.n_darts());
        for (Dart d = 0; d < Draw.n_darts(); ++d) inv[Draw.sigma(d)] = d;
        D = CombinatorialMap::build(Draw.alpha_perm(), inv, Draw.isolated_vertices());
    }
    // D's vertices are K's faces, on the same darts with the same ids.
    const int n = D.n_darts();
    if (n != L.skeleton.map.n_darts()) return false;
    if (n == 0) return source_of_face[0] >= 0 && l_vertex_of_source[source_of_face[0]] == 0;

    const CombinatorialMap& Lm = L.skeleton.map;
    for (Dart anchor = 0; anchor < n; ++anchor) {
        std::vector<int> image(n, -1);
        std::vector<Dart> order;
        image[0] = anchor;
        order.push_back(0);
        bool ok = true;
        for (std::size_t qi = 0; qi < order.size() && ok; ++qi) {
            Dart x = order[qi];
            const Dart pairs[2][2] = {{D.sigma(x), Lm.sigma(image[x])},
                                      {D.alpha(x), Lm.alpha(image[x])}};
            for (auto& pr : pairs) {
                if (image[pr[0]] < 0) {
                    image[pr[0]] = pr[1];
                    order.push_back(pr[0]);
                } else if (image[pr[0]] != pr[1]) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;
        DartBijection bij{image};
        if (!bij.conjugates(D, Lm)) continue;
        // The induced vertex action must send each region to its source.
        bool matches = true;
        for (Dart d = 0; d < n && matches; ++d) {
            int dual_vertex = D.vertex_of(d);
            int u = source_of_face[dual_vertex];
            matches = u >= 0 && Lm.vertex_of(image[d]) == l_vertex_of_source[u];
        }
        if (matches) return true;
    }
    return false;
}

FlowCertificate flow_certificate(const FieldGraph& fg) {
    SaddledCheck chk = is_saddled_triangulation(fg);
    if (!chk.ok)
        throw Error(Errc::NotSaddledTriangulation,
                    "not a saddled triangulation: " + chk.reason +
                        (chk.offending_face >= 0 ? " (face " + std::to_string(chk.offending_face) + ")"
                                                 : ""));
    FlowCertificate cert;
    for (int f = 0; f < fg.map.face_count(); ++f) {
        const auto& walk = fg.map.faces()[f];
        FlowCertificate::Triangle t{};
        t.face = f;
        for (Dart d : walk) {
            int v = fg.map.vertex_of(d);
            switch (fg.kinds[v]) {
                case NodeKind::Source: t.source_vertex = v; break;
                case NodeKind::Saddle: t.saddle_vertex = v; break;
                case NodeKind::Sink: t.sink_vertex = v; break;
            }
        }
        for (Dart d : walk) {
            int e = fg.map.edge_of(d);
            NodeKind a = fg.kinds[fg.tail_vertex(e)], b = fg.kinds[fg.head_vertex(e)];
            if (a == NodeKind::Source && b == NodeKind::Saddle) t.source_saddle_edge = e;
            if (a == NodeKind::Saddle && b == NodeKind::Sink) t.saddle_sink_edge = e;
            if (a == NodeKind::Source && b == NodeKind::Sink) t.source_sink_edge = e;
        }
        cert.triangles.push_back(t);
    }
    return cert;
}

namespace {

std::string encode_skeleton(const std::string& map_form, SkeletonRole role,
                            const std::vector<int>& mv, const std::vector<int>& mf) {
    std::ostringstream os;
    os << "S:r=" << (role == SkeletonRole::SinkSkeleton ? "sink" : "source") << ";" << map_form
       << ";mv=";
    for (std::size_t i = 0; i < mv.size(); ++i) os << (i ? "," : "") << mv[i];
    os << ";mf=";
    for (std::size_t i = 0; i < mf.size(); ++i) os << (i ? "," : "") << mf[i];
    return os.str();
}

}  // namespace

SkeletonCanonicalization canonicalize_skeleton(const SkeletonMap& s) {
    const CombinatorialMap& m = s.map;
    const int n = m.n_darts();
    SkeletonCanonicalization out;
    if (n == 0) {
        std::vector<int> mv(s.marked_vertices.begin(), s.marked_vertices.end());
        std::vector<int> mf(s.marked_faces.begin(), s.marked_faces.end());
        out.skeleton = s;
        out.form = encode_skeleton(canonical_form(m), s.role, mv, mf);
        out.vertex_map = {0};
        out.face_map = {0};
        return out;
    }

    std::string best_map;
    std::vector<int> best_mv, best_mf;
    CombinatorialMap best_relabeled;
    std::vector<int> best_tau;
    bool have = false;
    for (Dart anchor = 0; anchor < n; ++anchor) {
        std::vector<int> tau = detail::canonical_relabeling(m, anchor);
        Perm sg(n), al(n);
        for (Dart d = 0; d < n; ++d) {
            sg[tau[d]] = tau[m.sigma(d)];
            al[tau[d]] = tau[m.alpha(d)];
        }
        CombinatorialMap relabeled = CombinatorialMap::build(al, sg);
        std::string map_str = "M:n=" + std::to_string(n) + ",k=0;s=";
        for (int i = 0; i < n; ++i) map_str += (i ? "," : "") + std::to_string(sg[i]);
        map_str += ";a=";
        for (int i = 0; i < n; ++i) map_str += (i ? "," : "") + std::to_string(al[i]);

        std::vector<int> mv, mf;
        for (int v : s.marked_vertices)
            mv.push_back(relabeled.vertex_of(tau[m.vertices()[v].front()]));
        for (int f : s.marked_faces) mf.push_back(relabeled.face_of(tau[m.faces()[f].front()]));
        std::sort(mv.begin(), mv.end());
        std::sort(mf.begin(), mf.end());

        if (!have || std::tie(map_str, mv, mf) < std::tie(best_map, best_mv, best_mf)) {
            best_map = std::move(map_str);
            best_mv = std::move(mv);
            best_mf = std::move(mf);
            best_relabeled = std::move(relabeled);
            best_tau = std::move(tau);
            have = true;
        }
    }

    out.form = encode_skeleton(best_map, s.role, best_mv, best_mf);
    out.skeleton.map = best_relabeled;
    out.skeleton.role = s.role;
    out.skeleton.marked_vertices.insert(best_mv.begin(), best_mv.end());
    out.skeleton.marked_faces.insert(best_mf.begin(), best_mf.end());
    out.vertex_map.resize(m.vertex_count());
    for (int v = 0; v < m.vertex_count(); ++v)
        out.vertex_map[v] = best_relabeled.vertex_of(best_tau[m.vertices()[v].front()]);
    out.face_map.resize(m.face_count());
    for (int f = 0; f < m.face_count(); ++f)
        out.face_map[f] = best_relabeled.face_of(best_tau[m.faces()[f].front()]);
    return out;
}

std::string skeleton_form(const SkeletonMap& s) { return canonicalize_skeleton(s).form; }

SkeletonMap decode_skeleton(const std::string& form) {
    auto fail = [&]() -> Error { return Error(Errc::ParseError, "bad skeleton form: " + form); };
    if (form.rfind("S:r=", 0) != 0) throw fail();
    std::size_t pos = 4;
    SkeletonMap s;
    if (form.compare(pos, 5, "sink;") == 0) {
        s.role = SkeletonRole::SinkSkeleton;
        pos += 5;
    } else if (form.compare(pos, 7, "source;") == 0) {
        s.role = SkeletonRole::SourceSkeleton;
        pos += 7;
    } else {
        throw fail();
    }
    std::size_t mv_pos = form.find(";mv=", pos);
    if (mv_pos == std::string::npos) throw fail();
    s.map = decode_map(form.substr(pos, mv_pos - pos));
    std::size_t mf_pos = form.find(";mf=", mv_pos);
    if (mf_pos == std::string::npos) throw fail();
    auto parse_ids = [&fail](const std::string& text) {
        std::set<int> ids;
        std::size_t p = 0;
        while (p < text.size()) {
            int value = 0;
            auto [q, ec] = std::from_chars(text.data() + p, text.data() + text.size(), value);
            if (ec != std::errc()) throw fail();
            ids.insert(value);
            p = static_cast<std::size_t>(q - text.data());
            if (p < text.size()) {
                if (text[p] != ',') throw fail();
                ++p;
            }
        }
        return ids;
    };
    s.marked_vertices = parse_ids(form.substr(mv_pos + 4, mf_pos - (mv_pos + 4)));
    s.marked_faces = parse_ids(form.substr(mf_pos + 4));
    for (int v : s.marked_vertices)
        if (v < 0 || v >= s.map.vertex_count()) throw fail();
    for (int f : s.marked_faces)
        if (f < 0 || f >= s.map.face_count()) throw fail();
    return s;
}

SkeletonMap canonical_skeleton(const SkeletonMap& s) { return decode_skeleton(skeleton_form(s)); }

}  // namespace flowcob
