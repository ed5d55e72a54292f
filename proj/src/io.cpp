#include "flowcob/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace flowcob::io {

namespace {

Error parse_error(const std::string& why) { return Error(Errc::ParseError, why); }

Perm perm_from_json(const json& j, const char* key, int n) {
    if (!j.contains(key) || !j[key].is_array()) throw parse_error(std::string(key) + " missing");
    Perm p;
    for (const auto& v : j[key]) {
        if (!v.is_number_integer()) throw parse_error(std::string(key) + " must hold integers");
        p.push_back(v.get<int>());
    }
    if (static_cast<int>(p.size()) != n)
        throw parse_error(std::string(key) + " has wrong length");
    return p;
}

// The same pair renumbering build() applies, exposed so references written
// against the file labeling can follow the darts.
std::vector<int> pair_renumbering(const Perm& alpha) {
    const int n = static_cast<int>(alpha.size());
    std::vector<int> relab(n, -1);
    int next = 0;
    for (int d = 0; d < n; ++d) {
        if (relab[d] >= 0) continue;
        if (alpha[d] < 0 || alpha[d] >= n || alpha[d] == d) throw parse_error("alpha is not a pairing");
        relab[d] = next++;
        relab[alpha[d]] = next++;
    }
    return relab;
}

// Orbits of an arbitrary permutation in the file labeling, sorted by least
// element: the order in which per-vertex / per-face arrays are written.
std::vector<std::vector<int>> file_orbits(const Perm& p) {
    std::vector<int> id;
    std::vector<std::vector<int>> orbits;
    id.assign(p.size(), -1);
    for (int s = 0; s < static_cast<int>(p.size()); ++s) {
        if (id[s] >= 0) continue;
        std::vector<int> cyc;
        int x = s;
        while (id[x] < 0) {
            id[x] = static_cast<int>(orbits.size());
            cyc.push_back(x);
            x = p[x];
            if (x < 0 || x >= static_cast<int>(p.size())) throw parse_error("not a permutation");
        }
        orbits.push_back(std::move(cyc));
    }
    return orbits;
}

struct LoadedMap {
    CombinatorialMap map;
    std::vector<int> relab;             // file dart -> internal dart
    std::vector<std::vector<int>> file_vertices;
    std::vector<std::vector<int>> file_faces;
};

LoadedMap loaded_map_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("map must be a JSON object");
    if (!j.contains("n_darts") || !j["n_darts"].is_number_integer())
        throw parse_error("n_darts missing");
    const int n = j["n_darts"].get<int>();
    if (n < 0) throw parse_error("n_darts must be nonnegative");
    const int isolated = j.value("isolated_vertices", n == 0 ? 1 : 0);

    LoadedMap out;
    Perm alpha = perm_from_json(j, "alpha", n);
    Perm sigma = perm_from_json(j, "sigma", n);
    try {
        out.map = CombinatorialMap::build(alpha, sigma, isolated);
    } catch (const Error& e) {
        if (e.code() == Errc::SizeMismatch || e.code() == Errc::NotInvolution ||
            e.code() == Errc::FixedPointInAlpha)
            throw parse_error(e.what());
        throw;  // Disconnected stays a domain error
    }
    out.relab = pair_renumbering(alpha);
    out.file_vertices = file_orbits(sigma);
    Perm phi(n);
    for (int d = 0; d < n; ++d) phi[d] = sigma[alpha[d]];
    out.file_faces = file_orbits(phi);
    return out;
}

NodeKind kind_from_string(const std::string& s) {
    if (s == "source") return NodeKind::Source;
    if (s == "sink") return NodeKind::Sink;
    if (s == "saddle") return NodeKind::Saddle;
    throw parse_error("unknown vertex kind '" + s + "'");
}

}  // namespace

json to_json(const CombinatorialMap& m) {
    json j;
    j["n_darts"] = m.n_darts();
    j["isolated_vertices"] = m.isolated_vertices();
    j["alpha"] = m.alpha_perm();
    j["sigma"] = m.sigma_perm();
    return j;
}

CombinatorialMap map_from_json(const json& j) { return loaded_map_from_json(j).map; }

json to_json(const FieldGraph& fg) {
    json j = to_json(fg.map);
    json kinds = json::array();
    for (NodeKind k : fg.kinds) kinds.push_back(to_string(k));
    j["kinds"] = kinds;
    j["tail"] = fg.tail_dart;
    return j;
}

FieldGraph field_from_json(const json& j) {
    LoadedMap lm = loaded_map_from_json(j);
    FieldGraph fg;
    fg.map = lm.map;

    if (!j.contains("kinds") || !j["kinds"].is_array()) throw parse_error("kinds missing");
    if (static_cast<int>(j["kinds"].size()) != fg.map.vertex_count())
        throw parse_error("kinds must list one kind per vertex");
    fg.kinds.assign(fg.map.vertex_count(), NodeKind::Source);
    for (std::size_t k = 0; k < lm.file_vertices.size(); ++k) {
        if (!j["kinds"][k].is_string()) throw parse_error("kinds must hold strings");
        int internal = fg.map.vertex_of(lm.relab[lm.file_vertices[k].front()]);
        fg.kinds[internal] = kind_from_string(j["kinds"][k].get<std::string>());
    }
    if (lm.file_vertices.empty() && fg.map.vertex_count() == 1) {
        if (!j["kinds"][0].is_string()) throw parse_error("kinds must hold strings");
        fg.kinds[0] = kind_from_string(j["kinds"][0].get<std::string>());
    }

    if (!j.contains("tail") || !j["tail"].is_array()) throw parse_error("tail missing");
    if (static_cast<int>(j["tail"].size()) != fg.map.edge_count())
        throw parse_error("tail must list one dart per edge");
    fg.tail_dart.assign(fg.map.edge_count(), -1);
    for (const auto& v : j["tail"]) {
        if (!v.is_number_integer()) throw parse_error("tail must hold darts");
        int t = v.get<int>();
        if (t < 0 || t >= fg.map.n_darts()) throw parse_error("tail dart out of range");
        int internal = lm.relab[t];
        if (fg.tail_dart[internal / 2] != -1) throw parse_error("two tails on one edge");
        fg.tail_dart[internal / 2] = internal;
    }
    return fg;
}

json to_json(const SkeletonMap& s) {
    json j = to_json(s.map);
    j["role"] = s.role == SkeletonRole::SinkSkeleton ? "sink" : "source";
    j["marked_vertices"] = s.marked_vertices;
    j["marked_faces"] = s.marked_faces;
    return j;
}

SkeletonMap skeleton_from_json(const json& j) {
    LoadedMap lm = loaded_map_from_json(j);
    SkeletonMap s;
    s.map = lm.map;
    const std::string role = j.value("role", "sink");
    if (role == "sink")
        s.role = SkeletonRole::SinkSkeleton;
    else if (role == "source")
        s.role = SkeletonRole::SourceSkeleton;
    else
        throw parse_error("unknown skeleton role '" + role + "'");

    auto mark_ids = [&](const char* key, const std::vector<std::vector<int>>& orbits, bool vertex) {
        std::set<int> out;
        if (!j.contains(key)) return out;
        if (!j[key].is_array()) throw parse_error(std::string(key) + " must be an array");
        for (const auto& v : j[key]) {
            if (!v.is_number_integer()) throw parse_error(std::string(key) + " must hold ids");
            int id = v.get<int>();
            int limit = vertex ? s.map.vertex_count() : s.map.face_count();
            if (id < 0 || id >= limit) throw parse_error(std::string(key) + " id out of range");
            if (orbits.empty()) {
                out.insert(id);  // dartless skeleton: ids pass through
            } else {
                int internal = vertex ? s.map.vertex_of(lm.relab[orbits[id].front()])
                                      : s.map.face_of(lm.relab[orbits[id].front()]);
                out.insert(internal);
            }
        }
        return out;
    };
    s.marked_vertices = mark_ids("marked_vertices", lm.file_vertices, true);
    s.marked_faces = mark_ids("marked_faces", lm.file_faces, false);
    return s;
}

json to_json(const PeriodicStructure& p) {
    json j;
    j["surface_genus"] = p.surface_genus;
    json orbits = json::array();
    for (const Orbit& o : p.orbits)
        orbits.push_back({{"id", o.id}, {"polarity", to_string(o.polarity)}});
    j["orbits"] = orbits;
    json regions = json::array();
    for (const Region& r : p.regions) {
        json jr;
        jr["id"] = r.id;
        jr["genus"] = r.genus;
        jr["closed_field"] = to_json(r.closed_field);
        json marks = json::object();
        for (const OrbitMark& m : r.marks) {
            std::string text = (m.on_vertex ? "vertex " : "face ") + std::to_string(m.index);
            std::string key = std::to_string(m.orbit);
            if (!marks.contains(key)) {
                marks[key] = text;
            } else if (marks[key].is_string()) {
                marks[key] = json::array({marks[key], text});
            } else {
                marks[key].push_back(text);
            }
        }
        jr["orbit_marks"] = marks;
        regions.push_back(jr);
    }
    j["regions"] = regions;
    return j;
}

PeriodicStructure structure_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("structure must be a JSON object");
    PeriodicStructure p;
    p.surface_genus = j.value("surface_genus", 0);
    if (!j.contains("orbits") || !j["orbits"].is_array()) throw parse_error("orbits missing");
    for (const auto& jo : j["orbits"]) {
        Orbit o;
        o.id = jo.value("id", -1);
        std::string pol = jo.value("polarity", "");
        if (pol == "attracting")
            o.polarity = Polarity::Attracting;
        else if (pol == "repelling")
            o.polarity = Polarity::Repelling;
        else
            throw parse_error("orbit polarity must be attracting or repelling");
        p.orbits.push_back(o);
    }
    if (!j.contains("regions") || !j["regions"].is_array()) throw parse_error("regions missing");
    for (const auto& jr : j["regions"]) {
        Region r;
        r.id = jr.value("id", -1);
        r.genus = jr.value("genus", 0);
        if (!jr.contains("closed_field")) throw parse_error("region is missing closed_field");
        r.closed_field = skeleton_from_json(jr["closed_field"]);

        auto parse_mark = [&](int orbit, const json& val) {
            if (!val.is_string()) throw parse_error("orbit mark must be 'vertex k' or 'face k'");
            std::string text = val.get<std::string>();
            OrbitMark m;
            m.orbit = orbit;
            std::size_t skip = 0;
            if (text.rfind("vertex ", 0) == 0) {
                m.on_vertex = true;
                skip = 7;
            } else if (text.rfind("face ", 0) == 0) {
                m.on_vertex = false;
                skip = 5;
            } else {
                throw parse_error("orbit mark must be 'vertex k' or 'face k'");
            }
            try {
                m.index = std::stoi(text.substr(skip));
            } catch (const std::exception&) {
                throw parse_error("orbit mark index is not a number: '" + text + "'");
            }
            r.marks.push_back(m);
        };
        if (jr.contains("orbit_marks")) {
            if (!jr["orbit_marks"].is_object()) throw parse_error("orbit_marks must be an object");
            for (const auto& [key, val] : jr["orbit_marks"].items()) {
                int orbit = 0;
                try {
                    orbit = std::stoi(key);
                } catch (...) {
                    throw parse_error("orbit_marks keys must be orbit ids");
                }
                if (val.is_array())
                    for (const auto& item : val) parse_mark(orbit, item);
                else
                    parse_mark(orbit, val);
            }
        }
        // convenience: derive the skeleton's marked sets when absent
        if (r.closed_field.marked_vertices.empty() && r.closed_field.marked_faces.empty()) {
            for (const OrbitMark& m : r.marks) {
                if (m.on_vertex)
                    r.closed_field.marked_vertices.insert(m.index);
                else
                    r.closed_field.marked_faces.insert(m.index);
            }
        }
        p.regions.push_back(std::move(r));
    }
    std::sort(p.regions.begin(), p.regions.end(),
              [](const Region& a, const Region& b) { return a.id < b.id; });
    std::sort(p.orbits.begin(), p.orbits.end(),
              [](const Orbit& a, const Orbit& b) { return a.id < b.id; });
    return p;
}

json to_json(const CensusReport& r) {
    json j;
    j["genus"] = r.genus;
    j["max_edges"] = r.max_edges;
    j["class_counting"] = "map isomorphism (surface homeomorphism, coarser than isotopy for genus >= 1)";
    json per = json::array();
    for (const auto& pe : r.per_edge) {
        per.push_back({{"edges", pe.edges},
                       {"isomorphism_classes", pe.n_classes},
                       {"cobordism_classes", pe.n_cobordism_classes},
                       {"reduction_failures", pe.reduction_failures},
                       {"index_relation_ok", pe.ph_ok},
                       {"one_source_per_region_ok", pe.one_source_per_region_ok},
                       {"duality_ok", pe.duality_ok},
                       {"roundtrip_ok", pe.roundtrip_ok},
                       {"triangulation_ok", pe.triangulation_ok}});
    }
    j["per_edge"] = per;
    j["total_classes"] = r.total_classes();
    j["cobordism_classes"] = r.cobordism_classes();
    j["terminal_forms"] = r.terminal_forms;
    return j;
}

json to_json(const TraceEntry& e) {
    json j;
    j["op"] = to_string(e.move.kind);
    if (e.move.inverse) j["inverse"] = true;
    if (e.move.edge >= 0) j["edge"] = e.move.edge;
    if (e.move.orbit >= 0) j["orbit"] = e.move.orbit;
    if (e.move.region >= 0) j["region"] = e.move.region;
    if (e.move.direction != 0) j["direction"] = e.move.direction;
    j["pre"] = e.pre;
    j["post"] = e.post;
    return j;
}

TraceEntry trace_entry_from_json(const json& j) {
    TraceEntry e;
    std::string op = j.value("op", "");
    if (op == "sink_merge")
        e.move.kind = MoveKind::SinkMerge;
    else if (op == "source_merge")
        e.move.kind = MoveKind::SourceMerge;
    else if (op == "swallow")
        e.move.kind = MoveKind::Swallow;
    else if (op == "twist")
        e.move.kind = MoveKind::TwistMacro;
    else
        throw parse_error("unknown trace op '" + op + "'");
    e.move.inverse = j.value("inverse", false);
    e.move.edge = j.value("edge", -1);
    e.move.orbit = j.value("orbit", -1);
    e.move.region = j.value("region", -1);
    e.move.direction = j.value("direction", 0);
    e.pre = j.value("pre", "");
    e.post = j.value("post", "");
    return e;
}

namespace {

const char* shape_of(NodeKind k) {
    switch (k) {
        case NodeKind::Source: return "triangle";
        case NodeKind::Sink: return "invtriangle";
        case NodeKind::Saddle: return "diamond";
    }
    return "circle";
}

}  // namespace

std::string dot(const FieldGraph& fg) {
    std::ostringstream os;
    os << "digraph field_graph {\n";
    for (int v = 0; v < fg.map.vertex_count(); ++v)
        os << "  v" << v << " [shape=" << shape_of(fg.kinds[v]) << "];\n";
    for (int e = 0; e < fg.map.edge_count(); ++e)
        os << "  v" << fg.tail_vertex(e) << " -> v" << fg.head_vertex(e) << ";\n";
    os << "}\n";
    return os.str();
}

std::string dot(const SkeletonMap& s) {
    std::ostringstream os;
    os << "graph skeleton {\n";
    if (!s.marked_faces.empty()) {
        os << "  label=\"marked faces:";
        for (int f : s.marked_faces) os << " " << f;
        os << "\";\n";
    }
    for (int v = 0; v < s.map.vertex_count(); ++v) {
        os << "  v" << v;
        if (s.marked_vertices.count(v)) os << " [peripheries=2]";
        os << ";\n";
    }
    for (int e = 0; e < s.map.edge_count(); ++e)
        os << "  v" << s.map.vertex_of(2 * e) << " -- v" << s.map.vertex_of(2 * e + 1) << ";\n";
    os << "}\n";
    return os.str();
}

std::string dot(const CombinatorialMap& m) {
    std::ostringstream os;
    os << "graph map {\n";
    for (int v = 0; v < m.vertex_count(); ++v) os << "  v" << v << ";\n";
    for (int e = 0; e < m.edge_count(); ++e)
        os << "  v" << m.vertex_of(2 * e) << " -- v" << m.vertex_of(2 * e + 1) << ";\n";
    os << "}\n";
    return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::ParseError, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error(Errc::ParseError, "short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json load_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, path + ": " + e.what());
    }
}

}  // namespace flowcob::io
