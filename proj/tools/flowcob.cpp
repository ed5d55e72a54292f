// flowcob: validate, derive, rewrite and enumerate embedded field graphs.
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "flowcob/io.hpp"

using namespace flowcob;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kDomainInvalid = 1, kMalformed = 2 };

bool color_enabled() {
    const char* env = std::getenv("FLOWCOB_COLOR");
    if (env && std::string(env) == "0") return false;
    return isatty(fileno(stderr));
}

void status_line(bool ok, const std::string& text) {
    if (color_enabled())
        std::cerr << (ok ? "\033[32m" : "\033[31m") << text << "\033[0m\n";
    else
        std::cerr << text << "\n";
}

enum class FileKind { Map, Field, Skeleton, Structure };

FileKind detect(const json& j) {
    if (j.contains("regions")) return FileKind::Structure;
    if (j.contains("kinds")) return FileKind::Field;
    if (j.contains("role") || j.contains("marked_vertices")) return FileKind::Skeleton;
    return FileKind::Map;
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        io::atomic_write(out_path, text);
}

void write_trace(const Trace& tr, const std::string& path) {
    if (path.empty()) return;
    std::string lines;
    for (const TraceEntry& e : tr.entries) lines += io::to_json(e).dump() + "\n";
    io::atomic_write(path, lines);
}

int cmd_validate(const std::string& path) {
    json j = io::load_json(path);
    if (detect(j) == FileKind::Structure) {
        auto p = io::structure_from_json(j);
        auto rep = validate_structure(p);
        json out{{"valid", rep.valid}, {"violations", rep.violations},
                 {"orbits", p.orbits.size()}, {"regions", p.regions.size()},
                 {"surface_genus", p.surface_genus}};
        emit(out, "");
        status_line(rep.valid, rep.valid ? "valid" : "invalid");
        return rep.valid ? kOk : kDomainInvalid;
    }
    if (detect(j) == FileKind::Field) {
        auto fg = io::field_from_json(j);
        auto rep = validate_field_graph(fg);
        json out{{"valid", rep.valid}, {"violations", rep.violations}, {"U", rep.sources},
                 {"I", rep.sinks},    {"A", rep.saddles},              {"genus", rep.genus}};
        emit(out, "");
        status_line(rep.valid, rep.valid ? "valid" : "invalid");
        return rep.valid ? kOk : kDomainInvalid;
    }
    // maps and skeletons validate structurally at parse time
    auto s = detect(j) == FileKind::Skeleton ? io::skeleton_from_json(j)
                                             : SkeletonMap{io::map_from_json(j), {}, {}, {}};
    json out{{"valid", true},
             {"V", s.map.vertex_count()},
             {"E", s.map.edge_count()},
             {"F", s.map.face_count()},
             {"genus", s.map.genus()}};
    emit(out, "");
    status_line(true, "valid");
    return kOk;
}

int cmd_invariants(const std::string& path) {
    json j = io::load_json(path);
    json out;
    switch (detect(j)) {
        case FileKind::Field: {
            auto fg = io::field_from_json(j);
            out = {{"V", fg.map.vertex_count()},
                   {"E", fg.map.edge_count()},
                   {"F", fg.map.face_count()},
                   {"genus", fg.map.genus()},
                   {"U", fg.sources()},
                   {"I", fg.sinks()},
                   {"A", fg.saddles()},
                   {"index_residual", poincare_hopf_residual(fg)},
                   {"saddled_triangulation", is_saddled_triangulation(fg).ok},
                   {"duality", duality_check(fg)}};
            break;
        }
        case FileKind::Structure: {
            auto p = io::structure_from_json(j);
            out = {{"surface_genus", p.surface_genus},
                   {"implied_genus", implied_surface_genus(p)},
                   {"orbits", p.orbits.size()},
                   {"regions", p.regions.size()},
                   {"swallow_candidates", swallow_candidates(p).size()}};
            break;
        }
        case FileKind::Skeleton: {
            auto s = io::skeleton_from_json(j);
            out = {{"V", s.map.vertex_count()}, {"E", s.map.edge_count()},
                   {"F", s.map.face_count()},   {"genus", s.map.genus()},
                   {"reduced", is_reduced(s)},  {"canonical_form", skeleton_form(s)},
                   {"sink_moves", sink_moves(s).size()},
                   {"source_moves", source_moves(s).size()}};
            break;
        }
        case FileKind::Map: {
            auto m = io::map_from_json(j);
            out = {{"V", m.vertex_count()},
                   {"E", m.edge_count()},
                   {"F", m.face_count()},
                   {"genus", m.genus()},
                   {"canonical_form", canonical_form(m)}};
            break;
        }
    }
    emit(out, "");
    return kOk;
}

int cmd_derive(const std::string& path, const std::string& role, const std::string& out_path) {
    auto fg = io::field_from_json(io::load_json(path));
    SkeletonMap s = role == "source" ? source_skeleton(fg) : sink_skeleton(fg);
    emit(io::to_json(s), out_path);
    return kOk;
}

int cmd_reconstruct(const std::string& path, const std::string& out_path) {
    auto s = io::skeleton_from_json(io::load_json(path));
    emit(io::to_json(reconstruct_field_graph(s)), out_path);
    return kOk;
}

int cmd_reduce(const std::string& path, const std::string& trace_path, const std::string& strategy) {
    auto s = io::skeleton_from_json(io::load_json(path));
    Trace tr = reduce(s, strategy == "interleaved" ? ReduceStrategy::Interleaved
                                                   : ReduceStrategy::PhaseOrdered);
    write_trace(tr, trace_path);
    Replay rp = replay(s, tr);
    json out{{"moves", tr.size()},
             {"terminal", skeleton_form(rp.final_state)},
             {"genus", rp.final_state.map.genus()},
             {"reduced", is_reduced(rp.final_state)}};
    emit(out, "");
    return kOk;
}

int cmd_dual(const std::string& path, const std::string& out_path) {
    json j = io::load_json(path);
    if (detect(j) == FileKind::Skeleton) {
        auto s = io::skeleton_from_json(j);
        SkeletonMap d;
        d.map = dual_map(s.map);
        d.role = s.role == SkeletonRole::SinkSkeleton ? SkeletonRole::SourceSkeleton
                                                      : SkeletonRole::SinkSkeleton;
        d.marked_vertices = s.marked_faces;  // faces become vertices and back
        d.marked_faces = s.marked_vertices;
        emit(io::to_json(d), out_path);
    } else {
        emit(io::to_json(dual_map(io::map_from_json(j))), out_path);
    }
    return kOk;
}

int cmd_iso(const std::string& a_path, const std::string& b_path) {
    json ja = io::load_json(a_path), jb = io::load_json(b_path);
    auto load = [](const json& j) {
        return detect(j) == FileKind::Skeleton ? io::skeleton_from_json(j).map
                                               : io::map_from_json(j);
    };
    auto bij = map_isomorphic(load(ja), load(jb));
    json out{{"isomorphic", bij.has_value()}};
    if (bij) out["bijection"] = bij->image;
    emit(out, "");
    status_line(bij.has_value(), bij ? "isomorphic" : "not isomorphic");
    return bij ? kOk : kDomainInvalid;
}

int cmd_census(int genus, int max_edges, int jobs, const std::string& out_path,
               const std::string& counterexample) {
    CensusReport rep = verify_theorems(genus, max_edges, jobs, counterexample);
    emit(io::to_json(rep), out_path);
    return kOk;
}

int cmd_torus_word(const std::string& target) {
    long long a = 0, b = 0, c = 0, d = 0;
    if (std::sscanf(target.c_str(), "%lld,%lld;%lld,%lld", &a, &b, &c, &d) != 4)
        throw Error(Errc::ParseError, "target must look like \"a,b;c,d\"");
    Mat2 m{a, b, c, d};
    TwistWord w = decompose(m);
    json word = json::array();
    for (const TwistLetter& l : w)
        word.push_back(std::string(l.gen == TwistGen::G1 ? "G1" : "G2") +
                       (l.sign > 0 ? "+" : "-"));
    Mat2 check = evaluate(w);
    json out{{"word", word}, {"length", w.size()}, {"verification", check.str()},
             {"matches", check == m}};
    emit(out, "");
    return check == m ? kOk : kDomainInvalid;
}

int cmd_reduce_periodic(const std::string& path, const std::string& trace_path) {
    auto p = io::structure_from_json(io::load_json(path));
    Trace tr = reduce_sphere_full(p);
    write_trace(tr, trace_path);
    int swallows = 0;
    for (const TraceEntry& e : tr.entries)
        if (e.move.kind == MoveKind::Swallow) ++swallows;
    json out{{"moves", tr.size()}, {"swallows", swallows}};
    emit(out, "");
    return kOk;
}

int cmd_dot(const std::string& path, const std::string& out_path) {
    json j = io::load_json(path);
    std::string text;
    switch (detect(j)) {
        case FileKind::Field: text = io::dot(io::field_from_json(j)); break;
        case FileKind::Skeleton: text = io::dot(io::skeleton_from_json(j)); break;
        case FileKind::Map: text = io::dot(io::map_from_json(j)); break;
        case FileKind::Structure:
            throw Error(Errc::ParseError, "dot export works on maps, skeletons and field graphs");
    }
    if (out_path.empty())
        std::cout << text;
    else
        io::atomic_write(out_path, text);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial structure of stable surface flows"};
    app.require_subcommand(1);

    std::string in_path, in_path_b, out_path, trace_path, role = "sink", strategy = "phased",
                target, counterexample = "flowcob_counterexample.json";
    int genus = 0, max_edges = 3, jobs = 1;

    auto* validate = app.add_subcommand("validate", "check a field graph or structure file");
    validate->add_option("file", in_path)->required();

    auto* invariants = app.add_subcommand("invariants", "print counts and invariants");
    invariants->add_option("file", in_path)->required();

    auto* derive = app.add_subcommand("derive", "derive the sink or source skeleton");
    derive->add_option("file", in_path)->required();
    derive->add_option("--role", role)->check(CLI::IsMember({"sink", "source"}));
    derive->add_option("--out", out_path);

    auto* reconstruct = app.add_subcommand("reconstruct", "rebuild the field graph of a skeleton");
    reconstruct->add_option("file", in_path)->required();
    reconstruct->add_option("--out", out_path);

    auto* reduce_cmd = app.add_subcommand("reduce", "greedily reduce a skeleton");
    reduce_cmd->add_option("file", in_path)->required();
    reduce_cmd->add_option("--trace", trace_path);
    reduce_cmd->add_option("--strategy", strategy)->check(CLI::IsMember({"phased", "interleaved"}));

    auto* dual = app.add_subcommand("dual", "dual map (or role-swapped dual skeleton)");
    dual->add_option("file", in_path)->required();
    dual->add_option("--out", out_path);

    auto* iso = app.add_subcommand("iso", "test two maps for isomorphism");
    iso->add_option("a", in_path)->required();
    iso->add_option("b", in_path_b)->required();

    auto* census = app.add_subcommand("census", "enumerate skeletons and verify the theory");
    census->add_option("--genus", genus)->required();
    census->add_option("--max-edges", max_edges)->required();
    census->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    census->add_option("--out", out_path);
    census->add_option("--counterexample", counterexample);

    auto* torus = app.add_subcommand("torus-word", "decompose a marking into twist generators");
    torus->add_option("--target", target)->required();

    auto* redp = app.add_subcommand("reduce-periodic", "fully reduce a sphere structure");
    redp->add_option("file", in_path)->required();
    redp->add_option("--trace", trace_path);

    auto* dotc = app.add_subcommand("dot", "emit a DOT drawing");
    dotc->add_option("file", in_path)->required();
    dotc->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kMalformed;
    }

    try {
        if (validate->parsed()) return cmd_validate(in_path);
        if (invariants->parsed()) return cmd_invariants(in_path);
        if (derive->parsed()) return cmd_derive(in_path, role, out_path);
        if (reconstruct->parsed()) return cmd_reconstruct(in_path, out_path);
        if (reduce_cmd->parsed()) return cmd_reduce(in_path, trace_path, strategy);
        if (dual->parsed()) return cmd_dual(in_path, out_path);
        if (iso->parsed()) return cmd_iso(in_path, in_path_b);
        if (census->parsed()) return cmd_census(genus, max_edges, jobs, out_path, counterexample);
        if (torus->parsed()) return cmd_torus_word(target);
        if (redp->parsed()) return cmd_reduce_periodic(in_path, trace_path);
        if (dotc->parsed()) return cmd_dot(in_path, out_path);
    } catch (const Error& e) {
        json out{{"error", e.what()}};
        std::cout << out.dump(2) << "\n";
        status_line(false, e.what());
        return e.code() == Errc::ParseError ? kMalformed : kDomainInvalid;
    } catch (const std::exception& e) {
        std::cout << json{{"error", e.what()}}.dump(2) << "\n";
        return kMalformed;
    }
    return kMalformed;
}
