#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "dot_check.hpp"
#include "fixtures.hpp"
#include "flowcob/io.hpp"

using namespace flowcob;
using namespace fixtures;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "flowcob_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    fs::path out_file = work_dir() / "stdout.txt";
    std::string cmd = std::string(FLOWCOB_BIN) + " " + args + " > " + out_file.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    r.out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return r;
}

std::string write_file(const std::string& name, const json& j) {
    fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << j.dump(2);
    return p.string();
}

std::string write_text(const std::string& name, const std::string& text) {
    fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << text;
    return p.string();
}

}  // namespace

TEST_CASE("validate a good field graph") {
    auto path = write_file("good_field.json", io::to_json(four_vertex_sphere_field()));
    auto r = run("validate " + path);
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["valid"] == true);
    CHECK(j["U"] == 2);
    CHECK(j["I"] == 1);
    CHECK(j["A"] == 1);
    CHECK(j["genus"] == 0);
}

TEST_CASE("validate a broken field graph exits 1 with the violations") {
    auto fg = reduced_sphere_field();
    fg.kinds = {NodeKind::Source, NodeKind::Source};
    auto path = write_file("bad_field.json", io::to_json(fg));
    auto r = run("validate " + path);
    CHECK(r.exit_code == 1);
    json j = json::parse(r.out);
    CHECK(j["valid"] == false);
    CHECK(j["violations"].size() >= 2);
}

TEST_CASE("malformed input exits 2") {
    auto path = write_text("garbage.json", "this is not json");
    CHECK(run("validate " + path).exit_code == 2);
    CHECK(run("invariants " + path).exit_code == 2);
    auto missing_keys = write_file("half_map.json", json{{"n_darts", 2}});
    CHECK(run("invariants " + missing_keys).exit_code == 2);
    CHECK(run("no-such-command").exit_code == 2);
}

TEST_CASE("invariants on each file kind") {
    auto fpath = write_file("inv_field.json", io::to_json(four_vertex_sphere_field()));
    auto r = run("invariants " + fpath);
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["V"] == 4);
    CHECK(j["saddled_triangulation"] == true);
    CHECK(j["duality"] == true);

    SkeletonMap s;
    s.map = two_loops_torus();
    auto spath = write_file("inv_skel.json", io::to_json(s));
    json js = json::parse(run("invariants " + spath).out);
    CHECK(js["genus"] == 1);
    CHECK(js["reduced"] == true);

    auto mpath = write_file("inv_map.json", io::to_json(loop_on_sphere()));
    json jm = json::parse(run("invariants " + mpath).out);
    CHECK(jm["F"] == 2);
}

TEST_CASE("reduce writes a one-line replayable trace") {
    SkeletonMap loop;
    loop.map = loop_on_sphere();
    auto path = write_file("loop_sphere.json", io::to_json(loop));
    fs::path trace = work_dir() / "t.jsonl";
    auto r = run("reduce " + path + " --trace " + trace.string());
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["moves"] == 1);
    CHECK(j["reduced"] == true);

    std::ifstream in(trace);
    std::string line;
    int lines = 0;
    Trace tr;
    while (std::getline(in, line)) {
        ++lines;
        tr.entries.push_back(io::trace_entry_from_json(json::parse(line)));
    }
    CHECK(lines == 1);
    auto rp = replay(loop, tr);
    CHECK(rp.final_state.map.n_darts() == 0);
}

TEST_CASE("derive and reconstruct round trip through files") {
    auto path = write_file("field.json", io::to_json(four_vertex_sphere_field()));
    fs::path skel = work_dir() / "skel.json";
    CHECK(run("derive " + path + " --role sink --out " + skel.string()).exit_code == 0);
    auto s = io::skeleton_from_json(io::load_json(skel.string()));
    CHECK(s.map.edge_count() == 1);

    fs::path rebuilt = work_dir() / "rebuilt.json";
    CHECK(run("reconstruct " + skel.string() + " --out " + rebuilt.string()).exit_code == 0);
    auto fg = io::field_from_json(io::load_json(rebuilt.string()));
    CHECK(validate_field_graph(fg).valid);
    CHECK(map_isomorphic(fg.map, four_vertex_sphere_field().map).has_value());
}

TEST_CASE("dual and iso") {
    SkeletonMap loop;
    loop.map = loop_on_sphere();
    auto loop_path = write_file("loop.json", io::to_json(loop.map));
    fs::path dual_path = work_dir() / "dual.json";
    CHECK(run("dual " + loop_path + " --out " + dual_path.string()).exit_code == 0);

    auto edge_path = write_file("edge.json", io::to_json(single_edge_on_sphere()));
    CHECK(run("iso " + dual_path.string() + " " + edge_path).exit_code == 0);
    CHECK(run("iso " + loop_path + " " + edge_path).exit_code == 1);
}

TEST_CASE("census report") {
    fs::path rep = work_dir() / "census.json";
    auto r = run("census --genus 0 --max-edges 2 --out " + rep.string());
    CHECK(r.exit_code == 0);
    json j = io::load_json(rep.string());
    CHECK(j["total_classes"] == 7);  // 1 + 2 + 4
    CHECK(j["cobordism_classes"] == 1);

    // parallel sweep produces the identical report
    fs::path rep4 = work_dir() / "census4.json";
    CHECK(run("census --genus 0 --max-edges 2 --jobs 4 --out " + rep4.string()).exit_code == 0);
    CHECK(io::load_json(rep4.string()) == j);

    CHECK(run("census --genus 0 --max-edges 9").exit_code == 1);  // budget wall
}

TEST_CASE("torus word") {
    auto r = run("torus-word --target \"0,1;-1,0\"");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["matches"] == true);
    CHECK(j["verification"] == "0,1;-1,0");

    CHECK(run("torus-word --target \"1,0;0,-1\"").exit_code == 1);  // det -1
    CHECK(run("torus-word --target \"nonsense\"").exit_code == 2);
}

TEST_CASE("reduce-periodic") {
    PeriodicStructure p;
    p.orbits = {Orbit{0, Polarity::Attracting}};
    for (int id : {0, 1}) {
        Region r;
        r.id = id;
        r.closed_field.map = CombinatorialMap::build({}, {}, 1);
        r.closed_field.marked_vertices = {0};
        r.marks = {OrbitMark{0, true, 0}};
        p.regions.push_back(r);
    }
    auto path = write_file("structure.json", io::to_json(p));
    CHECK(run("validate " + path).exit_code == 0);
    fs::path trace = work_dir() / "pt.jsonl";
    auto r = run("reduce-periodic " + path + " --trace " + trace.string());
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["swallows"] == 1);

    // drop one side of the orbit: domain-invalid structure
    p.regions.pop_back();
    auto bad = write_file("structure_bad.json", io::to_json(p));
    auto rb = run("validate " + bad);
    CHECK(rb.exit_code == 1);
    CHECK(json::parse(rb.out)["valid"] == false);
}

TEST_CASE("dot emits valid graphs") {
    auto path = write_file("field_dot.json", io::to_json(four_vertex_sphere_field()));
    auto r = run("dot " + path);
    CHECK(r.exit_code == 0);
    CHECK(dotcheck::valid_dot(r.out));

    SkeletonMap s;
    s.map = theta_on_sphere();
    s.marked_vertices = {0};
    auto spath = write_file("skel_dot.json", io::to_json(s));
    auto rs = run("dot " + spath);
    CHECK(rs.exit_code == 0);
    CHECK(dotcheck::valid_dot(rs.out));
}

TEST_CASE("emitted files re-parse to equal values") {
    std::mt19937 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        SkeletonMap s;
        s.map = random_map(rng, 1 + trial % 4);
        auto path = write_file("rt.json", io::to_json(s));
        fs::path out = work_dir() / "rt_dual2.json";
        // dual twice through the CLI must reproduce the file exactly
        CHECK(run("dual " + path + " --out " + out.string()).exit_code == 0);
        CHECK(run("dual " + out.string() + " --out " + out.string()).exit_code == 0);
        CHECK(io::load_json(out.string()) == io::load_json(path));
    }

    // emit -> parse -> emit is byte-stable for derived and rebuilt files
    auto fpath = write_file("stab_field.json", io::to_json(four_vertex_sphere_field()));
    fs::path a = work_dir() / "stab_a.json", b = work_dir() / "stab_b.json";
    CHECK(run("derive " + fpath + " --role source --out " + a.string()).exit_code == 0);
    auto reparsed = io::skeleton_from_json(io::load_json(a.string()));
    io::atomic_write(b.string(), io::to_json(reparsed).dump(2) + "\n");
    CHECK(io::read_file(a.string()) == io::read_file(b.string()));
}

TEST_CASE("interleaved strategy through the CLI") {
    SkeletonMap s;
    s.map = theta_on_sphere();
    auto path = write_file("theta.json", io::to_json(s));
    auto r = run("reduce " + path + " --strategy interleaved");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["moves"] == 3);
    CHECK(j["reduced"] == true);
}
