#pragma once

#include <string>

#include "json.hpp"

#include "flowcob/census.hpp"
#include "flowcob/periodic.hpp"
#include "flowcob/torus_mcg.hpp"

namespace flowcob::io {

using nlohmann::json;

// Serializers always emit the canonical dart pairing (alpha[2i] = 2i+1);
// loaders accept any fixed-point-free involution and renumber, translating
// vertex/face/edge references along.
json to_json(const CombinatorialMap& m);
json to_json(const FieldGraph& fg);
json to_json(const SkeletonMap& s);
json to_json(const PeriodicStructure& p);
json to_json(const CensusReport& r);
json to_json(const TraceEntry& e);

// All throw Error(ParseError) on schema violations and Error with the
// underlying code on domain violations (e.g. Disconnected).
CombinatorialMap map_from_json(const json& j);
FieldGraph field_from_json(const json& j);
SkeletonMap skeleton_from_json(const json& j);
PeriodicStructure structure_from_json(const json& j);
TraceEntry trace_entry_from_json(const json& j);

// DOT export: directed for field graphs (source=triangle, sink=invtriangle,
// saddle=diamond), undirected for skeletons and plain maps; skeleton vertex
// marks render as doubled borders.
std::string dot(const FieldGraph& fg);
std::string dot(const SkeletonMap& s);
std::string dot(const CombinatorialMap& m);

// Write-to-temp-then-rename; never leaves a partial file.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);
json load_json(const std::string& path);

}  // namespace flowcob::io
