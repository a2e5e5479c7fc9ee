#pragma once

#include <string>

#include "json.hpp"
#include "srp/diagnostics.hpp"
#include "srp/lossnet.hpp"
#include "srp/regime.hpp"

namespace srp {

using Json = nlohmann::json;

// {dim, box: [[lo,hi],...], rho, seed, sites: [[coords..., theta], ...]}
Json to_json(const Environment& env);
Environment environment_from_json(const Json& j);

// Coordinates are written with round-trip precision.
Json to_json(const ContinuumPointSet& pts);
ContinuumPointSet continuum_from_json(const Json& j);

// A point is [[coords...], tag]; a cycle is the array of its points; a gas
// is the sorted array of its cycles.
Json to_json(const PointId& p);
Json to_json(const Cycle& c);
Json to_json(const GasConfig& g);
PointId point_from_json(const Json& j);
Cycle cycle_from_json(const Json& j);
GasConfig gas_from_json(const Json& j);

Json to_json(const SpecTable& t);
Json to_json(const RegimeReport& r);
Json to_json(const CycleStats& s);
Json to_json(const MarkSet& m);

// 64-bit FNV-1a of a string, written as 16 hex digits.
std::string digest_hex(const std::string& text);

Json read_json_file(const std::string& path);

}  // namespace srp
