#pragma once

#include <json.hpp>

#include "oklab/harness.hpp"
#include "oklab/oracle.hpp"
#include "oklab/surface.hpp"
#include "oklab/toric.hpp"

namespace oklab::io {

using json = nlohmann::ordered_json;

// Rationals serialize as "p/q" ("p" when q = 1); integers are accepted on
// input.  All parsers throw SchemaError on malformed data.

json to_json(const Rational& r);
Rational rational_from_json(const json& j);

json to_json(const QVector& v);
QVector qvector_from_json(const json& j);

json to_json(const Polytope& p);
Polytope polytope_from_json(const json& j);

json to_json(const toric::ToricVariety& x);
toric::ToricVariety toric_from_json(const json& j);

json to_json(const toric::DivisorQ& d);
toric::DivisorQ toric_divisor_from_json(const json& j);

json to_json(const toric::InvariantFlag& f);
toric::InvariantFlag toric_flag_from_json(const json& j);

json to_json(const surface::LatticeSurface& s);
surface::LatticeSurface surface_from_json(const json& j);

json surf_divisor_to_json(const surface::SurfDivisor& d);
surface::SurfDivisor surf_divisor_from_json(const json& j);

json to_json(const surface::SurfFlag& f);
surface::SurfFlag surf_flag_from_json(const json& j);

json to_json(const oracle::SampleConfig& cfg);
oracle::SampleConfig sample_config_from_json(const json& j);

json to_json(const oracle::ConvergenceReport& rep);

std::string body_kind_name(BodyKind k);
BodyKind body_kind_from_name(const std::string& name);

json to_json(const harness::Instance& inst);
harness::Instance instance_from_json(const json& j);

json to_json(const harness::InstancePair& pair);
harness::InstancePair instance_pair_from_json(const json& j);

json to_json(const harness::CheckReport& rep);
json to_json(const harness::SuiteSummary& sum);

// Fixed-width human-readable table of the suite reports.
std::string summary_table(const harness::SuiteSummary& sum);

// Loads every *.json file of a directory into instances and pairs.
void load_library_dir(const std::string& dir, std::vector<harness::Instance>* instances,
                      std::vector<harness::InstancePair>* pairs);

}  // namespace oklab::io
