#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oklab/oracle.hpp"
#include "oklab/surface.hpp"
#include "oklab/toric.hpp"

namespace oklab::harness {

// Oracle run attached to an instance: flag, sampling configuration and the
// recorded convergence baseline.
struct OracleSpec {
  oracle::OracleFlag flag;
  oracle::SampleConfig cfg;
  Rational min_final_ratio;
};

// Expected simplex shape for instances exercising the rational-simplex
// statements.
struct SimplexSpec {
  std::string flag_curve;
  BodyKind kind = BodyKind::Big;
  std::vector<QVector> expected_vertices;
};

struct ToricData {
  toric::ToricVariety variety;
  toric::DivisorQ divisor;
  std::vector<toric::InvariantFlag> flags;
  std::optional<toric::DivisorQ> ample;
  std::optional<toric::DivisorQ> second_ample;
};

struct SurfaceData {
  surface::LatticeSurface surf;
  surface::SurfDivisor divisor;
  std::vector<surface::SurfFlag> flags;
  std::optional<surface::SurfDivisor> ample;
  std::optional<surface::SurfDivisor> second_ample;
};

struct Expected {
  bool pseudoeffective = false;
  bool big = false;
  int kappa = toric::kKappaNone;
  int kappa_nu = toric::kKappaNone;
  // Per-flag positive-volume-subvariety verdicts for the converse criteria
  // checks (surface instances; aligned with the flag list when present).
  std::vector<bool> flag_curve_is_pvs;
  // Flags carrying the constructed Nakayama / positive volume subvariety;
  // the volume identities are asserted only on these.  Empty means all.
  std::vector<bool> flag_designated;
};

struct Instance {
  std::string id;
  std::string note;
  std::variant<ToricData, SurfaceData> data;
  Expected expected;
  std::optional<OracleSpec> oracle_spec;
  std::optional<SimplexSpec> simplex_spec;

  bool is_toric() const { return std::holds_alternative<ToricData>(data); }
  const ToricData& toric_data() const { return std::get<ToricData>(data); }
  const SurfaceData& surface_data() const { return std::get<SurfaceData>(data); }
};

// Curated blowup / strict-transform pair for the birational invariance check.
struct InstancePair {
  std::string id;
  Instance first, second;
  bool gated = false;        // flag meets the modified locus; skip with reason
  std::string gate_reason;
};

struct CheckReport {
  std::string check;
  std::string instance;
  bool pass = false;
  bool gated = false;
  std::string detail;                   // failure witness or gate reason
  std::vector<int> body_vertex_counts;  // every body this check produced
};

CheckReport check_slicing(const Instance& inst, int k);
CheckReport check_dim_vol(const Instance& inst);
CheckReport check_criteria(const Instance& inst);
CheckReport check_positive_part(const Instance& inst);
CheckReport check_zariski(const Instance& inst, std::uint64_t seed = 2027);
CheckReport check_simplex(const Instance& inst);
CheckReport check_limiting_limit(const Instance& inst);
CheckReport check_birational(const InstancePair& pair);
CheckReport check_oracle(const Instance& inst);

// The curated instance library: six toric varieties, three lattice-surface
// models, and the special divisors the checks are calibrated against.
std::vector<Instance> builtin_library();
std::vector<InstancePair> builtin_birational_pairs();

// Instance-library schema validation: varieties validate and expected tags
// are self-consistent.  Throws on violations.
void validate_instance(const Instance& inst);

struct SuiteSummary {
  std::vector<CheckReport> reports;
  int passed = 0;
  int failed = 0;
  int gated = 0;
  long long bodies = 0;           // rational polytopes produced by the checks
  long long random_divisors = 0;  // randomized decompositions exercised
};

// Runs every applicable check over the library plus a seeded batch of
// randomized Zariski decompositions across the surface models.
SuiteSummary run_suite(const std::vector<Instance>& instances,
                       const std::vector<InstancePair>& pairs, std::uint64_t seed = 12345,
                       int random_batch = 210);

}  // namespace oklab::harness
