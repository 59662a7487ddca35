#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oklab/toric.hpp"

namespace oklab::oracle {

// Explicit global section of m D on a toric variety: a finite sum of torus
// characters with nonzero rational coefficients, each exponent satisfying
// the inequalities of P_{mD}.
struct Section {
  long long level = 1;
  std::vector<std::pair<std::vector<long long>, Rational>> terms;
};

// Validating factory; throws on exponents outside P_{mD} or zero data.
Section make_section(const toric::ToricVariety& x, const toric::DivisorQ& d, long long level,
                     std::vector<std::pair<std::vector<long long>, Rational>> terms);

// Product of sections (term convolution); levels add.
Section multiply(const Section& a, const Section& b);

struct ValuationVector {
  std::vector<Rational> nu;  // already divided by the level
  long long level = 1;
};

// Flag valuation along an invariant flag: the order of vanishing along
// each successive invariant divisor is the minimum of the affine forms
// <u, v_i> + m a_i over the terms surviving the previous steps.
ValuationVector nu_invariant(const toric::ToricVariety& x, const toric::DivisorQ& d,
                             const Section& s, const toric::InvariantFlag& flag);

// Flag valuation for (C, x) on a toric surface, C invariant and x the torus
// point of C with coordinate x0 != 0: after the first minimum the surviving
// terms restrict to a one-variable Laurent polynomial on C, and the second
// entry is the multiplicity of its root at x0.
ValuationVector nu_general_surface(const toric::ToricVariety& x, const toric::DivisorQ& d,
                                   const Section& s, int curve_ray, const Rational& x0);

// Either an invariant flag or a general-point surface flag (curve ray + x0
// drawn from the sampler seed when absent).
struct OracleFlag {
  bool general = false;
  toric::InvariantFlag invariant;
  int curve_ray = -1;
  std::optional<Rational> x0;
};

struct SampleConfig {
  std::vector<int> degrees = {1, 2, 4, 8};
  int samples = 64;
  std::uint64_t seed = 12345;
  int pool = 3;  // coefficients drawn from {-pool..pool} \ {0}
};

struct SampledHull {
  int degree;
  Polytope hull;  // inner approximation at this degree
  int points;     // number of valuation vectors that went in
};

// Seeded random sections over random supports in P_{mD}, always including
// every pure monomial; the hulls of their valuation vectors (divided by m)
// form inner approximations of the Okounkov body.
std::vector<SampledHull> sample_body(const toric::ToricVariety& x, const toric::DivisorQ& d,
                                     const OracleFlag& flag, const SampleConfig& cfg);

struct DegreeReport {
  int degree = 0;
  bool contained = true;
  std::optional<QVector> violation;  // a sampled valuation outside the target
  Rational ratio;                    // vol(hull_m) / vol(target)
};

struct ConvergenceReport {
  std::vector<DegreeReport> per_degree;
  bool contained_all = true;
  bool monotone = true;  // ratios nondecreasing with the degree
  Rational final_ratio;
};

// Exact containment of every sampled hull in the target plus volume ratios.
// A containment failure refutes the closed form the target came from; the
// caller decides whether to raise.
ConvergenceReport convergence_report(const std::vector<SampledHull>& hulls,
                                     const Polytope& target);

}  // namespace oklab::oracle
