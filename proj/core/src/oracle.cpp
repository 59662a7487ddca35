#include "oklab/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "oklab/errors.hpp"
#include "oklab/rng.hpp"

namespace oklab::oracle {

namespace {

Rational form_value(const toric::ToricVariety& x, const toric::DivisorQ& d, long long level,
                    int ray, const std::vector<long long>& u) {
  Rational v = Rational(level) * d.coeffs[static_cast<std::size_t>(ray)];
  for (int c = 0; c < x.n; ++c)
    v += Rational(x.rays[static_cast<std::size_t>(ray)][static_cast<std::size_t>(c)]) *
         Rational(u[static_cast<std::size_t>(c)]);
  return v;
}

}  // namespace

Section make_section(const toric::ToricVariety& x, const toric::DivisorQ& d, long long level,
                     std::vector<std::pair<std::vector<long long>, Rational>> terms) {
  if (level < 1) throw GeomError("section level must be positive");
  if (terms.empty()) throw GeomError("section needs at least one term");
  for (const auto& [u, c] : terms) {
    if (static_cast<int>(u.size()) != x.n) throw DimensionMismatch("section exponent dimension");
    if (c.is_zero()) throw GeomError("section with zero coefficient");
    for (int i = 0; i < x.num_rays(); ++i)
      if (form_value(x, d, level, i, u).sgn() < 0)
        throw GeomError("section exponent outside P_{mD}");
  }
  std::sort(terms.begin(), terms.end());
  return Section{level, std::move(terms)};
}

Section multiply(const Section& a, const Section& b) {
  std::map<std::vector<long long>, Rational> conv;
  for (const auto& [u, cu] : a.terms)
    for (const auto& [v, cv] : b.terms) {
      std::vector<long long> w(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] + v[i];
      conv[w] += cu * cv;
    }
  Section out;
  out.level = a.level + b.level;
  for (auto& [u, c] : conv)
    if (!c.is_zero()) out.terms.push_back({u, c});
  if (out.terms.empty()) throw GeomError("product of sections vanished");
  return out;
}

ValuationVector nu_invariant(const toric::ToricVariety& x, const toric::DivisorQ& d,
                             const Section& s, const toric::InvariantFlag& flag) {
  if (static_cast<int>(flag.rays_in_order.size()) != x.n)
    throw GeomError("flag must order n rays");
  std::vector<std::vector<long long>> alive;
  alive.reserve(s.terms.size());
  for (const auto& [u, c] : s.terms) alive.push_back(u);

  ValuationVector out;
  out.level = s.level;
  for (int ray : flag.rays_in_order) {
    Rational best;
    bool first = true;
    for (const auto& u : alive) {
      const Rational w = form_value(x, d, s.level, ray, u);
      if (first || w < best) {
        best = w;
        first = false;
      }
    }
    std::vector<std::vector<long long>> next;
    for (const auto& u : alive)
      if (form_value(x, d, s.level, ray, u) == best) next.push_back(u);
    alive = std::move(next);
    out.nu.push_back(best / Rational(s.level));
  }
  return out;
}

ValuationVector nu_general_surface(const toric::ToricVariety& x, const toric::DivisorQ& d,
                                   const Section& s, int curve_ray, const Rational& x0) {
  if (x.n != 2) throw HypothesisError("nu_general_surface: toric surfaces only");
  if (curve_ray < 0 || curve_ray >= x.num_rays())
    throw DimensionMismatch("nu_general_surface: bad ray index");
  if (x0.is_zero()) throw GeomError("nu_general_surface: x0 must be a torus coordinate");

  Rational nu1;
  bool first = true;
  for (const auto& [u, c] : s.terms) {
    const Rational w = form_value(x, d, s.level, curve_ray, u);
    if (first || w < nu1) {
      nu1 = w;
      first = false;
    }
  }

  // Restriction to the curve: surviving exponents differ by multiples of
  // the primitive direction of the wall, giving a polynomial in one
  // variable whose root multiplicity at x0 is the second valuation entry.
  const auto& v = x.rays[static_cast<std::size_t>(curve_ray)];
  std::vector<long long> g = {-v[1], v[0]};
  const long long gc = std::gcd(g[0] < 0 ? -g[0] : g[0], g[1] < 0 ? -g[1] : g[1]);
  g[0] /= gc;
  g[1] /= gc;
  if (g[0] < 0 || (g[0] == 0 && g[1] < 0)) {
    g[0] = -g[0];
    g[1] = -g[1];
  }

  std::vector<std::pair<long long, Rational>> poly;  // exponent along g -> coeff
  std::optional<std::vector<long long>> base;
  for (const auto& [u, c] : s.terms) {
    if (form_value(x, d, s.level, curve_ray, u) != nu1) continue;
    if (!base) base = u;
    const long long dx = u[0] - (*base)[0], dy = u[1] - (*base)[1];
    long long k;
    if (g[0] != 0) k = dx / g[0];
    else k = dy / g[1];
    if (k * g[0] != dx || k * g[1] != dy)
      throw GeomError("nu_general_surface: surviving terms not collinear");
    poly.push_back({k, c});
  }
  long long kmin = poly[0].first;
  for (const auto& [k, c] : poly) kmin = std::min(kmin, k);
  std::map<long long, Rational> coeffs;
  for (const auto& [k, c] : poly) coeffs[k - kmin] += c;
  long long deg = 0;
  for (const auto& [k, c] : coeffs) deg = std::max(deg, k);
  std::vector<Rational> p(static_cast<std::size_t>(deg) + 1);
  for (const auto& [k, c] : coeffs) p[static_cast<std::size_t>(k)] = c;

  // Multiplicity of the root x0 by repeated synthetic division.
  long long mult = 0;
  for (;;) {
    Rational value;
    for (std::size_t i = p.size(); i-- > 0;) value = value * x0 + p[i];
    if (!value.is_zero() || p.size() == 1) break;
    std::vector<Rational> q(p.size() - 1);
    Rational carry = p.back();
    for (std::size_t i = p.size() - 1; i-- > 0;) {
      q[i] = carry;
      carry = p[i] + carry * x0;
    }
    p = std::move(q);
    ++mult;
  }

  ValuationVector out;
  out.level = s.level;
  out.nu = {nu1 / Rational(s.level), Rational(mult) / Rational(s.level)};
  return out;
}

std::vector<SampledHull> sample_body(const toric::ToricVariety& x, const toric::DivisorQ& d,
                                     const OracleFlag& flag, const SampleConfig& cfg) {
  if (cfg.samples < 1 || cfg.pool < 1) throw GeomError("sample_body: bad configuration");
  for (int m : cfg.degrees)
    if (m < 1) throw GeomError("sample_body: degrees must be positive");
  const Polytope pd = toric::section_polytope(x, d);
  if (pd.is_empty()) throw HypothesisError("sample_body: divisor not effective");

  Rng rng(cfg.seed);
  Rational x0;
  if (flag.general) {
    if (flag.x0) x0 = *flag.x0;
    else {
      // Small-height nonzero rational.
      const long long num = rng.int_in(1, cfg.pool) * (rng.below(2) == 0 ? 1 : -1);
      const long long den = rng.int_in(1, cfg.pool);
      x0 = Rational(num, den);
    }
    if (x0.is_zero()) throw GeomError("sample_body: x0 must be nonzero");
  }

  auto value_of = [&](const Section& s) {
    const ValuationVector nu = flag.general
                                   ? nu_general_surface(x, d, s, flag.curve_ray, x0)
                                   : nu_invariant(x, d, s, flag.invariant);
    return QVector(std::vector<Rational>(nu.nu.begin(), nu.nu.end()));
  };

  // Sections sampled at each degree; higher degrees also draw powers and
  // products of lower-level samples, mirroring the multiplicative structure
  // of the section ring that the bodies are built from.
  std::map<int, std::vector<Section>> pool;
  std::vector<SampledHull> out;
  std::vector<int> degrees = cfg.degrees;
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());

  for (int m : degrees) {
    const auto lattice = lattice_points(toric::section_polytope(x, Rational(m) * d));
    if (lattice.empty()) continue;
    std::vector<Section> sections;
    for (const auto& u : lattice) sections.push_back(make_section(x, d, m, {{u, Rational(1)}}));

    const std::size_t max_support = std::min<std::size_t>(5, lattice.size());
    for (int trial = 0; trial < cfg.samples && lattice.size() >= 2; ++trial) {
      const std::size_t k =
          2 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(max_support - 1)));
      std::vector<std::size_t> idx;
      while (idx.size() < k) {
        const std::size_t cand = static_cast<std::size_t>(rng.below(lattice.size()));
        if (std::find(idx.begin(), idx.end(), cand) == idx.end()) idx.push_back(cand);
      }
      std::vector<std::pair<std::vector<long long>, Rational>> terms;
      for (std::size_t i : idx) {
        const long long coeff = rng.int_in(1, cfg.pool) * (rng.below(2) == 0 ? 1 : -1);
        terms.push_back({lattice[i], Rational(coeff)});
      }
      sections.push_back(make_section(x, d, m, std::move(terms)));
    }

    // Powers of lower-level samples land at this level.
    for (const auto& [deg, lower] : pool) {
      if (m % deg != 0 || deg == m) continue;
      const int power = m / deg;
      const std::size_t cap = std::min<std::size_t>(lower.size(),
                                                    static_cast<std::size_t>(cfg.samples));
      for (std::size_t i = 0; i < cap; ++i) {
        Section acc = lower[i];
        for (int p = 1; p < power; ++p) acc = multiply(acc, lower[i]);
        sections.push_back(std::move(acc));
      }
    }
    // Random mixed products.
    if (!pool.empty()) {
      for (int trial = 0; trial < cfg.samples; ++trial) {
        int remaining = m;
        std::optional<Section> acc;
        while (remaining > 0) {
          std::vector<int> options;
          for (const auto& [deg, lower] : pool)
            if (deg <= remaining && !lower.empty()) options.push_back(deg);
          if (options.empty()) break;
          const int deg = options[rng.below(options.size())];
          const auto& lower = pool.at(deg);
          const Section& f = lower[rng.below(lower.size())];
          acc = acc ? multiply(*acc, f) : f;
          remaining -= deg;
        }
        if (remaining == 0 && acc) sections.push_back(std::move(*acc));
      }
    }

    std::vector<QVector> points;
    points.reserve(sections.size());
    for (const auto& s : sections) points.push_back(value_of(s));
    out.push_back({m, Polytope::hull(flag.general ? 2 : x.n, points),
                   static_cast<int>(points.size())});
    pool[m] = std::move(sections);
  }
  if (out.empty()) throw HypothesisError("sample_body: no sections in any requested degree");
  return out;
}

ConvergenceReport convergence_report(const std::vector<SampledHull>& hulls,
                                     const Polytope& target) {
  ConvergenceReport rep;
  Rational prev(-1);
  for (const auto& h : hulls) {
    DegreeReport dr;
    dr.degree = h.degree;
    for (const auto& v : h.hull.vertices()) {
      if (!target.contains_point(v)) {
        dr.contained = false;
        dr.violation = v;
        break;
      }
    }
    if (dr.contained) dr.ratio = relative_volume_ratio(h.hull, target);
    else dr.ratio = Rational(0);
    rep.contained_all &= dr.contained;
    if (dr.ratio < prev) rep.monotone = false;
    prev = dr.ratio;
    rep.final_ratio = dr.ratio;
    rep.per_degree.push_back(std::move(dr));
  }
  return rep;
}

}  // namespace oklab::oracle
