#include "oklab/toric.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "oklab/errors.hpp"
#include "oklab/limits.hpp"

namespace oklab::toric {

namespace {

QVector ray_vector(const ToricVariety& x, int i) {
  return from_ll(x.rays[static_cast<std::size_t>(i)]);
}

QMatrix cone_matrix(const ToricVariety& x, const std::vector<int>& cone) {
  QMatrix m(x.n, static_cast<int>(cone.size()));
  for (std::size_t j = 0; j < cone.size(); ++j)
    for (int i = 0; i < x.n; ++i)
      m.at(i, static_cast<int>(j)) =
          Rational(x.rays[static_cast<std::size_t>(cone[j])][static_cast<std::size_t>(i)]);
  return m;
}

void require_divisor(const ToricVariety& x, const DivisorQ& d) {
  if (static_cast<int>(d.coeffs.size()) != x.num_rays())
    throw DimensionMismatch("divisor has " + std::to_string(d.coeffs.size()) +
                            " coefficients for " + std::to_string(x.num_rays()) + " rays");
}

void require_flag(const ToricVariety& x, const InvariantFlag& flag) {
  if (static_cast<int>(flag.rays_in_order.size()) != x.n)
    throw GeomError("flag must order the rays of one maximal cone");
  Cone sorted = flag.rays_in_order;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& c : x.max_cones) {
    Cone cc = c;
    std::sort(cc.begin(), cc.end());
    if (cc == sorted) return;
  }
  throw GeomError("flag rays do not form a maximal cone");
}

bool point_in_cone(const ToricVariety& x, const std::vector<int>& cone, const QVector& d) {
  const auto inv = inverse(cone_matrix(x, cone));
  if (!inv) return false;
  const QVector lambda = inv->apply(d);
  for (int i = 0; i < lambda.dim(); ++i)
    if (lambda[i].sgn() < 0) return false;
  return true;
}

// The affine map carrying P_D to the Okounkov body of the invariant flag:
// u maps to (<u, v_1> + a_1, ..., <u, v_n> + a_n) along the flag order.
std::pair<QMatrix, QVector> flag_map(const ToricVariety& x, const DivisorQ& d,
                                     const InvariantFlag& flag) {
  QMatrix m(x.n, x.n);
  QVector t(x.n);
  for (int r = 0; r < x.n; ++r) {
    const int ray = flag.rays_in_order[static_cast<std::size_t>(r)];
    for (int c = 0; c < x.n; ++c)
      m.at(r, c) = Rational(x.rays[static_cast<std::size_t>(ray)][static_cast<std::size_t>(c)]);
    t[r] = d.coeffs[static_cast<std::size_t>(ray)];
  }
  return {m, t};
}

DivisorQ all_ones(const ToricVariety& x) {
  DivisorQ a;
  a.coeffs.assign(static_cast<std::size_t>(x.num_rays()), Rational(1));
  return a;
}

DivisorQ ample_or_default(const ToricVariety& x, const std::optional<DivisorQ>& ample) {
  if (ample) {
    require_divisor(x, *ample);
    return *ample;
  }
  return default_ample(x);
}

}  // namespace

DivisorQ operator+(const DivisorQ& a, const DivisorQ& b) {
  if (a.coeffs.size() != b.coeffs.size()) throw DimensionMismatch("divisor add");
  DivisorQ r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

DivisorQ operator-(const DivisorQ& a, const DivisorQ& b) {
  if (a.coeffs.size() != b.coeffs.size()) throw DimensionMismatch("divisor sub");
  DivisorQ r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
  return r;
}

DivisorQ operator*(const Rational& c, const DivisorQ& d) {
  DivisorQ r = d;
  for (auto& x : r.coeffs) x *= c;
  return r;
}

// ---------------------------------------------------------------------------
// Fan validation
// ---------------------------------------------------------------------------

ToricValidation validate(const ToricVariety& x) {
  ToricValidation v;
  auto fail = [&](const std::string& msg) {
    v.structural = false;
    v.problems.push_back(msg);
  };

  if (x.n < 1) {
    fail("dimension must be positive");
    return v;
  }
  if (x.rays.empty() || x.max_cones.empty()) {
    fail("fan needs rays and maximal cones");
    return v;
  }
  for (std::size_t i = 0; i < x.rays.size(); ++i) {
    if (static_cast<int>(x.rays[i].size()) != x.n) {
      fail("ray " + std::to_string(i) + " has wrong dimension");
      return v;
    }
    long long g = 0;
    for (long long c : x.rays[i]) g = std::gcd(g, c < 0 ? -c : c);
    if (g == 0) fail("ray " + std::to_string(i) + " is zero");
    else if (g != 1) fail("ray " + std::to_string(i) + " is not primitive");
  }
  std::set<std::vector<int>> seen_cones;
  std::vector<bool> used(x.rays.size(), false);
  for (std::size_t c = 0; c < x.max_cones.size(); ++c) {
    auto cone = x.max_cones[c];
    if (static_cast<int>(cone.size()) != x.n) {
      fail("cone " + std::to_string(c) + " does not have n rays");
      return v;
    }
    for (int i : cone) {
      if (i < 0 || i >= x.num_rays()) {
        fail("cone " + std::to_string(c) + " has a bad ray index");
        return v;
      }
      used[static_cast<std::size_t>(i)] = true;
    }
    std::sort(cone.begin(), cone.end());
    if (std::unique(cone.begin(), cone.end()) != cone.end()) {
      fail("cone " + std::to_string(c) + " repeats a ray");
      return v;
    }
    if (!seen_cones.insert(cone).second) fail("duplicate maximal cone");
  }
  if (!v.structural) return v;

  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) {
      v.complete = false;
      v.problems.push_back("ray " + std::to_string(i) + " lies in no maximal cone");
    }

  // Smoothness: every maximal cone is unimodular.
  for (std::size_t c = 0; c < x.max_cones.size(); ++c) {
    const Rational dt = det(cone_matrix(x, x.max_cones[c]));
    if (dt.abs() != Rational(1)) {
      v.smooth = false;
      v.witness_cone = static_cast<int>(c);
      v.problems.push_back("cone " + std::to_string(c) + " is not unimodular (det " +
                           dt.str() + ")");
    }
  }

  // Completeness via wall pairing: every facet of every maximal cone must be
  // shared with exactly one other cone, on the opposite side.
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> wall_owners;
  for (std::size_t c = 0; c < x.max_cones.size(); ++c) {
    auto cone = x.max_cones[c];
    std::sort(cone.begin(), cone.end());
    for (std::size_t drop = 0; drop < cone.size(); ++drop) {
      std::vector<int> wall;
      for (std::size_t j = 0; j < cone.size(); ++j)
        if (j != drop) wall.push_back(cone[j]);
      wall_owners[wall].push_back({static_cast<int>(c), cone[drop]});
    }
  }
  std::map<std::vector<int>, std::pair<int, int>> neighbor;
  for (const auto& [wall, owners] : wall_owners) {
    if (owners.size() != 2) {
      v.complete = false;
      v.problems.push_back("wall shared by " + std::to_string(owners.size()) +
                           " cones instead of 2");
      continue;
    }
    if (x.n >= 2) {
      QMatrix wm(static_cast<int>(wall.size()), x.n);
      for (std::size_t j = 0; j < wall.size(); ++j)
        for (int i = 0; i < x.n; ++i)
          wm.at(static_cast<int>(j), i) =
              Rational(x.rays[static_cast<std::size_t>(wall[j])][static_cast<std::size_t>(i)]);
      const auto ns = nullspace(wm);
      if (ns.size() != 1) {
        v.complete = false;
        v.problems.push_back("degenerate wall");
        continue;
      }
      const int su = dot(ns[0], ray_vector(x, owners[0].second)).sgn();
      const int sv = dot(ns[0], ray_vector(x, owners[1].second)).sgn();
      if (su * sv != -1) {
        v.complete = false;
        v.problems.push_back("wall neighbors lie on the same side");
        continue;
      }
    } else {
      const long long su = x.rays[static_cast<std::size_t>(owners[0].second)][0];
      const long long sv = x.rays[static_cast<std::size_t>(owners[1].second)][0];
      if (su * sv >= 0) {
        v.complete = false;
        v.problems.push_back("the two rays do not oppose");
        continue;
      }
    }
    neighbor[wall] = {owners[0].first, owners[1].first};
  }

  // Interiors must be pairwise disjoint.
  for (std::size_t a = 0; a + 1 < x.max_cones.size() && v.complete; ++a) {
    for (std::size_t b = a + 1; b < x.max_cones.size(); ++b) {
      // max t s.t. V_a lambda = V_b mu, lambda_i >= t, mu_i >= t, sum lambda = 1
      const int nv = 2 * x.n + 1;
      LpBuilder lp(nv);
      const QMatrix ma = cone_matrix(x, x.max_cones[a]);
      const QMatrix mb = cone_matrix(x, x.max_cones[b]);
      for (int r = 0; r < x.n; ++r) {
        QVector row(nv);
        for (int j = 0; j < x.n; ++j) {
          row[j] = ma.at(r, j);
          row[x.n + j] = -mb.at(r, j);
        }
        lp.add_eq(row, Rational(0));
      }
      QVector ones(nv);
      for (int j = 0; j < x.n; ++j) ones[j] = Rational(1);
      lp.add_eq(ones, Rational(1));
      for (int j = 0; j < 2 * x.n; ++j) {
        QVector row(nv);
        row[j] = Rational(1);
        row[nv - 1] = Rational(-1);
        lp.add_ge(row, Rational(0));  // lambda_j - t >= 0
      }
      const auto sol = lp_solve(QVector::unit(nv, nv - 1), LpSense::Maximize, lp);
      if (sol.status == LpStatus::Optimal && sol.value.sgn() > 0) {
        v.complete = false;
        v.problems.push_back("cones " + std::to_string(a) + " and " + std::to_string(b) +
                             " have overlapping interiors");
      }
    }
  }

  // Dual graph connectivity.
  if (v.complete && !x.max_cones.empty()) {
    std::vector<bool> reach(x.max_cones.size(), false);
    std::vector<int> stack = {0};
    reach[0] = true;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (const auto& [wall, pair] : neighbor) {
        int other = -1;
        if (pair.first == c) other = pair.second;
        if (pair.second == c) other = pair.first;
        if (other >= 0 && !reach[static_cast<std::size_t>(other)]) {
          reach[static_cast<std::size_t>(other)] = true;
          stack.push_back(other);
        }
      }
    }
    if (!std::all_of(reach.begin(), reach.end(), [](bool b) { return b; })) {
      v.complete = false;
      v.problems.push_back("fan support is disconnected");
    }
  }

  if (!v.complete) {
    // Small search for an uncovered rational direction, reported as witness.
    for (long long box = 1; box <= 4 && !v.witness_direction; ++box) {
      std::vector<long long> d(static_cast<std::size_t>(x.n), -box);
      for (;;) {
        const bool zero = std::all_of(d.begin(), d.end(), [](long long c) { return c == 0; });
        if (!zero) {
          bool covered = false;
          for (const auto& cone : x.max_cones)
            if (point_in_cone(x, cone, from_ll(d))) { covered = true; break; }
          if (!covered) {
            v.witness_direction = d;
            break;
          }
        }
        std::size_t i = 0;
        while (i < d.size() && d[i] == box) d[i++] = -box;
        if (i == d.size()) break;
        ++d[i];
      }
    }
  }
  return v;
}

std::vector<Wall> walls(const ToricVariety& x) {
  std::map<std::vector<int>, std::vector<int>> owners;  // wall -> opposite rays
  for (const auto& mc : x.max_cones) {
    auto cone = mc;
    std::sort(cone.begin(), cone.end());
    for (std::size_t drop = 0; drop < cone.size(); ++drop) {
      std::vector<int> wall;
      for (std::size_t j = 0; j < cone.size(); ++j)
        if (j != drop) wall.push_back(cone[j]);
      owners[wall].push_back(cone[drop]);
    }
  }
  std::vector<Wall> out;
  for (const auto& [wall, opp] : owners) {
    if (opp.size() != 2) throw GeomError("walls: fan is not complete");
    Wall w;
    w.rays = wall;
    w.left = std::min(opp[0], opp[1]);
    w.right = std::max(opp[0], opp[1]);
    // Solve v_left + v_right = sum rel_j v_{wall_j}; smoothness makes the
    // solution exist and be unique.
    QMatrix m(x.n, static_cast<int>(wall.size()));
    for (std::size_t j = 0; j < wall.size(); ++j)
      for (int i = 0; i < x.n; ++i)
        m.at(i, static_cast<int>(j)) =
            Rational(x.rays[static_cast<std::size_t>(wall[j])][static_cast<std::size_t>(i)]);
    const QVector rhs = ray_vector(x, w.left) + ray_vector(x, w.right);
    const auto sol = solve_linear(m, rhs);
    if (!sol) throw GeomError("walls: wall relation failed (fan not smooth?)");
    w.rel.assign(sol->entries().begin(), sol->entries().end());
    out.push_back(std::move(w));
  }
  return out;
}

Rational wall_degree(const ToricVariety& x, const DivisorQ& d, const Wall& w) {
  require_divisor(x, d);
  Rational deg = d.coeffs[static_cast<std::size_t>(w.left)] +
                 d.coeffs[static_cast<std::size_t>(w.right)];
  for (std::size_t j = 0; j < w.rays.size(); ++j)
    deg -= w.rel[j] * d.coeffs[static_cast<std::size_t>(w.rays[j])];
  return deg;
}

// ---------------------------------------------------------------------------
// Divisors
// ---------------------------------------------------------------------------

Polytope section_polytope(const ToricVariety& x, const DivisorQ& d) {
  require_divisor(x, d);
  std::vector<Halfspace> hs;
  hs.reserve(x.rays.size());
  for (int i = 0; i < x.num_rays(); ++i)
    hs.emplace_back(ray_vector(x, i), -d.coeffs[static_cast<std::size_t>(i)]);
  return Polytope::from_halfspaces(x.n, hs);
}

int iitaka_dim(const ToricVariety& x, const DivisorQ& d) {
  const Polytope p = section_polytope(x, d);
  return p.is_empty() ? kKappaNone : p.affine_dim();
}

Classification classify(const ToricVariety& x, const DivisorQ& d) {
  Classification c;
  const Polytope p = section_polytope(x, d);
  c.pseudoeffective = !p.is_empty();
  c.big = p.affine_dim() == x.n;
  c.nef = true;
  for (const auto& w : walls(x))
    if (wall_degree(x, d, w).sgn() < 0) { c.nef = false; break; }
  c.semiample = c.nef;
  return c;
}

DivisorQ default_ample(const ToricVariety& x) {
  const auto ws = walls(x);
  const DivisorQ ones = all_ones(x);
  bool strict = true;
  for (const auto& w : ws)
    if (wall_degree(x, ones, w).sgn() <= 0) { strict = false; break; }
  if (strict) return ones;

  // Find an integral divisor with strictly positive degree on every
  // invariant curve: minimize the coefficient sum over the shifted nef cone.
  const int r = x.num_rays();
  LpBuilder lp(r);
  for (const auto& w : ws) {
    QVector row(r);
    row[w.left] += Rational(1);
    row[w.right] += Rational(1);
    for (std::size_t j = 0; j < w.rays.size(); ++j) row[w.rays[j]] -= w.rel[j];
    lp.add_ge(row, Rational(1));
  }
  for (int i = 0; i < r; ++i) lp.add_ge(QVector::unit(r, i), Rational(0));
  QVector obj(r);
  for (int i = 0; i < r; ++i) obj[i] = Rational(1);
  LpOptimum opt;
  try {
    opt = lp_lex_optimum(obj, LpSense::Minimize, lp);
  } catch (const InfeasibleError&) {
    throw GeomError("fan admits no ample divisor");
  }
  mpz_class den(1);
  for (int i = 0; i < r; ++i)
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), opt.point[i].denominator().get_mpz_t());
  DivisorQ a;
  a.coeffs.reserve(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) a.coeffs.push_back(opt.point[i] * Rational(den));
  return a;
}

Rational asymptotic_order(const ToricVariety& x, const DivisorQ& d, int i,
                          const std::optional<DivisorQ>& ample) {
  require_divisor(x, d);
  if (i < 0 || i >= x.num_rays()) throw DimensionMismatch("asymptotic_order: ray index");
  const Classification cls = classify(x, d);
  if (!cls.pseudoeffective)
    throw HypothesisError("asymptotic_order: divisor not pseudoeffective");

  auto big_order = [&](const DivisorQ& dd) {
    const Polytope p = section_polytope(x, dd);
    const auto opt = lp_optimize(ray_vector(x, i), p, LpSense::Minimize);
    return opt.value + dd.coeffs[static_cast<std::size_t>(i)];
  };
  if (cls.big) return big_order(d);

  const DivisorQ a = ample_or_default(x, ample);
  return limit_at_zero([&](const Rational& eps) { return big_order(d + eps * a); });
}

SigmaS sigma_s_decomposition(const ToricVariety& x, const DivisorQ& d,
                             const std::optional<DivisorQ>& ample) {
  require_divisor(x, d);
  const Polytope p = section_polytope(x, d);
  if (p.is_empty()) throw HypothesisError("sigma_s_decomposition: divisor not pseudoeffective");

  SigmaS out;
  out.sigma.positive = d;
  out.s.positive = d;
  for (int i = 0; i < x.num_rays(); ++i) {
    const Rational n_sigma = asymptotic_order(x, d, i, ample);
    const auto opt = lp_optimize(ray_vector(x, i), p, LpSense::Minimize);
    const Rational n_s = opt.value + d.coeffs[static_cast<std::size_t>(i)];
    if (n_sigma != n_s)
      throw RefutationError("sigma and s decompositions disagree on ray " + std::to_string(i) +
                            ": " + n_sigma.str() + " vs " + n_s.str());
    if (n_sigma.sgn() < 0)
      throw RefutationError("negative asymptotic order on ray " + std::to_string(i));
    if (n_sigma.sgn() > 0) {
      out.sigma.negative.push_back({i, n_sigma});
      out.s.negative.push_back({i, n_s});
      out.sigma.positive.coeffs[static_cast<std::size_t>(i)] -= n_sigma;
      out.s.positive.coeffs[static_cast<std::size_t>(i)] -= n_s;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Base loci
// ---------------------------------------------------------------------------

namespace {

std::vector<Cone> all_cones(const ToricVariety& x) {
  std::set<Cone> cones;
  cones.insert(Cone{});
  for (const auto& mc : x.max_cones) {
    Cone sorted = mc;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      Cone c;
      for (std::size_t j = 0; j < n; ++j)
        if (mask & (std::size_t{1} << j)) c.push_back(sorted[j]);
      cones.insert(c);
    }
  }
  return {cones.begin(), cones.end()};
}

// Stable base locus through face emptiness: V(cone) lies in SB(D) iff the
// face of P_D where the cone's inequalities are tight is empty.
std::vector<Cone> stable_locus(const ToricVariety& x, const DivisorQ& d,
                               const std::vector<Cone>& cones) {
  const Polytope p = section_polytope(x, d);
  if (p.is_empty()) return cones;
  std::vector<Cone> out;
  for (const auto& cone : cones) {
    if (cone.empty()) continue;  // P_D itself is nonempty
    QVector obj(x.n);
    Rational shift;
    for (int i : cone) {
      obj += ray_vector(x, i);
      shift += d.coeffs[static_cast<std::size_t>(i)];
    }
    const auto opt = lp_optimize(obj, p, LpSense::Minimize);
    if ((opt.value + shift).sgn() != 0) out.push_back(cone);
  }
  return out;
}

}  // namespace

bool locus_contains(const std::vector<Cone>& loci_cones, const Cone& cone) {
  for (const auto& c : loci_cones)
    if (std::includes(cone.begin(), cone.end(), c.begin(), c.end())) return true;
  return false;
}

BaseLoci base_loci(const ToricVariety& x, const DivisorQ& d,
                   const std::optional<DivisorQ>& ample) {
  require_divisor(x, d);
  const DivisorQ a = ample_or_default(x, ample);
  const auto cones = all_cones(x);

  BaseLoci loci;
  loci.stable = stable_locus(x, d, cones);
  auto eq = [](const std::vector<Cone>& u, const std::vector<Cone>& v) { return u == v; };
  loci.plus = stable_at_zero<std::vector<Cone>>(
      [&](const Rational& eps) { return stable_locus(x, d - eps * a, cones); }, eq);
  loci.minus = stable_at_zero<std::vector<Cone>>(
      [&](const Rational& eps) { return stable_locus(x, d + eps * a, cones); }, eq);

  // B- inside SB inside B+.
  auto subset = [](const std::vector<Cone>& u, const std::vector<Cone>& v) {
    return std::includes(v.begin(), v.end(), u.begin(), u.end());
  };
  if (!subset(loci.minus, loci.stable) || !subset(loci.stable, loci.plus))
    throw RefutationError("base locus chain B- in SB in B+ violated");
  return loci;
}

// ---------------------------------------------------------------------------
// Okounkov bodies
// ---------------------------------------------------------------------------

Polytope okounkov_body(const ToricVariety& x, const DivisorQ& d, const InvariantFlag& flag,
                       BodyKind kind, const std::optional<DivisorQ>& ample) {
  require_divisor(x, d);
  require_flag(x, flag);
  const auto [m, t] = flag_map(x, d, flag);
  const Polytope p = section_polytope(x, d);

  switch (kind) {
    case BodyKind::Big:
      if (p.affine_dim() != x.n) throw HypothesisError("okounkov_body: divisor not big");
      return affine_image(p, m, t);
    case BodyKind::Val:
      if (p.is_empty()) throw HypothesisError("okounkov_body: divisor not effective");
      return affine_image(p, m, t);
    case BodyKind::Lim: {
      if (p.is_empty()) throw HypothesisError("okounkov_body: divisor not pseudoeffective");
      const DivisorQ a = ample_or_default(x, ample);
      const Polytope nump = limit_polytope_at_zero(
          [&](const Rational& eps) { return section_polytope(x, d + eps * a); });
      return affine_image(nump, m, t);
    }
  }
  throw GeomError("okounkov_body: unknown kind");
}

Polytope restricted_body(const ToricVariety& x, const DivisorQ& d, const InvariantFlag& flag,
                         int k) {
  require_divisor(x, d);
  require_flag(x, flag);
  if (k < 0 || k > x.n) throw DimensionMismatch("restricted_body: bad k");
  std::vector<Halfspace> hs;
  for (int i = 0; i < x.num_rays(); ++i)
    hs.emplace_back(ray_vector(x, i), -d.coeffs[static_cast<std::size_t>(i)]);
  for (auto it = flag.rays_in_order.begin(); it != flag.rays_in_order.end() - k; ++it) {
    hs.emplace_back(ray_vector(x, *it), -d.coeffs[static_cast<std::size_t>(*it)]);
    hs.emplace_back(-ray_vector(x, *it), d.coeffs[static_cast<std::size_t>(*it)]);
  }
  const Polytope face = Polytope::from_halfspaces(x.n, hs);
  const auto [m, t] = flag_map(x, d, flag);
  return affine_image(face, m, t);
}

Rational restricted_volume_by_counting(const ToricVariety& x, const DivisorQ& d,
                                       const InvariantFlag& flag, int k) {
  require_divisor(x, d);
  require_flag(x, flag);
  if (k < 1 || k > x.n) throw DimensionMismatch("restricted_volume_by_counting: bad k");
  Cone sigma(flag.rays_in_order.begin(), flag.rays_in_order.end() - k);
  std::sort(sigma.begin(), sigma.end());

  // Counts are evaluated at multiples of a step clearing the vertex
  // denominators of P_D, making them a single polynomial of degree <= k with
  // leading term vol * m^k / k!.  (Integrality of D is not enough: a non-nef
  // integral divisor can have a fractional section polytope vertex.)
  const Polytope pd = section_polytope(x, d);
  if (pd.is_empty()) throw HypothesisError("restricted_volume_by_counting: no sections");
  mpz_class step(1);
  for (const auto& v : pd.vertices())
    for (int i = 0; i < x.n; ++i)
      mpz_lcm(step.get_mpz_t(), step.get_mpz_t(), v[i].denominator().get_mpz_t());
  for (const auto& c : d.coeffs)
    mpz_lcm(step.get_mpz_t(), step.get_mpz_t(), c.denominator().get_mpz_t());
  const Rational s{Rational(step)};

  std::vector<Rational> counts;
  for (int ell = 0; ell <= k + 1; ++ell) {
    const DivisorQ md = (Rational(ell) * s) * d;
    std::vector<Halfspace> hs;
    for (int i = 0; i < x.num_rays(); ++i)
      hs.emplace_back(ray_vector(x, i), -md.coeffs[static_cast<std::size_t>(i)]);
    for (int i : sigma) {
      hs.emplace_back(ray_vector(x, i), -md.coeffs[static_cast<std::size_t>(i)]);
      hs.emplace_back(-ray_vector(x, i), md.coeffs[static_cast<std::size_t>(i)]);
    }
    const Polytope face = Polytope::from_halfspaces(x.n, hs);
    counts.push_back(Rational(static_cast<long long>(lattice_points(face).size())));
  }
  std::vector<Rational> diff = counts;
  for (int round = 0; round < k; ++round)
    for (std::size_t i = 0; i + 1 + static_cast<std::size_t>(round) < diff.size(); ++i)
      diff[i] = diff[i + 1] - diff[i];
  const Rational lead = diff[0];
  if (diff[1] != lead)
    throw RefutationError(
        "restricted_volume_by_counting: counts are not polynomial of degree " +
        std::to_string(k));
  Rational sk(1);
  for (int i = 0; i < k; ++i) sk *= s;
  return lead / sk;
}

Rational restricted_volume(const ToricVariety& x, const DivisorQ& d, const InvariantFlag& flag,
                           int k) {
  require_divisor(x, d);
  require_flag(x, flag);
  if (k < 1 || k > x.n) throw DimensionMismatch("restricted_volume: bad k");

  Cone sigma(flag.rays_in_order.begin(), flag.rays_in_order.end() - k);
  std::sort(sigma.begin(), sigma.end());
  const BaseLoci loci = base_loci(x, d);
  if (locus_contains(loci.plus, sigma))
    throw HypothesisError("restricted volume undefined here");

  // Route 1: slice of the Okounkov body.
  const Polytope body = okounkov_body(x, d, flag, BodyKind::Big);
  std::vector<int> last_k;
  for (int i = x.n - k; i < x.n; ++i) last_k.push_back(i);
  Rational kfact(1);
  for (int i = 2; i <= k; ++i) kfact *= Rational(i);
  const Rational route1 = kfact * volume(slice(body, k), last_k);

  // Route 2: section counting.
  const Rational route2 = restricted_volume_by_counting(x, d, flag, k);

  if (route1 != route2)
    throw RefutationError("restricted_volume: slice route " + route1.str() +
                          " disagrees with counting route " + route2.str());
  return route1;
}

int numerical_dim(const ToricVariety& x, const DivisorQ& d) {
  const int kappa = iitaka_dim(x, d);
  if (kappa == kKappaNone) return kKappaNone;

  // Growth sanity check: between m = 6 and m = 12 the section counts of
  // floor(mD) + A must scale like 2^kappa up to a factor of 4.  The additive
  // contribution of A keeps this coarse at small m; the guard exists to catch
  // gross mismatches, not to re-derive kappa.
  const DivisorQ a = default_ample(x);
  auto count = [&](int m) {
    DivisorQ md;
    md.coeffs.reserve(d.coeffs.size());
    for (const auto& c : d.coeffs) md.coeffs.push_back(Rational((Rational(m) * c).floor_z()));
    return static_cast<long long>(lattice_points(section_polytope(x, md + a)).size());
  };
  const long long c6 = count(6), c12 = count(12);
  const long long pw = 1LL << kappa;
  if (4 * c12 < pw * c6 || c12 > 4 * pw * c6)
    throw RefutationError("numerical_dim: section growth does not match kappa = " +
                          std::to_string(kappa));
  return kappa;
}

// ---------------------------------------------------------------------------
// Graded linear series
// ---------------------------------------------------------------------------

namespace {

void require_series(const ToricVariety& x, const GradedSeriesT& w) {
  require_divisor(x, w.base);
  const Polytope p = section_polytope(x, w.base);
  for (const auto& u : w.w1) {
    if (static_cast<int>(u.size()) != x.n) throw DimensionMismatch("series point dimension");
    if (!p.contains_point(from_ll(u)))
      throw GeomError("series generator outside the section polytope");
  }
}

}  // namespace

std::vector<std::vector<long long>> series_generate(const ToricVariety& x,
                                                    const GradedSeriesT& w, int k) {
  require_series(x, w);
  if (k < 1) throw GeomError("series_generate: degree must be positive");
  std::set<std::vector<long long>> cur(w.w1.begin(), w.w1.end());
  for (int step = 1; step < k; ++step) {
    std::set<std::vector<long long>> next;
    for (const auto& a : cur)
      for (const auto& b : w.w1) {
        std::vector<long long> sum(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
        next.insert(std::move(sum));
      }
    cur = std::move(next);
  }
  return {cur.begin(), cur.end()};
}

Polytope series_body(const ToricVariety& x, const GradedSeriesT& w, const InvariantFlag& flag) {
  require_series(x, w);
  require_flag(x, flag);
  if (w.w1.empty()) throw HypothesisError("series_body: empty generating series");
  const auto [m, t] = flag_map(x, w.base, flag);
  std::vector<QVector> pts;
  pts.reserve(w.w1.size());
  for (const auto& u : w.w1) pts.push_back(m.apply(from_ll(u)) + t);
  return Polytope::hull(x.n, pts);
}

// ---------------------------------------------------------------------------
// Standard fans
// ---------------------------------------------------------------------------

ToricVariety projective_space(int n) {
  if (n < 1) throw GeomError("projective_space: dimension must be positive");
  ToricVariety x;
  x.n = n;
  for (int i = 0; i < n; ++i) {
    std::vector<long long> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    x.rays.push_back(std::move(e));
  }
  x.rays.push_back(std::vector<long long>(static_cast<std::size_t>(n), -1));
  for (int drop = 0; drop <= n; ++drop) {
    std::vector<int> cone;
    for (int i = 0; i <= n; ++i)
      if (i != drop) cone.push_back(i);
    x.max_cones.push_back(std::move(cone));
  }
  return x;
}

ToricVariety product_p1_p1() {
  ToricVariety x;
  x.n = 2;
  x.rays = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  x.max_cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return x;
}

ToricVariety hirzebruch(int a) {
  ToricVariety x;
  x.n = 2;
  x.rays = {{1, 0}, {0, 1}, {-1, static_cast<long long>(a)}, {0, -1}};
  x.max_cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return x;
}

// ---------------------------------------------------------------------------
// Blowups
// ---------------------------------------------------------------------------

Blowup blowup_fixed_point(const ToricVariety& x, const Cone& max_cone) {
  Cone sorted = max_cone;
  std::sort(sorted.begin(), sorted.end());
  bool found = false;
  for (const auto& mc : x.max_cones) {
    Cone cc = mc;
    std::sort(cc.begin(), cc.end());
    if (cc == sorted) { found = true; break; }
  }
  if (!found) throw HypothesisError("blowup_fixed_point: not a maximal cone");

  Blowup bl;
  bl.center = sorted;
  bl.variety.n = x.n;
  bl.variety.rays = x.rays;
  std::vector<long long> star(static_cast<std::size_t>(x.n), 0);
  for (int i : sorted)
    for (int c = 0; c < x.n; ++c)
      star[static_cast<std::size_t>(c)] +=
          x.rays[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  bl.new_ray = x.num_rays();
  bl.variety.rays.push_back(star);
  for (const auto& mc : x.max_cones) {
    Cone cc = mc;
    std::sort(cc.begin(), cc.end());
    if (cc == sorted) continue;
    bl.variety.max_cones.push_back(mc);
  }
  for (std::size_t drop = 0; drop < sorted.size(); ++drop) {
    Cone c;
    for (std::size_t j = 0; j < sorted.size(); ++j)
      if (j != drop) c.push_back(sorted[j]);
    c.push_back(bl.new_ray);
    bl.variety.max_cones.push_back(c);
  }
  return bl;
}

DivisorQ pullback(const Blowup& bl, const DivisorQ& d) {
  if (static_cast<int>(d.coeffs.size()) != bl.variety.num_rays() - 1)
    throw DimensionMismatch("pullback: divisor does not live on the blown-down variety");
  DivisorQ out = d;
  Rational c;
  for (int i : bl.center) c += d.coeffs[static_cast<std::size_t>(i)];
  out.coeffs.push_back(c);
  return out;
}

}  // namespace oklab::toric
