#include "oklab/harness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "oklab/errors.hpp"
#include "oklab/limits.hpp"
#include "oklab/rng.hpp"

namespace oklab::harness {

namespace {

std::string poly_str(const Polytope& p) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < p.vertices().size(); ++i) {
    if (i) os << ", ";
    os << "(";
    for (int j = 0; j < p.ambient_dim(); ++j) {
      if (j) os << ",";
      os << p.vertices()[i][j];
    }
    os << ")";
  }
  os << "}";
  return os.str();
}

void record_body(CheckReport* rep, const Polytope& p) {
  rep->body_vertex_counts.push_back(static_cast<int>(p.vertices().size()));
}

CheckReport make_report(const std::string& check, const std::string& id) {
  CheckReport r;
  r.check = check;
  r.instance = id;
  return r;
}

void finish(CheckReport* rep, bool pass, const std::string& detail = "") {
  rep->pass = pass;
  if (!detail.empty()) rep->detail = detail;
}

void gate(CheckReport* rep, const std::string& reason) {
  rep->gated = true;
  rep->pass = false;
  rep->detail = reason;
}

Rational factorial(int k) {
  Rational f(1);
  for (int i = 2; i <= k; ++i) f *= Rational(i);
  return f;
}

std::vector<int> last_coords(int ambient, int k) {
  std::vector<int> coords;
  for (int i = ambient - k; i < ambient; ++i) coords.push_back(i);
  return coords;
}

bool contained_in_zero_block(const Polytope& body, int zeros) {
  for (const auto& v : body.vertices())
    for (int i = 0; i < zeros; ++i)
      if (!v[i].is_zero()) return false;
  return true;
}

// vol+ along the invariant flag element: the limit over D + eps A of the
// slice-route restricted volume.  (The slice and counting routes are pinned
// against each other inside toric::restricted_volume; repeating the counting
// route at every eps would blow the lattice scans up by the eps denominator.)
Rational toric_vol_plus(const toric::ToricVariety& x, const toric::DivisorQ& d,
                        const toric::InvariantFlag& flag, int k, const toric::DivisorQ& a) {
  std::vector<int> coords = last_coords(x.n, k);
  return limit_at_zero_poly(
      [&](const Rational& eps) {
        const Polytope body = toric::okounkov_body(x, d + eps * a, flag, BodyKind::Big);
        return factorial(k) * volume(slice(body, k), coords);
      },
      k);
}

Rational surf_ord(const surface::ZariskiDecomposition& zd, const std::string& curve) {
  for (const auto& [name, c] : zd.negative)
    if (name == curve) return c;
  return Rational(0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Library validation
// ---------------------------------------------------------------------------

void validate_instance(const Instance& inst) {
  if (inst.expected.kappa > inst.expected.kappa_nu)
    throw GeomError(inst.id + ": expected kappa exceeds kappa_nu");
  if (inst.is_toric()) {
    const auto& t = inst.toric_data();
    if (!toric::validate(t.variety).ok()) throw GeomError(inst.id + ": fan invalid");
    const auto cls = toric::classify(t.variety, t.divisor);
    if (cls.pseudoeffective != inst.expected.pseudoeffective || cls.big != inst.expected.big)
      throw GeomError(inst.id + ": expected classification tags wrong");
    if (cls.pseudoeffective) {
      if (toric::iitaka_dim(t.variety, t.divisor) != inst.expected.kappa)
        throw GeomError(inst.id + ": expected kappa wrong");
      if (toric::numerical_dim(t.variety, t.divisor) != inst.expected.kappa_nu)
        throw GeomError(inst.id + ": expected kappa_nu wrong");
    }
    if (!inst.expected.flag_designated.empty() &&
        inst.expected.flag_designated.size() != t.flags.size())
      throw GeomError(inst.id + ": designation tags misaligned with flags");
  } else {
    const auto& s = inst.surface_data();
    if (!surface::validate(s.surf).ok) throw GeomError(inst.id + ": surface model invalid");
    const auto cls = surface::classify(s.surf, s.divisor);
    if (cls.pseudoeffective != inst.expected.pseudoeffective || cls.big != inst.expected.big)
      throw GeomError(inst.id + ": expected classification tags wrong");
    if (cls.pseudoeffective) {
      if (surface::numerical_dim(s.surf, s.divisor) != inst.expected.kappa_nu)
        throw GeomError(inst.id + ": expected kappa_nu wrong");
      if (surface::kappa(s.surf, s.divisor) != inst.expected.kappa)
        throw GeomError(inst.id + ": expected kappa wrong");
    }
    if (!inst.expected.flag_curve_is_pvs.empty() &&
        inst.expected.flag_curve_is_pvs.size() != s.flags.size())
      throw GeomError(inst.id + ": pvs tags misaligned with flags");
    if (!inst.expected.flag_designated.empty() &&
        inst.expected.flag_designated.size() != s.flags.size())
      throw GeomError(inst.id + ": designation tags misaligned with flags");
  }
}

// ---------------------------------------------------------------------------
// Slicing (restricted body equals the coordinate slice)
// ---------------------------------------------------------------------------

CheckReport check_slicing(const Instance& inst, int k) {
  CheckReport rep = make_report("slicing[k=" + std::to_string(k) + "]", inst.id);
  int checked = 0;
  if (inst.is_toric()) {
    const auto& t = inst.toric_data();
    if (!toric::classify(t.variety, t.divisor).big) {
      gate(&rep, "hypothesis unmet: divisor not big");
      return rep;
    }
    const auto loci = toric::base_loci(t.variety, t.divisor, t.ample);
    for (const auto& flag : t.flags) {
      toric::Cone sigma(flag.rays_in_order.begin(), flag.rays_in_order.end() - k);
      std::sort(sigma.begin(), sigma.end());
      if (toric::locus_contains(loci.plus, sigma)) continue;  // hypothesis unmet for this flag
      const Polytope body = toric::okounkov_body(t.variety, t.divisor, flag, BodyKind::Big);
      const Polytope via_slice = slice(body, k);
      const Polytope via_face = toric::restricted_body(t.variety, t.divisor, flag, k);
      record_body(&rep, via_slice);
      record_body(&rep, via_face);
      if (!equals(via_slice, via_face)) {
        finish(&rep, false,
               "slice " + poly_str(via_slice) + " vs restricted " + poly_str(via_face));
        return rep;
      }
      ++checked;
    }
  } else {
    const auto& s = inst.surface_data();
    if (k != 1) {
      gate(&rep, "surface slices have k = 1");
      return rep;
    }
    if (!surface::classify(s.surf, s.divisor).big) {
      gate(&rep, "hypothesis unmet: divisor not big");
      return rep;
    }
    const auto loci = surface::base_loci_divisorial(s.surf, s.divisor);
    for (const auto& flag : s.flags) {
      if (std::find(loci.plus.begin(), loci.plus.end(), flag.curve) != loci.plus.end())
        continue;
      const Polytope body = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Big);
      const Polytope via_slice = slice(body, 1);
      const auto rv = surface::restricted_volumes(s.surf, s.divisor, flag.curve, s.ample);
      const Polytope restricted = Polytope::hull(
          2, {QVector{Rational(0), Rational(0)}, QVector{Rational(0), rv.vol}});
      record_body(&rep, via_slice);
      record_body(&rep, restricted);
      if (!equals(via_slice, restricted)) {
        finish(&rep, false,
               "slice " + poly_str(via_slice) + " vs restricted " + poly_str(restricted));
        return rep;
      }
      ++checked;
    }
  }
  if (checked == 0) {
    gate(&rep, "hypothesis unmet: every flag element meets B+");
    return rep;
  }
  finish(&rep, true, std::to_string(checked) + " flags checked");
  return rep;
}

// ---------------------------------------------------------------------------
// Dimension and volume identities
// ---------------------------------------------------------------------------

CheckReport check_dim_vol(const Instance& inst) {
  CheckReport rep = make_report("dim_vol", inst.id);
  if (!inst.expected.pseudoeffective) {
    gate(&rep, "hypothesis unmet: divisor not pseudoeffective");
    return rep;
  }
  std::ostringstream note;

  if (inst.is_toric()) {
    const auto& t = inst.toric_data();
    const int n = t.variety.n;
    const int kap = toric::iitaka_dim(t.variety, t.divisor);
    const toric::DivisorQ a = t.ample ? *t.ample : toric::default_ample(t.variety);
    for (std::size_t fi = 0; fi < t.flags.size(); ++fi) {
      const auto& flag = t.flags[fi];
      const bool designated = inst.expected.flag_designated.empty()
                                  ? true
                                  : inst.expected.flag_designated[fi];
      const Polytope val = toric::okounkov_body(t.variety, t.divisor, flag, BodyKind::Val);
      const Polytope lim =
          toric::okounkov_body(t.variety, t.divisor, flag, BodyKind::Lim, t.ample);
      record_body(&rep, val);
      record_body(&rep, lim);
      if (val.affine_dim() != kap) {
        finish(&rep, false, "dim of valuative body is " + std::to_string(val.affine_dim()) +
                                ", kappa = " + std::to_string(kap));
        return rep;
      }
      if (lim.affine_dim() != inst.expected.kappa_nu) {
        finish(&rep, false, "dim of limiting body mismatches kappa_nu");
        return rep;
      }
      if (!designated) continue;
      if (!contained_in_zero_block(val, n - kap)) {
        finish(&rep, false, "valuative body leaves {0}^{n-kappa} x R^kappa");
        return rep;
      }
      if (kap > 0) {
        const Rational vol_val = volume(val, last_coords(n, kap));
        const Rational rv = toric::restricted_volume_by_counting(t.variety, t.divisor, flag, kap);
        if (factorial(kap) * vol_val != rv) {
          finish(&rep, false, "kappa! vol(val body) = " + (factorial(kap) * vol_val).str() +
                                  " but vol_{X|U} = " + rv.str());
          return rep;
        }
        const Rational volp = toric_vol_plus(t.variety, t.divisor, flag, kap, a);
        const Rational vol_lim = volume(lim, last_coords(n, kap));
        if (factorial(kap) * vol_lim != volp) {
          finish(&rep, false, "kappa_nu! vol(lim body) = " + (factorial(kap) * vol_lim).str() +
                                  " but vol+ = " + volp.str());
          return rep;
        }
        note << "flag vol " << rv.str() << " vol+ " << volp.str() << "; ";
      }
    }
  } else {
    const auto& s = inst.surface_data();
    const int kap = inst.expected.kappa;
    const int nu = inst.expected.kappa_nu;
    for (std::size_t fi = 0; fi < s.flags.size(); ++fi) {
      const auto& flag = s.flags[fi];
      const Polytope val = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Val);
      const Polytope lim = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Lim);
      record_body(&rep, val);
      record_body(&rep, lim);
      if (val.affine_dim() != kap) {
        finish(&rep, false, "dim of valuative body mismatches kappa");
        return rep;
      }
      if (lim.affine_dim() != nu) {
        finish(&rep, false, "dim of limiting body mismatches kappa_nu");
        return rep;
      }
      const bool pvs_flag = fi < inst.expected.flag_curve_is_pvs.size()
                                ? inst.expected.flag_curve_is_pvs[fi]
                                : false;
      if (kap == 2 || nu == 2) {
        // Volume identities at the top level: n! vol(body) = vol_X(D) = P^2.
        const auto zd = surface::zariski_decompose(s.surf, s.divisor);
        const Rational volx = surface::pairing(s.surf, zd.positive, zd.positive);
        if (Rational(2) * volume_full(val) != volx || Rational(2) * volume_full(lim) != volx) {
          finish(&rep, false, "2 area(body) != vol_X");
          return rep;
        }
        note << "vol_X " << volx.str() << "; ";
      } else if (pvs_flag && kap >= 0) {
        if (!contained_in_zero_block(val, 2 - kap) || !contained_in_zero_block(lim, 2 - nu)) {
          finish(&rep, false, "body of a PVS flag leaves the zero block");
          return rep;
        }
        const auto rv = surface::restricted_volumes(s.surf, s.divisor, flag.curve, s.ample);
        if (kap == 1) {
          const Rational vol_val = volume(val, {1});
          if (vol_val != rv.vol) {
            finish(&rep, false, "vol(val body) = " + vol_val.str() + " but vol_{X|C} = " +
                                    rv.vol.str());
            return rep;
          }
        }
        if (nu == 1) {
          const Rational vol_lim = volume(lim, {1});
          if (vol_lim != rv.vol_plus) {
            finish(&rep, false, "vol(lim body) = " + vol_lim.str() + " but vol+_{X|C} = " +
                                    rv.vol_plus.str());
            return rep;
          }
          note << "widths (" << rv.vol << ", " << rv.vol_plus << "); ";
        }
      }
    }
  }
  finish(&rep, true, note.str());
  return rep;
}

// ---------------------------------------------------------------------------
// Nakayama / positive volume subvariety criteria
// ---------------------------------------------------------------------------

CheckReport check_criteria(const Instance& inst) {
  CheckReport rep = make_report("criteria", inst.id);
  if (inst.is_toric()) {
    gate(&rep, "criteria checks use general-point flags (surface instances only)");
    return rep;
  }
  if (!inst.expected.pseudoeffective) {
    gate(&rep, "hypothesis unmet: divisor not pseudoeffective");
    return rep;
  }
  const auto& s = inst.surface_data();
  const int nu = surface::numerical_dim(s.surf, s.divisor);
  const auto zd = surface::zariski_decompose(s.surf, s.divisor);
  const bool big = surface::classify(s.surf, s.divisor).big;
  std::ostringstream note;

  for (std::size_t fi = 0; fi < s.flags.size(); ++fi) {
    const auto& flag = s.flags[fi];
    const QVector c = surface::curve_by_name(s.surf, flag.curve).cls;
    const bool in_supp = surf_ord(zd, flag.curve).sgn() > 0;

    bool lhs = false;  // the flag contains a positive volume subvariety
    if (nu == 2) lhs = big;
    else if (nu == 1) lhs = !in_supp && surface::pairing(s.surf, zd.positive, c).sgn() > 0;
    else lhs = !in_supp;  // Y_2 = general point of C avoids B- iff C does

    const Polytope body = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Lim);
    record_body(&rep, body);
    const bool rhs = contained_in_zero_block(body, 2 - nu) && body.affine_dim() == nu;

    if (lhs != rhs) {
      finish(&rep, false, "criterion mismatch on flag " + flag.curve + ": subvariety side " +
                              (lhs ? "true" : "false") + ", body side " +
                              (rhs ? "true" : "false") + ", body " + poly_str(body));
      return rep;
    }
    if (fi < inst.expected.flag_curve_is_pvs.size() &&
        inst.expected.flag_curve_is_pvs[fi] != lhs) {
      finish(&rep, false, "curated PVS tag disagrees with computation on " + flag.curve);
      return rep;
    }
    note << flag.curve << (lhs ? "+" : "-") << " ";
  }
  finish(&rep, true, note.str());
  return rep;
}

// ---------------------------------------------------------------------------
// Bodies of the positive part
// ---------------------------------------------------------------------------

CheckReport check_positive_part(const Instance& inst) {
  CheckReport rep = make_report("positive_part", inst.id);
  if (!inst.expected.pseudoeffective) {
    gate(&rep, "hypothesis unmet: divisor not pseudoeffective");
    return rep;
  }
  int checked = 0;
  std::ostringstream gates;
  if (inst.is_toric()) {
    const auto& t = inst.toric_data();
    const auto dec = toric::sigma_s_decomposition(t.variety, t.divisor, t.ample);
    for (const auto& flag : t.flags) {
      bool flag_in_supp = false;
      for (int ray : flag.rays_in_order)
        for (const auto& [i, c] : dec.s.negative)
          if (i == ray) flag_in_supp = true;
      if (flag_in_supp) {
        // Record the translate witness instead of silently skipping.
        const Polytope of_d = toric::okounkov_body(t.variety, t.divisor, flag, BodyKind::Val);
        const Polytope of_p =
            toric::okounkov_body(t.variety, dec.s.positive, flag, BodyKind::Val);
        record_body(&rep, of_d);
        record_body(&rep, of_p);
        gates << "flag meets supp N; bodies " << poly_str(of_d) << " vs " << poly_str(of_p)
              << "; ";
        continue;
      }
      const Polytope of_d = toric::okounkov_body(t.variety, t.divisor, flag, BodyKind::Val);
      const Polytope of_p = toric::okounkov_body(t.variety, dec.s.positive, flag, BodyKind::Val);
      record_body(&rep, of_d);
      record_body(&rep, of_p);
      if (!equals(of_d, of_p)) {
        finish(&rep, false, "valuative bodies of D and P_s differ: " + poly_str(of_d) + " vs " +
                                poly_str(of_p));
        return rep;
      }
      ++checked;
    }
  } else {
    const auto& s = inst.surface_data();
    const auto zd = surface::zariski_decompose(s.surf, s.divisor);
    const auto zs = surface::zariski_decompose(s.surf, s.divisor, surface::ZKind::S);
    for (const auto& flag : s.flags) {
      if (surf_ord(zd, flag.curve).sgn() > 0) {
        const Polytope of_d = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Lim);
        const Polytope of_p =
            surface::okounkov_polygon(s.surf, zd.positive, flag, BodyKind::Lim);
        record_body(&rep, of_d);
        record_body(&rep, of_p);
        gates << "flag " << flag.curve << " meets supp N_sigma; translate witness "
              << poly_str(of_d) << " vs " << poly_str(of_p) << "; ";
        continue;
      }
      const Polytope lim_d = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Lim);
      const Polytope lim_p =
          surface::okounkov_polygon(s.surf, zd.positive, flag, BodyKind::Lim);
      const Polytope val_d = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Val);
      const Polytope val_p =
          surface::okounkov_polygon(s.surf, zs.positive, flag, BodyKind::Val);
      record_body(&rep, lim_d);
      record_body(&rep, lim_p);
      record_body(&rep, val_d);
      record_body(&rep, val_p);
      if (!equals(lim_d, lim_p)) {
        finish(&rep, false, "limiting bodies of D and P_sigma differ on flag " + flag.curve);
        return rep;
      }
      if (!equals(val_d, val_p)) {
        finish(&rep, false, "valuative bodies of D and P_s differ on flag " + flag.curve);
        return rep;
      }
      ++checked;
    }
  }
  if (checked == 0) {
    gate(&rep, "hypothesis unmet on all flags: " + gates.str());
    return rep;
  }
  finish(&rep, true, gates.str().empty() ? std::to_string(checked) + " flags checked"
                                         : "partial gating: " + gates.str());
  return rep;
}

// ---------------------------------------------------------------------------
// Zariski decomposition properties
// ---------------------------------------------------------------------------

CheckReport check_zariski(const Instance& inst, std::uint64_t seed) {
  CheckReport rep = make_report("zariski", inst.id);
  if (!inst.expected.pseudoeffective) {
    gate(&rep, "hypothesis unmet: divisor not pseudoeffective");
    return rep;
  }
  std::ostringstream note;
  if (inst.is_toric()) {
    const auto& t = inst.toric_data();
    const auto dec = toric::sigma_s_decomposition(t.variety, t.divisor, t.ample);
    // Idempotence.
    const auto again = toric::sigma_s_decomposition(t.variety, dec.sigma.positive, t.ample);
    if (!again.sigma.negative.empty()) {
      finish(&rep, false, "decomposition of the positive part is not trivial");
      return rep;
    }
    // Cross-model comparison on surfaces.
    if (t.variety.n == 2) {
      const auto model = surface::from_toric(t.variety);
      const auto surf_dec =
          surface::zariski_decompose(model.surface, surface::class_of(model, t.divisor));
      std::map<std::string, Rational> toric_coeffs, surf_coeffs(surf_dec.negative.begin(),
                                                                surf_dec.negative.end());
      for (const auto& [ray, c] : dec.sigma.negative)
        toric_coeffs[model.ray_curve_names[static_cast<std::size_t>(ray)]] = c;
      if (toric_coeffs != surf_coeffs) {
        finish(&rep, false, "toric and lattice-model decompositions disagree");
        return rep;
      }
      note << "cross-model agreement on " << surf_coeffs.size() << " curves; ";
    }
    note << "sigma = s verified on " << t.variety.num_rays() << " rays";
  } else {
    const auto& s = inst.surface_data();
    const auto zd = surface::zariski_decompose(s.surf, s.divisor);
    // The constructor enforces the output invariants; re-derive the defining
    // ones here so the check does not rest on the op's own asserts.
    QVector n(s.surf.rank);
    for (const auto& [name, c] : zd.negative) {
      if (c.sgn() <= 0) {
        finish(&rep, false, "nonpositive coefficient in the negative part");
        return rep;
      }
      n += c * surface::curve_by_name(s.surf, name).cls;
      if (!surface::pairing(s.surf, zd.positive, surface::curve_by_name(s.surf, name).cls)
               .is_zero()) {
        finish(&rep, false, "positive part meets the support");
        return rep;
      }
    }
    if (zd.positive + n != s.divisor) {
      finish(&rep, false, "P + N does not reassemble D");
      return rep;
    }
    for (const auto& g : s.surf.effective_generators)
      if (surface::pairing(s.surf, zd.positive, g).sgn() < 0) {
        finish(&rep, false, "positive part not nef");
        return rep;
      }
    // Idempotence.
    const auto again = surface::zariski_decompose(s.surf, zd.positive);
    if (!again.negative.empty() || again.positive != zd.positive) {
      finish(&rep, false, "decomposition is not idempotent");
      return rep;
    }
    // sigma = s and the good-decomposition equivalence on abundant models.
    if (s.surf.abundant) {
      const auto good = surface::zariski_decompose(s.surf, s.divisor, surface::ZKind::Good);
      if (good.negative != zd.negative) {
        finish(&rep, false, "good decomposition differs from sigma");
        return rep;
      }
      if (!good.positive_semiample) {
        finish(&rep, false, "positive part not semiample under the model assumption");
        return rep;
      }
      note << "good decomposition: sigma = s = good; ";
    }
    // Permutation independence, seeded.
    Rng rng(seed);
    surface::LatticeSurface shuffled = s.surf;
    for (std::size_t i = shuffled.curves.size(); i > 1; --i)
      std::swap(shuffled.curves[i - 1], shuffled.curves[rng.below(i)]);
    const auto zd2 = surface::zariski_decompose(shuffled, s.divisor);
    auto a = zd.negative;
    auto b = zd2.negative;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      finish(&rep, false, "curve order changed the decomposition");
      return rep;
    }
    note << "invariants, idempotence, permutation independence hold";
  }
  finish(&rep, true, note.str());
  return rep;
}

// ---------------------------------------------------------------------------
// Rational simplex shapes
// ---------------------------------------------------------------------------

CheckReport check_simplex(const Instance& inst) {
  CheckReport rep = make_report("simplex", inst.id);
  if (!inst.simplex_spec) {
    gate(&rep, "no simplex expectation on this instance");
    return rep;
  }
  if (inst.is_toric()) {
    gate(&rep, "simplex instances are surface instances");
    return rep;
  }
  const auto& s = inst.surface_data();
  const auto& spec = *inst.simplex_spec;
  const Polytope body =
      surface::okounkov_polygon(s.surf, s.divisor, surface::SurfFlag{spec.flag_curve}, spec.kind);
  record_body(&rep, body);
  std::vector<QVector> expected = spec.expected_vertices;
  std::sort(expected.begin(), expected.end(), lex_less);
  if (body.vertices() != expected) {
    finish(&rep, false, "body " + poly_str(body) + " is not the predicted simplex");
    return rep;
  }
  finish(&rep, true,
         "vertex set matches; general members modeled by class equality plus the "
         "irreducibility declaration");
  return rep;
}

// ---------------------------------------------------------------------------
// Limiting bodies as limits
// ---------------------------------------------------------------------------

CheckReport check_limiting_limit(const Instance& inst) {
  CheckReport rep = make_report("limiting_limit", inst.id);
  if (!inst.expected.pseudoeffective) {
    gate(&rep, "hypothesis unmet: divisor not pseudoeffective");
    return rep;
  }
  const std::vector<Rational> schedule = {Rational(1), Rational(1, 2), Rational(1, 4),
                                          Rational(1, 8)};
  if (inst.is_toric()) {
    const auto& t = inst.toric_data();
    const toric::DivisorQ a = t.ample ? *t.ample : toric::default_ample(t.variety);
    const toric::DivisorQ a2 = t.second_ample ? *t.second_ample : a + toric::default_ample(t.variety);
    for (const auto& flag : t.flags) {
      const Polytope closed = toric::okounkov_body(t.variety, t.divisor, flag, BodyKind::Lim, a);
      record_body(&rep, closed);
      Polytope prev = closed;
      bool first = true;
      for (auto it = schedule.rbegin(); it != schedule.rend(); ++it) {
        const Polytope step =
            toric::okounkov_body(t.variety, t.divisor + *it * a, flag, BodyKind::Big);
        record_body(&rep, step);
        if (!contains(step, closed)) {
          finish(&rep, false, "closed form not inside the eps = " + it->str() + " body");
          return rep;
        }
        if (!first && !contains(step, prev)) {
          finish(&rep, false, "eps-chain is not monotone");
          return rep;
        }
        prev = step;
        first = false;
      }
      const Polytope extrapolated = limit_polytope_at_zero([&](const Rational& eps) {
        return toric::okounkov_body(t.variety, t.divisor + eps * a, flag, BodyKind::Big);
      });
      if (!equals(extrapolated, closed)) {
        finish(&rep, false, "extrapolated limit differs from the closed form");
        return rep;
      }
      const Polytope with_second =
          toric::okounkov_body(t.variety, t.divisor, flag, BodyKind::Lim, a2);
      if (!equals(with_second, closed)) {
        finish(&rep, false, "limiting body depends on the ample class");
        return rep;
      }
    }
  } else {
    const auto& s = inst.surface_data();
    const surface::SurfDivisor a = s.ample ? *s.ample : surface::default_ample(s.surf);
    const surface::SurfDivisor a2 =
        s.second_ample ? *s.second_ample : surface::second_ample(s.surf);
    for (const auto& flag : s.flags) {
      const Polytope closed = surface::okounkov_polygon(s.surf, s.divisor, flag, BodyKind::Lim);
      record_body(&rep, closed);
      Polytope prev = closed;
      bool first = true;
      for (auto it = schedule.rbegin(); it != schedule.rend(); ++it) {
        const Polytope step =
            surface::okounkov_polygon(s.surf, s.divisor + *it * a, flag, BodyKind::Big);
        record_body(&rep, step);
        if (!contains(step, closed)) {
          finish(&rep, false, "closed form not inside the eps = " + it->str() + " body");
          return rep;
        }
        if (!first && !contains(step, prev)) {
          finish(&rep, false, "eps-chain is not monotone");
          return rep;
        }
        prev = step;
        first = false;
      }
      for (const auto& amp : {a, a2}) {
        const Polytope extrapolated = limit_polytope_at_zero([&](const Rational& eps) {
          return surface::okounkov_polygon(s.surf, s.divisor + eps * amp, flag, BodyKind::Big);
        });
        if (!equals(extrapolated, closed)) {
          finish(&rep, false, "extrapolated limit differs from the closed form");
          return rep;
        }
      }
    }
  }
  finish(&rep, true, "chain monotone, extrapolation matches, ample-independent");
  return rep;
}

// ---------------------------------------------------------------------------
// Birational invariance
// ---------------------------------------------------------------------------

CheckReport check_birational(const InstancePair& pair) {
  CheckReport rep = make_report("birational", pair.id);
  if (pair.gated) {
    gate(&rep, pair.gate_reason);
    return rep;
  }
  auto bodies = [&](const Instance& inst, BodyKind kind) {
    std::vector<Polytope> out;
    if (inst.is_toric()) {
      const auto& t = inst.toric_data();
      for (const auto& flag : t.flags)
        out.push_back(toric::okounkov_body(t.variety, t.divisor, flag, kind, t.ample));
    } else {
      const auto& s = inst.surface_data();
      for (const auto& flag : s.flags)
        out.push_back(surface::okounkov_polygon(s.surf, s.divisor, flag, kind));
    }
    return out;
  };
  std::vector<BodyKind> kinds;
  if (pair.first.expected.big) kinds = {BodyKind::Big, BodyKind::Val, BodyKind::Lim};
  else kinds = {BodyKind::Val, BodyKind::Lim};
  for (BodyKind kind : kinds) {
    const auto a = bodies(pair.first, kind);
    const auto b = bodies(pair.second, kind);
    if (a.size() != b.size()) {
      finish(&rep, false, "flag count mismatch");
      return rep;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      record_body(&rep, a[i]);
      record_body(&rep, b[i]);
      if (!equals(a[i], b[i])) {
        finish(&rep, false, "bodies differ: " + poly_str(a[i]) + " vs " + poly_str(b[i]));
        return rep;
      }
    }
  }
  finish(&rep, true, "bodies agree across the birational pair");
  return rep;
}

// ---------------------------------------------------------------------------
// Oracle validation of the closed forms
// ---------------------------------------------------------------------------

CheckReport check_oracle(const Instance& inst) {
  CheckReport rep = make_report("oracle", inst.id);
  if (!inst.oracle_spec) {
    gate(&rep, "no oracle run configured");
    return rep;
  }
  if (!inst.is_toric()) {
    gate(&rep, "oracle runs sample toric sections");
    return rep;
  }
  const auto& t = inst.toric_data();
  const auto& spec = *inst.oracle_spec;

  Polytope target = Polytope::empty(2);
  if (spec.flag.general) {
    const auto model = surface::from_toric(t.variety);
    const std::string curve =
        model.ray_curve_names[static_cast<std::size_t>(spec.flag.curve_ray)];
    target = surface::okounkov_polygon(model.surface, surface::class_of(model, t.divisor),
                                       surface::SurfFlag{curve}, BodyKind::Val);
  } else {
    target = toric::okounkov_body(t.variety, t.divisor, spec.flag.invariant, BodyKind::Val);
  }
  record_body(&rep, target);

  const auto hulls = oracle::sample_body(t.variety, t.divisor, spec.flag, spec.cfg);
  for (const auto& h : hulls) record_body(&rep, h.hull);
  const auto conv = oracle::convergence_report(hulls, target);
  if (!conv.contained_all) {
    std::string where;
    for (const auto& dr : conv.per_degree)
      if (dr.violation) {
        where = " at degree " + std::to_string(dr.degree);
        break;
      }
    finish(&rep, false, "closed-form refuted: sampled valuation outside the body" + where);
    return rep;
  }
  if (conv.final_ratio < spec.min_final_ratio) {
    finish(&rep, false, "volume ratio " + conv.final_ratio.str() + " below the baseline " +
                            spec.min_final_ratio.str());
    return rep;
  }
  std::ostringstream os;
  os << "ratios";
  for (const auto& dr : conv.per_degree) os << " m=" << dr.degree << ":" << dr.ratio.str();
  finish(&rep, true, os.str());
  return rep;
}

// ---------------------------------------------------------------------------
// The curated library
// ---------------------------------------------------------------------------

namespace {

QVector qv(std::initializer_list<long long> xs) {
  std::vector<Rational> e;
  for (long long x : xs) e.emplace_back(x);
  return QVector(std::move(e));
}

toric::DivisorQ dv(std::initializer_list<long long> xs) {
  toric::DivisorQ d;
  for (long long x : xs) d.coeffs.emplace_back(x);
  return d;
}

surface::LatticeSurface bl1p2_model() {
  surface::LatticeSurface s;
  s.rank = 2;
  s.form = QMatrix::from_rows({qv({1, 0}), qv({0, -1})});
  s.curves = {{"E", qv({0, 1})}, {"L", qv({1, -1})}, {"H", qv({1, 0})}};
  s.effective_generators = {qv({0, 1}), qv({1, -1})};
  s.fibrations = {qv({1, -1})};
  s.abundant = true;
  return s;
}

surface::LatticeSurface quadric_model() {
  surface::LatticeSurface s;
  s.rank = 2;
  s.form = QMatrix::from_rows({qv({0, 1}), qv({1, 0})});
  s.curves = {{"f1", qv({1, 0})},
              {"f2", qv({0, 1})},
              {"C11", qv({1, 1})},
              {"C12", qv({1, 2})}};
  s.effective_generators = {qv({1, 0}), qv({0, 1})};
  s.fibrations = {qv({1, 0}), qv({0, 1})};
  s.abundant = true;
  return s;
}

surface::LatticeSurface f2_surface_model() {
  surface::LatticeSurface s;
  s.rank = 2;
  s.form = QMatrix::from_rows({qv({0, 1}), qv({1, -2})});
  s.curves = {{"s", qv({0, 1})}, {"f", qv({1, 0})}, {"s2", qv({2, 1})}};
  s.effective_generators = {qv({0, 1}), qv({1, 0})};
  s.fibrations = {qv({1, 0})};
  s.abundant = true;
  return s;
}

surface::LatticeSurface p2_model() {
  surface::LatticeSurface s;
  s.rank = 1;
  s.form = QMatrix::from_rows({qv({1})});
  s.curves = {{"H", qv({1})}};
  s.effective_generators = {qv({1})};
  s.abundant = true;
  return s;
}

Instance toric_instance(std::string id, std::string note, toric::ToricVariety x,
                        toric::DivisorQ d, std::vector<toric::InvariantFlag> flags,
                        Expected exp) {
  Instance inst;
  inst.id = std::move(id);
  inst.note = std::move(note);
  inst.data = ToricData{std::move(x), std::move(d), std::move(flags), {}, {}};
  inst.expected = exp;
  return inst;
}

Instance surface_instance(std::string id, std::string note, surface::LatticeSurface s,
                          surface::SurfDivisor d, std::vector<surface::SurfFlag> flags,
                          Expected exp) {
  Instance inst;
  inst.id = std::move(id);
  inst.note = std::move(note);
  inst.data = SurfaceData{std::move(s), std::move(d), std::move(flags), {}, {}};
  inst.expected = exp;
  return inst;
}

Expected tags(bool psef, bool big, int kappa, int kappa_nu, std::vector<bool> pvs = {}) {
  Expected e;
  e.pseudoeffective = psef;
  e.big = big;
  e.kappa = kappa;
  e.kappa_nu = kappa_nu;
  e.flag_curve_is_pvs = std::move(pvs);
  return e;
}

}  // namespace

std::vector<Instance> builtin_library() {
  std::vector<Instance> lib;
  const auto p2 = toric::projective_space(2);
  const auto p3 = toric::projective_space(3);
  const auto pp = toric::product_p1_p1();
  const auto f1 = toric::blowup_fixed_point(p2, {0, 1}).variety;
  const auto f2 = toric::hirzebruch(2);
  const auto blp3 = toric::blowup_fixed_point(p3, {0, 1, 2}).variety;

  // --- toric instances ---
  {
    Instance i = toric_instance("t:P2/H", "hyperplane class on the plane", p2, dv({0, 0, 1}),
                                {{{0, 1}}, {{1, 2}}}, tags(true, true, 2, 2));
    OracleSpec os;
    os.flag.invariant = {{0, 1}};
    os.cfg.degrees = {1, 2, 4, 8};
    os.cfg.samples = 32;
    os.cfg.seed = 12345;
    os.min_final_ratio = Rational(1);
    i.oracle_spec = os;
    lib.push_back(std::move(i));
  }
  lib.push_back(toric_instance("t:P2/0", "trivial class", p2, dv({0, 0, 0}), {{{0, 1}}},
                               tags(true, false, 0, 0)));
  lib.push_back(toric_instance("t:P2/K", "sum of the invariant lines", p2, dv({1, 1, 1}),
                               {{{0, 1}}}, tags(true, true, 2, 2)));
  lib.push_back(toric_instance("t:P1xP1/f", "fiber of the first ruling", pp, dv({1, 0, 0, 0}),
                               {{{1, 0}}}, tags(true, false, 1, 1)));
  lib.push_back(toric_instance("t:P1xP1/D11", "type (1,1) polarization", pp, dv({0, 0, 1, 1}),
                               {{{0, 1}}, {{1, 0}}}, tags(true, true, 2, 2)));
  {
    Instance i = toric_instance("t:F1/H+E", "pullback polarization plus the exceptional curve",
                                f1, dv({0, 0, 1, 1}), {{{0, 2}}, {{3, 0}}},
                                tags(true, true, 2, 2));
    OracleSpec os;
    os.flag.general = true;
    os.flag.curve_ray = 3;
    os.flag.x0 = Rational(1);
    os.cfg.degrees = {1, 2, 4, 8};
    os.cfg.samples = 64;
    os.cfg.seed = 12345;
    os.min_final_ratio = Rational(19, 20);
    i.oracle_spec = os;
    lib.push_back(std::move(i));
  }
  {
    Instance i = toric_instance("t:F2/s", "rigid negative section", f2, dv({0, 1, 0, 0}),
                                {{{3, 0}}, {{1, 0}}}, tags(true, false, 0, 0));
    i.expected.flag_designated = {true, false};
    lib.push_back(std::move(i));
  }
  lib.push_back(toric_instance("t:F2/A", "an ample class on the second Hirzebruch surface", f2,
                               dv({0, 0, 1, 1}), {{{0, 1}}, {{3, 0}}}, tags(true, true, 2, 2)));
  lib.push_back(toric_instance("t:P3/H", "hyperplane class in 3-space", p3, dv({0, 0, 0, 1}),
                               {{{0, 1, 2}}, {{1, 2, 3}}}, tags(true, true, 3, 3)));
  lib.push_back(toric_instance("t:P3/K", "sum of the coordinate planes", p3, dv({1, 1, 1, 1}),
                               {{{0, 1, 2}}}, tags(true, true, 3, 3)));
  lib.push_back(toric_instance("t:BlP3/H", "pullback of the hyperplane", blp3,
                               dv({0, 0, 0, 1, 0}), {{{0, 1, 3}}}, tags(true, true, 3, 3)));
  lib.push_back(toric_instance("t:BlP3/2H-E", "blown-up polarization", blp3,
                               dv({0, 0, 0, 2, 1}), {{{0, 1, 3}}}, tags(true, true, 3, 3)));

  // --- surface instances ---
  lib.push_back(surface_instance("s:Bl1P2/H", "pullback of a line", bl1p2_model(), qv({1, 0}),
                                 {{"L"}, {"E"}, {"H"}}, tags(true, true, 2, 2)));
  lib.push_back(surface_instance("s:Bl1P2/H+E", "big with fixed exceptional part",
                                 bl1p2_model(), qv({1, 1}), {{"E"}, {"L"}},
                                 tags(true, true, 2, 2)));
  lib.push_back(surface_instance("s:Bl1P2/E", "the exceptional curve itself", bl1p2_model(),
                                 qv({0, 1}), {{"E"}, {"L"}},
                                 tags(true, false, 0, 0, {false, true})));
  lib.push_back(surface_instance("s:Bl1P2/A", "an anticanonical-style ample class",
                                 bl1p2_model(), qv({2, -1}), {{"E"}, {"L"}},
                                 tags(true, true, 2, 2)));
  {
    Instance i = surface_instance("s:P1xP1/f1", "one ruling class", quadric_model(), qv({1, 0}),
                                  {{"f2"}, {"C12"}, {"f1"}},
                                  tags(true, false, 1, 1, {true, true, false}));
    lib.push_back(std::move(i));
  }
  {
    Instance i = surface_instance("s:P1xP1/D11", "the (1,1) polarization", quadric_model(),
                                  qv({1, 1}), {{"C11"}, {"f1"}}, tags(true, true, 2, 2));
    SimplexSpec spec;
    spec.flag_curve = "C11";
    spec.kind = BodyKind::Big;
    spec.expected_vertices = {qv({0, 0}), qv({1, 0}), qv({0, 2})};
    i.simplex_spec = spec;
    lib.push_back(std::move(i));
  }
  {
    // Same class as the flag curve: the simplex statement for a big divisor.
    Instance i = surface_instance("s:P2m/H", "plane model with a line flag", p2_model(),
                                  qv({1}), {{"H"}}, tags(true, true, 2, 2));
    SimplexSpec spec;
    spec.flag_curve = "H";
    spec.kind = BodyKind::Big;
    spec.expected_vertices = {qv({0, 0}), qv({1, 0}), qv({0, 1})};
    i.simplex_spec = spec;
    lib.push_back(std::move(i));
  }
  {
    Instance i = surface_instance("s:P1xP1/f1-simplex", "degenerate simplex shape",
                                  quadric_model(), qv({1, 0}), {{"f2"}},
                                  tags(true, false, 1, 1, {true}));
    SimplexSpec spec;
    spec.flag_curve = "f2";
    spec.kind = BodyKind::Lim;
    spec.expected_vertices = {qv({0, 0}), qv({0, 1})};
    i.simplex_spec = spec;
    lib.push_back(std::move(i));
  }
  lib.push_back(surface_instance("s:F2/s", "the (-2)-section", f2_surface_model(), qv({0, 1}),
                                 {{"s"}, {"f"}}, tags(true, false, 0, 0, {false, true})));
  lib.push_back(surface_instance("s:F2/f", "the fiber class", f2_surface_model(), qv({1, 0}),
                                 {{"s"}, {"s2"}, {"f"}},
                                 tags(true, false, 1, 1, {true, true, false})));
  lib.push_back(surface_instance("s:F2/A", "a polarization on the Hirzebruch model",
                                 f2_surface_model(), qv({3, 1}), {{"s"}, {"f"}, {"s2"}},
                                 tags(true, true, 2, 2)));

  for (const auto& inst : lib) validate_instance(inst);
  return lib;
}

std::vector<InstancePair> builtin_birational_pairs() {
  std::vector<InstancePair> pairs;
  const auto p2 = toric::projective_space(2);
  const auto p3 = toric::projective_space(3);

  {
    // Blowup of the plane; flag in an untouched cone.
    const auto bl = toric::blowup_fixed_point(p2, {0, 1});
    InstancePair pr;
    pr.id = "b:P2->F1/H";
    pr.first = toric_instance("b:P2/H", "downstairs", p2, dv({0, 0, 1}), {{{1, 2}}},
                              tags(true, true, 2, 2));
    pr.second = toric_instance("b:F1/f*H", "upstairs", bl.variety,
                               toric::pullback(bl, dv({0, 0, 1})), {{{1, 2}}},
                               tags(true, true, 2, 2));
    pairs.push_back(std::move(pr));
  }
  {
    const auto bl = toric::blowup_fixed_point(p3, {0, 1, 2});
    InstancePair pr;
    pr.id = "b:P3->BlP3/K";
    pr.first = toric_instance("b:P3/K", "downstairs", p3, dv({1, 1, 1, 1}), {{{0, 1, 3}}},
                              tags(true, true, 3, 3));
    pr.second = toric_instance("b:BlP3/f*K", "upstairs", bl.variety,
                               toric::pullback(bl, dv({1, 1, 1, 1})), {{{0, 1, 3}}},
                               tags(true, true, 3, 3));
    pairs.push_back(std::move(pr));
  }
  {
    // Lattice-model pair: a line flag on the plane against its strict
    // transform upstairs (the flag avoids the blown-up point).
    InstancePair pr;
    pr.id = "b:P2m->Bl1P2/H";
    pr.first = surface_instance("b:P2m/H", "downstairs", p2_model(), qv({1}), {{"H"}},
                                tags(true, true, 2, 2));
    pr.second = surface_instance("b:Bl1P2/H", "upstairs", bl1p2_model(), qv({1, 0}), {{"H"}},
                                 tags(true, true, 2, 2));
    pairs.push_back(std::move(pr));
  }
  {
    // The line through the blown-up point also works: its strict transform
    // still maps to an admissible flag downstairs.
    InstancePair pr;
    pr.id = "b:P2m->Bl1P2/H-through";
    pr.first = surface_instance("b:P2m/H2", "downstairs", p2_model(), qv({1}), {{"H"}},
                                tags(true, true, 2, 2));
    pr.second = surface_instance("b:Bl1P2/L", "upstairs", bl1p2_model(), qv({1, 0}), {{"L"}},
                                 tags(true, true, 2, 2));
    pairs.push_back(std::move(pr));
  }
  {
    // Gated: the flag cone is exactly the blowup center.
    const auto bl = toric::blowup_fixed_point(p2, {0, 1});
    InstancePair pr;
    pr.id = "b:P2->F1/center";
    pr.first = toric_instance("b:P2/H-center", "downstairs", p2, dv({0, 0, 1}), {{{0, 1}}},
                              tags(true, true, 2, 2));
    pr.second = toric_instance("b:F1/f*H-center", "upstairs", bl.variety,
                               toric::pullback(bl, dv({0, 0, 1})), {{{0, 3}}},
                               tags(true, true, 2, 2));
    pr.gated = true;
    pr.gate_reason = "flag center lies on the blown-up locus";
    pairs.push_back(std::move(pr));
  }
  for (const auto& pr : pairs) {
    validate_instance(pr.first);
    validate_instance(pr.second);
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

SuiteSummary run_suite(const std::vector<Instance>& instances,
                       const std::vector<InstancePair>& pairs, std::uint64_t seed,
                       int random_batch) {
  SuiteSummary sum;
  auto add = [&](CheckReport rep) {
    if (rep.gated) ++sum.gated;
    else if (rep.pass) ++sum.passed;
    else ++sum.failed;
    for (int c : rep.body_vertex_counts) {
      if (c <= 0) throw RefutationError("a produced body has no vertices recorded");
      ++sum.bodies;
    }
    sum.reports.push_back(std::move(rep));
  };

  for (const auto& inst : instances) {
    validate_instance(inst);
    const int n = inst.is_toric() ? inst.toric_data().variety.n : 2;
    for (int k = 1; k < n; ++k) add(check_slicing(inst, k));
    add(check_dim_vol(inst));
    add(check_criteria(inst));
    add(check_positive_part(inst));
    add(check_zariski(inst, seed));
    add(check_simplex(inst));
    add(check_limiting_limit(inst));
    add(check_oracle(inst));
  }
  for (const auto& pr : pairs) add(check_birational(pr));

  // Randomized decomposition batch across the three lattice-surface models.
  const std::vector<surface::LatticeSurface> models = {bl1p2_model(), quadric_model(),
                                                       f2_surface_model()};
  const std::vector<std::string> names = {"Bl1P2", "P1xP1", "F2"};
  Rng rng(seed);
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    CheckReport rep = make_report("zariski_random", "r:" + names[mi]);
    const auto& model = models[mi];
    int done = 0;
    bool ok = true;
    std::string fail;
    while (done * static_cast<int>(models.size()) < random_batch && ok) {
      surface::SurfDivisor d(model.rank);
      for (int i = 0; i < model.rank; ++i)
        d[i] = Rational(rng.int_in(-4, 8), 1 + rng.int_in(0, 3));
      if (!surface::classify(model, d).pseudoeffective) continue;
      try {
        const auto zd = surface::zariski_decompose(model, d);
        QVector nsum(model.rank);
        for (const auto& [name, c] : zd.negative) {
          if (c.sgn() <= 0) throw RefutationError("nonpositive coefficient");
          nsum += c * surface::curve_by_name(model, name).cls;
        }
        if (zd.positive + nsum != d) throw RefutationError("P + N != D");
        const auto again = surface::zariski_decompose(model, zd.positive);
        if (!again.negative.empty()) throw RefutationError("not idempotent");
        const auto zs = surface::zariski_decompose(model, d, surface::ZKind::S);
        auto a = zd.negative, b = zs.negative;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw RefutationError("sigma and s disagree");
        surface::LatticeSurface shuffled = model;
        for (std::size_t i = shuffled.curves.size(); i > 1; --i)
          std::swap(shuffled.curves[i - 1], shuffled.curves[rng.below(i)]);
        const auto zp = surface::zariski_decompose(shuffled, d);
        auto c2 = zp.negative;
        std::sort(c2.begin(), c2.end());
        if (a != c2) throw RefutationError("order dependence");
      } catch (const std::exception& e) {
        ok = false;
        fail = e.what();
      }
      ++done;
      ++sum.random_divisors;
    }
    finish(&rep, ok, ok ? std::to_string(done) + " random divisors" : fail);
    add(std::move(rep));
  }

  // Randomized cross-model batch on the shared toric surfaces.
  {
    CheckReport rep = make_report("cross_model_random", "r:toric-surfaces");
    const std::vector<toric::ToricVariety> xs = {
        toric::projective_space(2), toric::product_p1_p1(),
        toric::blowup_fixed_point(toric::projective_space(2), {0, 1}).variety,
        toric::hirzebruch(2)};
    bool ok = true;
    std::string fail;
    int done = 0;
    for (const auto& x : xs) {
      const auto model = surface::from_toric(x);
      for (int trial = 0; trial < 8 && ok; ++trial) {
        toric::DivisorQ d;
        for (int i = 0; i < x.num_rays(); ++i) d.coeffs.emplace_back(rng.int_in(-2, 4));
        if (toric::section_polytope(x, d).is_empty()) continue;
        try {
          const auto td = toric::sigma_s_decomposition(x, d);
          const auto sd = surface::zariski_decompose(model.surface, surface::class_of(model, d));
          std::map<std::string, Rational> tc, sc(sd.negative.begin(), sd.negative.end());
          for (const auto& [ray, c] : td.sigma.negative)
            tc[model.ray_curve_names[static_cast<std::size_t>(ray)]] = c;
          if (tc != sc) throw RefutationError("coefficient mismatch");
          ++done;
        } catch (const std::exception& e) {
          ok = false;
          fail = e.what();
        }
      }
    }
    finish(&rep, ok, ok ? std::to_string(done) + " shared divisors agree" : fail);
    add(std::move(rep));
  }

  std::sort(sum.reports.begin(), sum.reports.end(),
            [](const CheckReport& a, const CheckReport& b) {
              if (a.instance != b.instance) return a.instance < b.instance;
              return a.check < b.check;
            });
  return sum;
}

}  // namespace oklab::harness
