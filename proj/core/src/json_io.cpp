#include "oklab/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "oklab/errors.hpp"

namespace oklab::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  throw SchemaError("rational must be a string \"p/q\" or an integer");
}

json to_json(const QVector& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(to_json(v[i]));
  return a;
}

QVector qvector_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("vector must be an array");
  std::vector<Rational> e;
  for (const auto& x : j) e.push_back(rational_from_json(x));
  return QVector(std::move(e));
}

json to_json(const Polytope& p) {
  json j;
  j["ambient_dim"] = p.ambient_dim();
  json verts = json::array();
  for (const auto& v : p.vertices()) verts.push_back(to_json(v));
  j["vertices"] = std::move(verts);
  json hs = json::array();
  for (const auto& h : p.halfspaces()) {
    json one;
    one["normal"] = to_json(h.normal);
    one["offset"] = to_json(h.offset);
    hs.push_back(std::move(one));
  }
  j["halfspaces"] = std::move(hs);
  return j;
}

Polytope polytope_from_json(const json& j) {
  const int dim = field(j, "ambient_dim").get<int>();
  if (j.contains("vertices") && !j.at("vertices").empty()) {
    std::vector<QVector> pts;
    for (const auto& v : j.at("vertices")) pts.push_back(qvector_from_json(v));
    return Polytope::hull(dim, pts);
  }
  if (j.contains("halfspaces") && !j.at("halfspaces").empty()) {
    std::vector<Halfspace> hs;
    for (const auto& h : j.at("halfspaces"))
      hs.emplace_back(qvector_from_json(field(h, "normal")),
                      rational_from_json(field(h, "offset")));
    return Polytope::from_halfspaces(dim, hs);
  }
  return Polytope::empty(dim);
}

json to_json(const toric::ToricVariety& x) {
  json j;
  j["type"] = "toric";
  j["rays"] = x.rays;
  j["max_cones"] = x.max_cones;
  return j;
}

toric::ToricVariety toric_from_json(const json& j) {
  if (field(j, "type").get<std::string>() != "toric")
    throw SchemaError("expected a toric variety");
  toric::ToricVariety x;
  x.rays = field(j, "rays").get<std::vector<std::vector<long long>>>();
  x.max_cones = field(j, "max_cones").get<std::vector<std::vector<int>>>();
  if (x.rays.empty()) throw SchemaError("toric variety without rays");
  x.n = static_cast<int>(x.rays[0].size());
  return x;
}

json to_json(const toric::DivisorQ& d) {
  json j;
  json coeffs = json::array();
  for (const auto& c : d.coeffs) coeffs.push_back(to_json(c));
  j["coeffs"] = std::move(coeffs);
  return j;
}

toric::DivisorQ toric_divisor_from_json(const json& j) {
  toric::DivisorQ d;
  for (const auto& c : field(j, "coeffs")) d.coeffs.push_back(rational_from_json(c));
  return d;
}

json to_json(const toric::InvariantFlag& f) {
  json j;
  j["cone"] = f.rays_in_order;
  return j;
}

toric::InvariantFlag toric_flag_from_json(const json& j) {
  toric::InvariantFlag f;
  f.rays_in_order = field(j, "cone").get<std::vector<int>>();
  return f;
}

json to_json(const surface::LatticeSurface& s) {
  json j;
  j["type"] = "surface";
  j["rank"] = s.rank;
  json q = json::array();
  for (int r = 0; r < s.rank; ++r) {
    json row = json::array();
    for (int c = 0; c < s.rank; ++c) row.push_back(to_json(s.form.at(r, c)));
    q.push_back(std::move(row));
  }
  j["Q"] = std::move(q);
  json curves = json::array();
  for (const auto& c : s.curves) {
    json one;
    one["name"] = c.name;
    one["class"] = to_json(c.cls);
    curves.push_back(std::move(one));
  }
  j["curves"] = std::move(curves);
  json gens = json::array();
  for (const auto& g : s.effective_generators) gens.push_back(to_json(g));
  j["effective_generators"] = std::move(gens);
  json fibs = json::array();
  for (const auto& f : s.fibrations) {
    json one;
    one["F"] = to_json(f);
    fibs.push_back(std::move(one));
  }
  j["fibrations"] = std::move(fibs);
  j["abundant"] = s.abundant;
  return j;
}

surface::LatticeSurface surface_from_json(const json& j) {
  if (field(j, "type").get<std::string>() != "surface")
    throw SchemaError("expected a lattice surface");
  surface::LatticeSurface s;
  s.rank = field(j, "rank").get<int>();
  const auto& q = field(j, "Q");
  if (!q.is_array() || static_cast<int>(q.size()) != s.rank)
    throw SchemaError("intersection form has wrong shape");
  s.form = QMatrix(s.rank, s.rank);
  for (int r = 0; r < s.rank; ++r)
    for (int c = 0; c < s.rank; ++c) s.form.at(r, c) = rational_from_json(q.at(r).at(c));
  for (const auto& c : field(j, "curves"))
    s.curves.push_back({field(c, "name").get<std::string>(),
                        qvector_from_json(field(c, "class"))});
  for (const auto& g : field(j, "effective_generators"))
    s.effective_generators.push_back(qvector_from_json(g));
  if (j.contains("fibrations"))
    for (const auto& f : j.at("fibrations"))
      s.fibrations.push_back(qvector_from_json(field(f, "F")));
  s.abundant = j.value("abundant", false);
  return s;
}

json surf_divisor_to_json(const surface::SurfDivisor& d) {
  json j;
  j["class"] = to_json(d);
  return j;
}

surface::SurfDivisor surf_divisor_from_json(const json& j) {
  return qvector_from_json(field(j, "class"));
}

json to_json(const surface::SurfFlag& f) {
  json j;
  j["curve"] = f.curve;
  j["point"] = "general";
  return j;
}

surface::SurfFlag surf_flag_from_json(const json& j) {
  if (j.contains("point") && j.at("point").get<std::string>() != "general")
    throw SchemaError("only general flag points are supported");
  return surface::SurfFlag{field(j, "curve").get<std::string>()};
}

json to_json(const oracle::SampleConfig& cfg) {
  json j;
  j["degrees"] = cfg.degrees;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["pool"] = cfg.pool;
  return j;
}

oracle::SampleConfig sample_config_from_json(const json& j) {
  oracle::SampleConfig cfg;
  if (j.contains("degrees")) cfg.degrees = j.at("degrees").get<std::vector<int>>();
  cfg.samples = j.value("samples", cfg.samples);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.pool = j.value("pool", cfg.pool);
  return cfg;
}

json to_json(const oracle::ConvergenceReport& rep) {
  json j;
  j["contained"] = rep.contained_all;
  j["monotone"] = rep.monotone;
  j["final_ratio"] = to_json(rep.final_ratio);
  json per = json::array();
  for (const auto& d : rep.per_degree) {
    json one;
    one["degree"] = d.degree;
    one["contained"] = d.contained;
    one["ratio"] = to_json(d.ratio);
    if (d.violation) one["violation"] = to_json(*d.violation);
    per.push_back(std::move(one));
  }
  j["per_degree"] = std::move(per);
  return j;
}

std::string body_kind_name(BodyKind k) {
  switch (k) {
    case BodyKind::Big: return "big";
    case BodyKind::Val: return "val";
    case BodyKind::Lim: return "lim";
  }
  return "big";
}

BodyKind body_kind_from_name(const std::string& name) {
  if (name == "big") return BodyKind::Big;
  if (name == "val") return BodyKind::Val;
  if (name == "lim") return BodyKind::Lim;
  throw SchemaError("unknown body kind '" + name + "' (expected big|val|lim)");
}

namespace {

json expected_to_json(const harness::Expected& e) {
  json j;
  j["pseudoeffective"] = e.pseudoeffective;
  j["big"] = e.big;
  j["kappa"] = e.kappa == toric::kKappaNone ? json("-inf") : json(e.kappa);
  j["kappa_nu"] = e.kappa_nu == toric::kKappaNone ? json("-inf") : json(e.kappa_nu);
  if (!e.flag_curve_is_pvs.empty()) j["flag_curve_is_pvs"] = e.flag_curve_is_pvs;
  if (!e.flag_designated.empty()) j["flag_designated"] = e.flag_designated;
  return j;
}

int kappa_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return toric::kKappaNone;
    throw SchemaError("bad kappa value");
  }
  return j.get<int>();
}

harness::Expected expected_from_json(const json& j) {
  harness::Expected e;
  e.pseudoeffective = field(j, "pseudoeffective").get<bool>();
  e.big = field(j, "big").get<bool>();
  e.kappa = kappa_from_json(field(j, "kappa"));
  e.kappa_nu = kappa_from_json(field(j, "kappa_nu"));
  if (j.contains("flag_curve_is_pvs"))
    e.flag_curve_is_pvs = j.at("flag_curve_is_pvs").get<std::vector<bool>>();
  if (j.contains("flag_designated"))
    e.flag_designated = j.at("flag_designated").get<std::vector<bool>>();
  return e;
}

}  // namespace

json to_json(const harness::Instance& inst) {
  json j;
  j["id"] = inst.id;
  j["note"] = inst.note;
  j["expected"] = expected_to_json(inst.expected);
  if (inst.is_toric()) {
    const auto& t = inst.toric_data();
    j["variety"] = to_json(t.variety);
    j["divisor"] = to_json(t.divisor);
    json flags = json::array();
    for (const auto& f : t.flags) flags.push_back(to_json(f));
    j["flags"] = std::move(flags);
    if (t.ample) j["ample"] = to_json(*t.ample);
    if (t.second_ample) j["second_ample"] = to_json(*t.second_ample);
  } else {
    const auto& s = inst.surface_data();
    j["variety"] = to_json(s.surf);
    j["divisor"] = surf_divisor_to_json(s.divisor);
    json flags = json::array();
    for (const auto& f : s.flags) flags.push_back(to_json(f));
    j["flags"] = std::move(flags);
    if (s.ample) j["ample"] = surf_divisor_to_json(*s.ample);
    if (s.second_ample) j["second_ample"] = surf_divisor_to_json(*s.second_ample);
  }
  if (inst.oracle_spec) {
    const auto& os = *inst.oracle_spec;
    json o;
    o["general"] = os.flag.general;
    if (os.flag.general) {
      o["curve_ray"] = os.flag.curve_ray;
      if (os.flag.x0) o["x0"] = to_json(*os.flag.x0);
    } else {
      o["cone"] = os.flag.invariant.rays_in_order;
    }
    o["cfg"] = to_json(os.cfg);
    o["min_final_ratio"] = to_json(os.min_final_ratio);
    j["oracle"] = std::move(o);
  }
  if (inst.simplex_spec) {
    const auto& sp = *inst.simplex_spec;
    json s;
    s["curve"] = sp.flag_curve;
    s["kind"] = body_kind_name(sp.kind);
    json verts = json::array();
    for (const auto& v : sp.expected_vertices) verts.push_back(to_json(v));
    s["vertices"] = std::move(verts);
    j["simplex"] = std::move(s);
  }
  return j;
}

harness::Instance instance_from_json(const json& j) {
  harness::Instance inst;
  inst.id = field(j, "id").get<std::string>();
  inst.note = j.value("note", "");
  inst.expected = expected_from_json(field(j, "expected"));
  const std::string type = field(field(j, "variety"), "type").get<std::string>();
  if (type == "toric") {
    harness::ToricData t;
    t.variety = toric_from_json(field(j, "variety"));
    t.divisor = toric_divisor_from_json(field(j, "divisor"));
    for (const auto& f : field(j, "flags")) t.flags.push_back(toric_flag_from_json(f));
    if (j.contains("ample")) t.ample = toric_divisor_from_json(j.at("ample"));
    if (j.contains("second_ample"))
      t.second_ample = toric_divisor_from_json(j.at("second_ample"));
    inst.data = std::move(t);
  } else if (type == "surface") {
    harness::SurfaceData s;
    s.surf = surface_from_json(field(j, "variety"));
    s.divisor = surf_divisor_from_json(field(j, "divisor"));
    for (const auto& f : field(j, "flags")) s.flags.push_back(surf_flag_from_json(f));
    if (j.contains("ample")) s.ample = surf_divisor_from_json(j.at("ample"));
    if (j.contains("second_ample"))
      s.second_ample = surf_divisor_from_json(j.at("second_ample"));
    inst.data = std::move(s);
  } else {
    throw SchemaError("unknown variety type '" + type + "'");
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    harness::OracleSpec os;
    os.flag.general = field(o, "general").get<bool>();
    if (os.flag.general) {
      os.flag.curve_ray = field(o, "curve_ray").get<int>();
      if (o.contains("x0")) os.flag.x0 = rational_from_json(o.at("x0"));
    } else {
      os.flag.invariant.rays_in_order = field(o, "cone").get<std::vector<int>>();
    }
    os.cfg = sample_config_from_json(field(o, "cfg"));
    os.min_final_ratio = rational_from_json(field(o, "min_final_ratio"));
    inst.oracle_spec = std::move(os);
  }
  if (j.contains("simplex")) {
    const auto& s = j.at("simplex");
    harness::SimplexSpec sp;
    sp.flag_curve = field(s, "curve").get<std::string>();
    sp.kind = body_kind_from_name(field(s, "kind").get<std::string>());
    for (const auto& v : field(s, "vertices")) sp.expected_vertices.push_back(qvector_from_json(v));
    inst.simplex_spec = std::move(sp);
  }
  return inst;
}

json to_json(const harness::InstancePair& pair) {
  json j;
  j["pair"] = true;
  j["id"] = pair.id;
  j["first"] = to_json(pair.first);
  j["second"] = to_json(pair.second);
  j["gated"] = pair.gated;
  if (!pair.gate_reason.empty()) j["gate_reason"] = pair.gate_reason;
  return j;
}

harness::InstancePair instance_pair_from_json(const json& j) {
  harness::InstancePair pair;
  pair.id = field(j, "id").get<std::string>();
  pair.first = instance_from_json(field(j, "first"));
  pair.second = instance_from_json(field(j, "second"));
  pair.gated = j.value("gated", false);
  pair.gate_reason = j.value("gate_reason", "");
  return pair;
}

json to_json(const harness::CheckReport& rep) {
  json j;
  j["check"] = rep.check;
  j["instance"] = rep.instance;
  j["status"] = rep.gated ? "gated" : (rep.pass ? "pass" : "fail");
  j["detail"] = rep.detail;
  j["body_vertex_counts"] = rep.body_vertex_counts;
  return j;
}

json to_json(const harness::SuiteSummary& sum) {
  json j;
  j["passed"] = sum.passed;
  j["failed"] = sum.failed;
  j["gated"] = sum.gated;
  j["bodies"] = sum.bodies;
  j["random_divisors"] = sum.random_divisors;
  json reports = json::array();
  for (const auto& r : sum.reports) reports.push_back(to_json(r));
  j["reports"] = std::move(reports);
  return j;
}

std::string summary_table(const harness::SuiteSummary& sum) {
  std::ostringstream os;
  std::size_t iw = 8, cw = 5;
  for (const auto& r : sum.reports) {
    iw = std::max(iw, r.instance.size());
    cw = std::max(cw, r.check.size());
  }
  os << std::left << std::setw(static_cast<int>(iw) + 2) << "instance"
     << std::setw(static_cast<int>(cw) + 2) << "check" << std::setw(8) << "status"
     << "detail\n";
  for (const auto& r : sum.reports) {
    os << std::left << std::setw(static_cast<int>(iw) + 2) << r.instance
       << std::setw(static_cast<int>(cw) + 2) << r.check << std::setw(8)
       << (r.gated ? "gated" : (r.pass ? "pass" : "FAIL")) << r.detail << "\n";
  }
  os << "passed " << sum.passed << ", failed " << sum.failed << ", gated " << sum.gated
     << ", bodies " << sum.bodies << ", random divisors " << sum.random_divisors << "\n";
  return os.str();
}

void load_library_dir(const std::string& dir, std::vector<harness::Instance>* instances,
                      std::vector<harness::InstancePair>* pairs) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw SchemaError("instance library is not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read " + path.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw SchemaError(path.string() + ": " + e.what());
    }
    if (j.value("pair", false)) pairs->push_back(instance_pair_from_json(j));
    else instances->push_back(instance_from_json(j));
  }
}

}  // namespace oklab::io
