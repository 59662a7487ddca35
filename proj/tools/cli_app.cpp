#include "cli_app.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "oklab/errors.hpp"
#include "oklab/json_io.hpp"
#include "oklab/svg.hpp"

namespace oklab::cli {

namespace {

using io::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GeomError("cannot write " + path);
  out << text;
}

void write_result(const Job& job, const json& j) { write_text(job.out, j.dump(2) + "\n"); }

struct Input {
  bool is_toric = false;
  toric::ToricVariety variety;
  toric::DivisorQ divisor;
  std::vector<toric::InvariantFlag> tflags;
  std::optional<toric::DivisorQ> tample;
  surface::LatticeSurface surf;
  surface::SurfDivisor sdivisor;
  std::vector<surface::SurfFlag> sflags;
  std::optional<surface::SurfDivisor> sample_cls;
  json raw;
};

Input parse_input(const json& j) {
  Input in;
  in.raw = j;
  const std::string type = j.contains("variety")
                               ? j.at("variety").value("type", "")
                               : throw SchemaError("input needs a 'variety' object");
  if (type == "toric") {
    in.is_toric = true;
    in.variety = io::toric_from_json(j.at("variety"));
    const auto val = toric::validate(in.variety);
    if (!val.ok()) {
      std::string msg = "fan fails validation:";
      for (const auto& p : val.problems) msg += " " + p + ";";
      throw SchemaError(msg);
    }
    in.divisor = io::toric_divisor_from_json(j.at("divisor"));
    if (j.contains("flags"))
      for (const auto& f : j.at("flags")) in.tflags.push_back(io::toric_flag_from_json(f));
    if (j.contains("ample")) in.tample = io::toric_divisor_from_json(j.at("ample"));
  } else if (type == "surface") {
    in.surf = io::surface_from_json(j.at("variety"));
    const auto val = surface::validate(in.surf);
    if (!val.ok) {
      std::string msg = "surface model fails validation:";
      for (const auto& p : val.problems) msg += " " + p + ";";
      throw SchemaError(msg);
    }
    in.sdivisor = io::surf_divisor_from_json(j.at("divisor"));
    if (j.contains("flags"))
      for (const auto& f : j.at("flags")) in.sflags.push_back(io::surf_flag_from_json(f));
    if (j.contains("ample")) in.sample_cls = io::surf_divisor_from_json(j.at("ample"));
  } else {
    throw SchemaError("variety type must be 'toric' or 'surface'");
  }
  return in;
}

json kappa_json(int k) {
  return k == toric::kKappaNone ? json("-inf") : json(k);
}

int task_classify(const Job& job) {
  const Input in = parse_input(load_json(job.input));
  json out;
  if (in.is_toric) {
    const auto c = toric::classify(in.variety, in.divisor);
    out["type"] = "toric";
    out["pseudoeffective"] = c.pseudoeffective;
    out["big"] = c.big;
    out["nef"] = c.nef;
    out["semiample"] = c.semiample;
    out["iitaka_dim"] = kappa_json(toric::iitaka_dim(in.variety, in.divisor));
    out["numerical_dim"] = kappa_json(toric::numerical_dim(in.variety, in.divisor));
    out["model_facts"] = json::array({"semiample inferred from nef",
                                      "numerical dimension inferred from the Iitaka dimension "
                                      "(growth-guarded)"});
  } else {
    const auto c = surface::classify(in.surf, in.sdivisor);
    out["type"] = "surface";
    out["pseudoeffective"] = c.pseudoeffective;
    out["big"] = c.big;
    out["nef"] = c.nef;
    out["numerical_dim"] = kappa_json(surface::numerical_dim(in.surf, in.sdivisor));
    if (c.pseudoeffective) out["kappa"] = kappa_json(surface::kappa(in.surf, in.sdivisor));
    if (in.surf.abundant)
      out["model_facts"] =
          json::array({"kappa inherited from the numerical dimension (abundance flag)"});
  }
  write_result(job, out);
  return kExitOk;
}

int task_decompose(const Job& job) {
  const Input in = parse_input(load_json(job.input));
  json out;
  if (in.is_toric) {
    const auto dec = toric::sigma_s_decomposition(in.variety, in.divisor, in.tample);
    auto zd_json = [](const toric::ZDecomp& z) {
      json j;
      j["positive"] = io::to_json(z.positive);
      json neg = json::array();
      for (const auto& [ray, c] : z.negative) {
        json one;
        one["ray"] = ray;
        one["coeff"] = io::to_json(c);
        neg.push_back(std::move(one));
      }
      j["negative"] = std::move(neg);
      return j;
    };
    out["sigma"] = zd_json(dec.sigma);
    out["s"] = zd_json(dec.s);
  } else {
    const auto zd = surface::zariski_decompose(
        in.surf, in.sdivisor, in.surf.abundant ? surface::ZKind::Good : surface::ZKind::Sigma);
    out["P"] = io::to_json(zd.positive);
    json neg = json::array();
    for (const auto& [name, c] : zd.negative) {
      json one;
      one["curve"] = name;
      one["coeff"] = io::to_json(c);
      neg.push_back(std::move(one));
    }
    out["N"] = std::move(neg);
    out["kind"] = zd.kind == surface::ZKind::Good ? "good" : "sigma";
    if (zd.kind == surface::ZKind::Good) out["positive_semiample"] = zd.positive_semiample;
  }
  write_result(job, out);
  return kExitOk;
}

int task_body(const Job& job) {
  const Input in = parse_input(load_json(job.input));
  const BodyKind kind = io::body_kind_from_name(job.kind);
  Polytope body = Polytope::empty(2);
  if (in.is_toric) {
    if (job.flag_index < 0 || job.flag_index >= static_cast<int>(in.tflags.size()))
      throw SchemaError("flag index out of range");
    body = toric::okounkov_body(in.variety, in.divisor,
                                in.tflags[static_cast<std::size_t>(job.flag_index)], kind,
                                in.tample);
  } else {
    if (job.flag_index < 0 || job.flag_index >= static_cast<int>(in.sflags.size()))
      throw SchemaError("flag index out of range");
    body = surface::okounkov_polygon(in.surf, in.sdivisor,
                                     in.sflags[static_cast<std::size_t>(job.flag_index)], kind);
  }
  json out = io::to_json(body);
  out["kind"] = job.kind;
  out["flag"] = job.flag_index;
  if (kind == BodyKind::Lim) {
    // Informational: the bodies of D + eps A along the requested schedule.
    json chain = json::array();
    for (const auto& eps : job.epsilon_schedule) {
      json one;
      one["epsilon"] = io::to_json(eps);
      Polytope step = Polytope::empty(2);
      if (in.is_toric) {
        const toric::DivisorQ a = in.tample ? *in.tample : toric::default_ample(in.variety);
        step = toric::okounkov_body(in.variety, in.divisor + eps * a,
                                    in.tflags[static_cast<std::size_t>(job.flag_index)],
                                    BodyKind::Big);
      } else {
        const surface::SurfDivisor a =
            in.sample_cls ? *in.sample_cls : surface::default_ample(in.surf);
        step = surface::okounkov_polygon(in.surf, in.sdivisor + eps * a,
                                         in.sflags[static_cast<std::size_t>(job.flag_index)],
                                         BodyKind::Big);
      }
      one["body"] = io::to_json(step);
      chain.push_back(std::move(one));
    }
    out["epsilon_chain"] = std::move(chain);
  }
  write_result(job, out);
  if (!job.svg.empty()) {
    if (body.ambient_dim() == 2) write_text(job.svg, svg::render(body));
    else std::cerr << "body is not two-dimensional; no SVG written\n";
  }
  return kExitOk;
}

int task_invariants(const Job& job) {
  const Input in = parse_input(load_json(job.input));
  json out;
  if (in.is_toric) {
    const auto c = toric::classify(in.variety, in.divisor);
    out["pseudoeffective"] = c.pseudoeffective;
    out["big"] = c.big;
    out["nef"] = c.nef;
    out["iitaka_dim"] = kappa_json(toric::iitaka_dim(in.variety, in.divisor));
    if (c.pseudoeffective) {
      json orders = json::array();
      for (int i = 0; i < in.variety.num_rays(); ++i)
        orders.push_back(io::to_json(toric::asymptotic_order(in.variety, in.divisor, i, in.tample)));
      out["asymptotic_orders"] = std::move(orders);
    }
    const auto loci = toric::base_loci(in.variety, in.divisor, in.tample);
    out["stable_base_locus_cones"] = loci.stable;
    out["b_plus_cones"] = loci.plus;
    out["b_minus_cones"] = loci.minus;
  } else {
    const auto c = surface::classify(in.surf, in.sdivisor);
    out["pseudoeffective"] = c.pseudoeffective;
    out["big"] = c.big;
    out["nef"] = c.nef;
    out["numerical_dim"] = kappa_json(surface::numerical_dim(in.surf, in.sdivisor));
    if (c.pseudoeffective) {
      const auto zd = surface::zariski_decompose(in.surf, in.sdivisor);
      out["P"] = io::to_json(zd.positive);
      json neg = json::array();
      for (const auto& [name, coeff] : zd.negative) {
        json one;
        one["curve"] = name;
        one["coeff"] = io::to_json(coeff);
        neg.push_back(std::move(one));
      }
      out["N"] = std::move(neg);
      out["b_minus_divisorial"] = json::array();
      for (const auto& [name, coeff] : zd.negative) out["b_minus_divisorial"].push_back(name);
      if (c.big) {
        const auto loci = surface::base_loci_divisorial(in.surf, in.sdivisor);
        out["b_plus_divisorial"] = loci.plus;
      }
      json mus = json::array();
      for (const auto& curve : in.surf.curves) {
        json one;
        one["curve"] = curve.name;
        one["mu"] = io::to_json(surface::mu(in.surf, in.sdivisor, curve.name));
        mus.push_back(std::move(one));
      }
      out["mu"] = std::move(mus);
    }
  }
  write_result(job, out);
  return kExitOk;
}

int task_check(const Job& job) {
  std::vector<harness::Instance> instances;
  std::vector<harness::InstancePair> pairs;
  std::string source = "builtin";
  std::string dir = job.input;
  if (dir.empty()) {
    if (const char* env = std::getenv("OKLAB_DATA")) dir = env;
  }
  if (!dir.empty()) {
    io::load_library_dir(dir, &instances, &pairs);
    source = dir;
  } else {
    instances = harness::builtin_library();
    pairs = harness::builtin_birational_pairs();
  }
  const auto summary =
      harness::run_suite(instances, pairs, job.seed.value_or(12345), 210);
  json out = io::to_json(summary);
  out["library"] = source;
  write_result(job, out);
  std::cerr << io::summary_table(summary);
  return summary.failed == 0 ? kExitOk : kExitFailure;
}

int task_sample(const Job& job) {
  const json j = load_json(job.input);
  const Input in = parse_input(j);
  if (!in.is_toric) throw HypothesisError("sampling runs on toric inputs");

  oracle::OracleFlag flag;
  oracle::SampleConfig cfg;
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    flag.general = o.value("general", false);
    if (flag.general) {
      flag.curve_ray = o.at("curve_ray").get<int>();
      if (o.contains("x0")) flag.x0 = io::rational_from_json(o.at("x0"));
    } else if (o.contains("cone")) {
      flag.invariant.rays_in_order = o.at("cone").get<std::vector<int>>();
    } else if (!in.tflags.empty()) {
      flag.invariant = in.tflags[0];
    }
    if (o.contains("cfg")) cfg = io::sample_config_from_json(o.at("cfg"));
  } else if (!in.tflags.empty()) {
    flag.invariant = in.tflags[0];
  } else {
    throw SchemaError("sampling needs a flag (input 'flags' or 'oracle')");
  }
  if (job.seed) cfg.seed = *job.seed;

  Polytope target = Polytope::empty(2);
  if (flag.general) {
    const auto model = surface::from_toric(in.variety);
    target = surface::okounkov_polygon(
        model.surface, surface::class_of(model, in.divisor),
        surface::SurfFlag{model.ray_curve_names[static_cast<std::size_t>(flag.curve_ray)]},
        BodyKind::Val);
  } else {
    target = toric::okounkov_body(in.variety, in.divisor, flag.invariant, BodyKind::Val);
  }

  const auto hulls = oracle::sample_body(in.variety, in.divisor, flag, cfg);
  const auto rep = oracle::convergence_report(hulls, target);
  json out;
  out["target"] = io::to_json(target);
  out["report"] = io::to_json(rep);
  out["seed"] = cfg.seed;
  write_result(job, out);
  if (!rep.contained_all) {
    std::cerr << "closed form refuted: a sampled valuation lies outside the body\n";
    return kExitRefuted;
  }
  return kExitOk;
}

int task_render(const Job& job) {
  const json j = load_json(job.input);
  const Polytope p = io::polytope_from_json(j);
  if (p.ambient_dim() != 2)
    throw HypothesisError("render: the polytope is not two-dimensional");
  const std::string path = !job.svg.empty() ? job.svg : job.out;
  write_text(path, svg::render(p));
  return kExitOk;
}

}  // namespace

int run(const Job& job) {
  try {
    if (job.task == "classify") return task_classify(job);
    if (job.task == "decompose") return task_decompose(job);
    if (job.task == "body") return task_body(job);
    if (job.task == "invariants") return task_invariants(job);
    if (job.task == "check") return task_check(job);
    if (job.task == "sample") return task_sample(job);
    if (job.task == "render") return task_render(job);
    throw SchemaError("unknown task '" + job.task + "'");
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis unmet: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const RefutationError& e) {
    std::cerr << "internal refutation: " << e.what() << "\n";
    return kExitRefuted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace oklab::cli
