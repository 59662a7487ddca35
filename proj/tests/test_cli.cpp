#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "oklab/json_io.hpp"
#include "oklab/svg.hpp"

using namespace oklab;
namespace fs = std::filesystem;

namespace {

QVector qv(std::initializer_list<long long> xs) {
  std::vector<Rational> e;
  for (long long x : xs) e.emplace_back(x);
  return QVector(std::move(e));
}

fs::path tmp_dir() {
  const fs::path dir = fs::temp_directory_path() / "oklab_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = tmp_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kP2H = R"({
  "variety": {"type": "toric", "rays": [[1,0],[0,1],[-1,-1]], "max_cones": [[0,1],[0,2],[1,2]]},
  "divisor": {"coeffs": ["0","0","1"]},
  "flags": [{"cone": [0,1]}]
})";

const char* kBl1P2 = R"({
  "variety": {"type": "surface", "rank": 2, "Q": [[1,0],[0,-1]],
              "curves": [{"name":"E","class":[0,1]},{"name":"L","class":[1,-1]},{"name":"H","class":[1,0]}],
              "effective_generators": [[0,1],[1,-1]],
              "fibrations": [{"F":[1,-1]}],
              "abundant": true},
  "divisor": {"class": ["1","1"]},
  "flags": [{"curve": "E", "point": "general"}, {"curve": "L", "point": "general"}]
})";

}  // namespace

TEST_CASE("polytope json round trip") {
  const Polytope p = Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})});
  const io::json j = io::to_json(p);
  const Polytope q = io::polytope_from_json(j);
  CHECK(equals(p, q));
  CHECK(io::to_json(q) == j);

  // From the H-representation alone.
  io::json h = j;
  h["vertices"] = io::json::array();
  CHECK(equals(io::polytope_from_json(h), p));

  CHECK(io::polytope_from_json({{"ambient_dim", 3}}).is_empty());
}

TEST_CASE("rational json accepts integers and strings") {
  CHECK(io::rational_from_json(io::json(5)) == Rational(5));
  CHECK(io::rational_from_json(io::json("2/3")) == Rational(2, 3));
  CHECK_THROWS_AS(io::rational_from_json(io::json(1.5)), SchemaError);
}

TEST_CASE("instance library round trips and matches the shipped files") {
  const auto lib = harness::builtin_library();
  for (const auto& inst : lib) {
    const io::json j = io::to_json(inst);
    const auto back = io::instance_from_json(j);
    harness::validate_instance(back);
    CHECK(io::to_json(back) == j);
  }
  const auto pairs = harness::builtin_birational_pairs();
  for (const auto& pr : pairs) {
    const io::json j = io::to_json(pr);
    CHECK(io::to_json(io::instance_pair_from_json(j)) == j);
  }

  std::vector<harness::Instance> loaded;
  std::vector<harness::InstancePair> loaded_pairs;
  io::load_library_dir(std::string(OKLAB_SOURCE_DIR) + "/data/instances", &loaded,
                       &loaded_pairs);
  REQUIRE(loaded.size() == lib.size());
  REQUIRE(loaded_pairs.size() == pairs.size());
  std::map<std::string, io::json> by_id;
  for (const auto& inst : lib) by_id[inst.id] = io::to_json(inst);
  for (const auto& inst : loaded) {
    REQUIRE(by_id.count(inst.id));
    CHECK(io::to_json(inst) == by_id[inst.id]);
  }
}

TEST_CASE("svg rendering is deterministic and labeled") {
  const Polytope tri = Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})});
  const std::string a = svg::render(tri);
  const std::string b = svg::render(tri);
  CHECK(a == b);
  CHECK(a.find("<polygon") != std::string::npos);
  CHECK(a.find("(1, 0)") != std::string::npos);

  const Polytope seg = Polytope::hull(2, {qv({0, 0}), QVector{Rational(0), Rational(1, 2)}});
  const std::string s = svg::render(seg);
  CHECK(s.find("<line") != std::string::npos);
  CHECK(s.find("(0, 1/2)") != std::string::npos);

  const Polytope pt = Polytope::hull(2, {qv({2, 3})});
  CHECK(svg::render(pt).find("<circle") != std::string::npos);

  CHECK_THROWS_AS(svg::render(Polytope::hull(1, {qv({0})})), GeomError);
}

TEST_CASE("cli classify and body") {
  const auto input = write_file("p2h.json", kP2H);
  cli::Job job;
  job.task = "classify";
  job.input = input.string();
  job.out = (tmp_dir() / "classify.json").string();
  CHECK(cli::run(job) == cli::kExitOk);
  const auto j = io::json::parse(read_file(job.out));
  CHECK(j.at("big") == true);
  CHECK(j.at("iitaka_dim") == 2);

  cli::Job body;
  body.task = "body";
  body.input = input.string();
  body.kind = "big";
  body.out = (tmp_dir() / "body.json").string();
  body.svg = (tmp_dir() / "body.svg").string();
  CHECK(cli::run(body) == cli::kExitOk);
  const auto bj = io::json::parse(read_file(body.out));
  CHECK(bj.at("vertices").size() == 3);
  CHECK(read_file(body.svg).find("<svg") == 0);

  // Byte-identical rerun.
  cli::Job again = body;
  again.out = (tmp_dir() / "body2.json").string();
  again.svg = (tmp_dir() / "body2.svg").string();
  CHECK(cli::run(again) == cli::kExitOk);
  CHECK(read_file(body.out) == read_file(again.out));
  CHECK(read_file(body.svg) == read_file(again.svg));

  // Results JSON re-parses into the same polytope.
  const Polytope p = io::polytope_from_json(bj);
  CHECK(equals(p, Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})})));
}

TEST_CASE("cli decompose on the surface model") {
  const auto input = write_file("bl1p2.json", kBl1P2);
  cli::Job job;
  job.task = "decompose";
  job.input = input.string();
  job.out = (tmp_dir() / "dec.json").string();
  CHECK(cli::run(job) == cli::kExitOk);
  const auto j = io::json::parse(read_file(job.out));
  CHECK(j.at("P") == io::json::parse(R"(["1","0"])"));
  CHECK(j.at("N").size() == 1);
  CHECK(j.at("N").at(0).at("curve") == "E");
  CHECK(j.at("N").at(0).at("coeff") == "1");
}

TEST_CASE("cli exit codes") {
  // Schema violation.
  const auto bad = write_file("bad.json", "{ not json");
  cli::Job job;
  job.task = "classify";
  job.input = bad.string();
  CHECK(cli::run(job) == cli::kExitSchema);

  cli::Job unknown;
  unknown.task = "florp";
  unknown.input = bad.string();
  CHECK(cli::run(unknown) == cli::kExitSchema);

  // Hypothesis unmet: big body of a non-big divisor.
  const auto fiber = write_file("fiber.json", R"({
    "variety": {"type":"toric","rays":[[1,0],[0,1],[-1,0],[0,-1]],
                "max_cones":[[0,1],[1,2],[2,3],[0,3]]},
    "divisor": {"coeffs":["1","0","0","0"]},
    "flags": [{"cone":[0,1]}]
  })");
  cli::Job body;
  body.task = "body";
  body.input = fiber.string();
  body.kind = "big";
  body.out = (tmp_dir() / "nope.json").string();
  CHECK(cli::run(body) == cli::kExitHypothesis);

  // Render refuses higher-dimensional data.
  const auto seg3 = write_file("seg3.json",
                               io::to_json(Polytope::hull(3, {qv({0, 0, 0}), qv({1, 0, 0})}))
                                   .dump());
  cli::Job render;
  render.task = "render";
  render.input = seg3.string();
  render.out = (tmp_dir() / "seg3.svg").string();
  CHECK(cli::run(render) == cli::kExitHypothesis);
}

TEST_CASE("cli sample validates the closed form") {
  const auto input = write_file("p2h_sample.json", kP2H);
  cli::Job job;
  job.task = "sample";
  job.input = input.string();
  job.seed = 12345;
  job.out = (tmp_dir() / "sample.json").string();
  CHECK(cli::run(job) == cli::kExitOk);
  const auto j = io::json::parse(read_file(job.out));
  CHECK(j.at("report").at("contained") == true);
  CHECK(j.at("report").at("final_ratio") == "1");
}

TEST_CASE("cli lim body carries the requested epsilon chain") {
  const auto input = write_file("fiber2.json", R"({
    "variety": {"type":"toric","rays":[[1,0],[0,1],[-1,0],[0,-1]],
                "max_cones":[[0,1],[1,2],[2,3],[0,3]]},
    "divisor": {"coeffs":["1","0","0","0"]},
    "flags": [{"cone":[1,0]}]
  })");
  cli::Job job;
  job.task = "body";
  job.input = input.string();
  job.kind = "lim";
  job.epsilon_schedule = {Rational(1, 2), Rational(1, 4)};
  job.out = (tmp_dir() / "lim.json").string();
  CHECK(cli::run(job) == cli::kExitOk);
  const auto j = io::json::parse(read_file(job.out));
  REQUIRE(j.at("epsilon_chain").size() == 2);
  CHECK(j.at("epsilon_chain").at(0).at("epsilon") == "1/2");
  // The chain members contain the limiting body.
  const Polytope lim = io::polytope_from_json(j);
  for (const auto& step : j.at("epsilon_chain"))
    CHECK(contains(io::polytope_from_json(step.at("body")), lim));
}

TEST_CASE("cli render from a polytope file") {
  const Polytope p = Polytope::hull(2, {qv({0, 0}), qv({2, 0}), qv({0, 3})});
  const auto input = write_file("tri.json", io::to_json(p).dump());
  cli::Job job;
  job.task = "render";
  job.input = input.string();
  job.svg = (tmp_dir() / "tri.svg").string();
  CHECK(cli::run(job) == cli::kExitOk);
  CHECK(read_file(job.svg).find("<polygon") != std::string::npos);
}
