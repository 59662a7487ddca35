#include <CLI11.hpp>

#include <sstream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"oklab: exact Okounkov bodies, Zariski decompositions and asymptotic "
               "invariants on toric varieties and lattice surface models"};

  oklab::cli::Job job;
  std::string schedule;
  std::uint64_t seed = 0;
  bool seed_set = false;

  app.add_option("--task", job.task,
                 "classify | decompose | body | invariants | check | sample | render")
      ->required();
  app.add_option("--input", job.input, "input JSON (or instance directory for check)");
  app.add_option("--kind", job.kind, "body kind: big | val | lim")->capture_default_str();
  app.add_option("--flag", job.flag_index, "flag index into the input's flag list")
      ->capture_default_str();
  app.add_option("--epsilon-schedule", schedule,
                 "comma-separated rationals, e.g. 1,1/2,1/4,1/8");
  app.add_option("--seed", seed, "seed for randomized runs")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--out", job.out, "results JSON path (default stdout)");
  app.add_option("--svg", job.svg, "SVG output path for two-dimensional bodies");

  CLI11_PARSE(app, argc, argv);

  if (seed_set) job.seed = seed;
  if (!schedule.empty()) {
    job.epsilon_schedule.clear();
    std::stringstream ss(schedule);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        job.epsilon_schedule.push_back(oklab::Rational::from_string(item));
      } catch (const std::exception& e) {
        std::cerr << "schema error: bad epsilon '" << item << "'\n";
        return oklab::cli::kExitSchema;
      }
    }
  }
  if (job.task != "check" && job.input.empty()) {
    std::cerr << "schema error: --input is required for task " << job.task << "\n";
    return oklab::cli::kExitSchema;
  }
  return oklab::cli::run(job);
}
