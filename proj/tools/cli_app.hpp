#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oklab/rational.hpp"

namespace oklab::cli {

// One invocation of the command-line front end.
struct Job {
  std::string task;  // classify | decompose | body | invariants | check | sample | render
  std::string input;
  std::string kind = "big";        // body flavor
  int flag_index = 0;              // which flag of the input to use
  std::vector<Rational> epsilon_schedule = {Rational(1), Rational(1, 2), Rational(1, 4),
                                            Rational(1, 8)};
  std::optional<std::uint64_t> seed;
  std::string out;  // results JSON path ("" = stdout)
  std::string svg;  // SVG path for plane bodies ("" = none)
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // a non-gated check failed
inline constexpr int kExitSchema = 2;      // malformed input or options
inline constexpr int kExitHypothesis = 3;  // a required hypothesis is unmet
inline constexpr int kExitRefuted = 4;     // an internal cross-check was refuted

// Runs the job, writing artifacts as requested; returns the exit code.
// Diagnostics go to stderr, results to --out or stdout.
int run(const Job& job);

}  // namespace oklab::cli
