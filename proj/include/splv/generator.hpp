#pragma once

// Random SPLs for scalability runs. Each feature gets a requirement over
// variables a, b and a design over c, d (two values each); the design is a
// restriction of the requirement under the renaming a->c, b->d, so every
// feature conforms by construction. Neighbouring features are linked by
// equality constraints on both sides. With `inject_bugs` p, each design gains,
// with probability p, a transition on an event its requirement never offers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "splv/spl.hpp"

namespace splv {

struct GenOptions {
  std::size_t count = 1;
  std::uint64_t seed = 1;
  double inject_bugs = 0;
  double link_probability = 0.5;
  std::uint32_t min_states = 3;
  std::uint32_t max_states = 8;
};

struct GeneratedSpl {
  SplManifest manifest;
  /// (file name, content); the manifest file comes last.
  std::vector<std::pair<std::string, std::string>> files;
  /// Names of the features that received a bug.
  std::vector<std::string> bugged;
};

GeneratedSpl generate_spl(const GenOptions& options);

/// Writes every file into `dir` (created if missing); returns the manifest path.
std::filesystem::path write_generated(const GeneratedSpl& g, const std::filesystem::path& dir);

/// Parses the generated models in memory.
Spl generated_to_spl(const GeneratedSpl& g);

}  // namespace splv
