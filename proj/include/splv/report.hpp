#pragma once

// Verification reports: a text table for people and a line-oriented key=value
// form for tools. Both are rendered from the same Report value, and the key=value
// form parses back into it.
//
// Key=value schema (one `key=value` per line, `#` comments, order as written):
//
//   format=splv-report-1
//   name=<spl or feature name>
//   feature.<i>.name / .design_variants / .requirement_configs / .mapping_pairs
//   feature.<i>.failing=<cfg>;<cfg>;...      (empty when the feature conforms)
//   feature.<i>.seconds=<float>
//   spl=yes|no                                (summary present)
//   spl.checked=yes|no                        (no: a feature failed, step skipped)
//   spl.verdict=conforms|non-conforming
//   spl.witness=<cfg>+<cfg>...                (empty when conforming)
//   spl.disagreement=yes|no
//   spl.masked=yes|no                         (composite conforms, mappings do not)
//   mode.<j>.name=qbf|monolithic|enumerate
//   mode.<j>.verdict / .witness / .seconds / .refinements / .sat_calls / .clauses / .variables / .components

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "splv/spl.hpp"

namespace splv {

struct Report {
  struct FeatureRow {
    std::string name;
    std::size_t design_variants = 0;
    std::size_t requirement_configs = 0;
    std::size_t mapping_pairs = 0;
    std::vector<std::string> failing;
    double seconds = 0;
    bool operator==(const FeatureRow&) const = default;
  };
  struct ModeRow {
    std::string name;
    std::string verdict;
    std::string witness;
    double seconds = 0;
    std::uint64_t refinements = 0;
    std::uint64_t sat_calls = 0;
    std::uint64_t clauses = 0;
    std::uint64_t variables = 0;
    std::uint64_t components = 0;
    bool operator==(const ModeRow&) const = default;
  };

  std::string name;
  std::vector<FeatureRow> features;
  bool has_spl = false;
  bool spl_checked = false;
  std::string verdict;
  std::string witness;
  bool disagreement = false;
  bool masked = false;
  std::vector<ModeRow> modes;

  bool operator==(const Report&) const = default;
};

Report make_report(const FeatureResult& r);
Report make_report(const SplResult& r, const Spl& spl);

std::string render_kv(const Report& r);
std::string render_table(const Report& r);
/// Throws ParseError on unknown keys or malformed values.
Report parse_kv(std::string_view text, const std::string& source = "<report>");

}  // namespace splv
