#pragma once

// SPL manifests and the whole-product-line conformance check.
//
//   spl Name {
//     feature DL req "dl_req.fsmv" des "dl_des.fsmv";
//     req_constraint DL.Enable = Enable => DU.Enable = Enable;
//     des_constraint ...;
//   }
//
// Paths are relative to the manifest's directory. Constraints use qualified
// names `Feature.var`.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splv/containment.hpp"
#include "splv/qbf.hpp"

namespace splv {

struct ManifestFeature {
  std::string name;
  std::string requirement;  // path as written
  std::string design;

  bool operator==(const ManifestFeature&) const = default;
};

struct SplManifest {
  std::string name;
  std::vector<ManifestFeature> features;
  std::vector<Predicate> req_constraints;
  std::vector<Predicate> des_constraints;
  std::filesystem::path base;  // directory the feature paths are relative to

  bool operator==(const SplManifest& o) const {
    return name == o.name && features == o.features && req_constraints == o.req_constraints &&
           des_constraints == o.des_constraints;
  }
};

SplManifest parse_manifest(std::string_view text, const std::string& source = "<manifest>",
                           const std::filesystem::path& base = {});
std::string print_manifest(const SplManifest& m);
SplManifest load_manifest(const std::filesystem::path& path);

struct SplFeature {
  std::string name;
  FsmvMachine requirement;
  FsmvMachine design;
};

struct Spl {
  SplManifest manifest;
  std::vector<SplFeature> features;
  Predicate req_constraint;  // conjunction, resolved against the qualified scopes
  Predicate des_constraint;
  ScopePtr req_scope;  // qualified, features in manifest order
  ScopePtr des_scope;
};

/// Loads every model and checks the constraints against the qualified scopes.
Spl load_spl(const SplManifest& m);
/// Same, with machines already in memory.
Spl make_spl(std::string name, std::vector<SplFeature> features, std::vector<Predicate> req_constraints,
             std::vector<Predicate> des_constraints);

struct FeatureResult {
  std::string name;
  std::size_t design_configs = 0;
  std::size_t requirement_configs = 0;
  std::size_t mapping_pairs = 0;
  std::vector<Configuration> failing;
  double seconds = 0;
  ConformanceMapping mapping;

  bool conforms() const { return failing.empty(); }
};

FeatureResult check_feature(const std::string& name, const FsmvMachine& des, const FsmvMachine& req,
                            const ConformanceOptions& options = {});

enum class SplMode { Qbf, Monolithic, Enumerate, All };

const char* mode_name(SplMode m);
std::optional<SplMode> parse_mode(std::string_view s);

struct SplOptions {
  SplMode mode = SplMode::Qbf;
  /// Run the SPL step even when some feature fails on its own.
  bool keep_going = false;
  unsigned jobs = 1;
  std::size_t budget = default_enum_budget();
  QbfOptions qbf;
  /// Split the monolithic and enumeration oracles into groups of features that
  /// share no event and no constraint. Off means one composite for everything.
  bool cluster = true;
};

struct ModeResult {
  SplMode mode = SplMode::Qbf;
  bool conforms = true;
  std::optional<Configuration> witness;  // over Spl::des_scope
  double seconds = 0;
  QbfStats stats;  // qbf mode only
};

struct SplResult {
  std::string name;
  std::vector<FeatureResult> features;
  bool features_conform = true;
  /// False when a feature failed and the SPL step was skipped.
  bool spl_checked = false;
  bool conforms = true;
  std::optional<Configuration> witness;
  std::vector<ModeResult> modes;
  bool disagreement = false;
  /// The composite conforms although the mappings do not; only possible when
  /// features share events (see check_spl). Not an error.
  bool masked = false;
};

SplResult check_spl(const Spl& spl, const SplOptions& options = {});

/// Decides conformance of the composite machines directly: for each valid design
/// configuration in enumeration order, look for a requirement variant containing
/// it. Returns the first failing configuration.
struct DirectVerdict {
  bool conforms = true;
  std::optional<Configuration> witness;
};
DirectVerdict check_direct(const FsmvMachine& des, const FsmvMachine& req, std::size_t budget = default_enum_budget());

/// Ψ for an SPL whose features have been checked.
QbfFormula build_spl_psi(const Spl& spl, const std::vector<FeatureResult>& features);

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitConforms = 0,
  kExitNonConforming = 1,
  kExitUsage = 2,  // bad arguments, parse and I/O errors
  kExitDisagreement = 3,
  kExitCapacity = 4,
};

/// Disagreement between modes outranks the verdict itself.
int exit_code(const SplResult& r);
int exit_code(const FeatureResult& r);

/// `<v,..>+<v,..>` with one group per feature.
std::string format_witness(const Configuration& witness, const Spl& spl);

}  // namespace splv
