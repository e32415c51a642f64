// splv: command-line front end.
//
//   splv check-feature <req> <des> [--promela F] [--mapping F] [--report F] [--format text|kv]
//   splv check-spl <manifest> [--mode qbf|monolithic|enumerate|all] [--keep-going] [--jobs N]
//                  [--export-qbf F.qdimacs|F.qcir] [--report F] [--format text|kv] [--no-cluster]
//   splv gen --count N --seed S --out DIR [--inject-bugs P] [--link P]
//   splv report <file> [--format text|kv]
//   splv export <manifest> <out.qdimacs|out.qcir>
//   splv solve <file.qdimacs>
//
// Exit codes: 0 conforms, 1 does not conform, 2 usage/parse/io error,
// 3 the verification modes disagree, 4 capacity exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "splv/generator.hpp"
#include "splv/model_io.hpp"
#include "splv/promela.hpp"
#include "splv/qbf_io.hpp"
#include "splv/report.hpp"
#include "splv/spl.hpp"

namespace fs = std::filesystem;
using namespace splv;

namespace {

struct Output {
  std::string report_path;
  std::string format = "text";

  void emit(const Report& r) const {
    std::string text = format == "kv" ? render_kv(r) : render_table(r);
    std::cout << text;
    if (!report_path.empty()) write_file(report_path, render_kv(r));
  }
};

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--report", out.report_path, "write the key=value report here");
  cmd->add_option("--format", out.format, "stdout rendering")->check(CLI::IsMember({"text", "kv"}));
}

void export_formula(const QbfFormula& f, const fs::path& path) {
  std::string ext = path.extension().string();
  if (ext == ".qcir")
    write_file(path, export_qcir(f));
  else if (ext == ".qdimacs" || ext == ".cnf")
    write_file(path, export_qdimacs(f));
  else
    throw IoError("cannot tell the QBF format from '" + path.string() + "' (use .qdimacs or .qcir)");
}

SplOptions spl_options(const std::string& mode, bool keep_going, unsigned jobs, bool no_cluster) {
  SplOptions o;
  o.mode = *parse_mode(mode);
  o.keep_going = keep_going;
  o.jobs = jobs;
  o.cluster = !no_cluster;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variability conformance checking for software product lines"};
  app.require_subcommand(1);

  // check-feature
  std::string req_path, des_path, promela_path, mapping_path;
  unsigned jobs = 1;
  Output feature_out;
  auto* cf = app.add_subcommand("check-feature", "check one design against its requirement");
  cf->add_option("req", req_path, "requirement model")->required();
  cf->add_option("des", des_path, "design model")->required();
  cf->add_option("--promela", promela_path, "also write the Promela model");
  cf->add_option("--mapping", mapping_path, "write the conformance mapping");
  cf->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  add_output(cf, feature_out);

  // check-spl
  std::string manifest_path, mode = "qbf", export_path;
  bool keep_going = false, no_cluster = false;
  Output spl_out;
  auto* cs = app.add_subcommand("check-spl", "check a whole product line");
  cs->add_option("manifest", manifest_path, "SPL manifest")->required();
  cs->add_option("--mode", mode, "decision procedure")->check(CLI::IsMember({"qbf", "monolithic", "enumerate", "all"}));
  cs->add_flag("--keep-going", keep_going, "run the SPL step even if a feature fails");
  cs->add_flag("--no-cluster", no_cluster, "compose all features into one machine in the oracle modes");
  cs->add_option("--jobs", jobs, "worker threads for the feature checks (0 = all cores)");
  cs->add_option("--export-qbf", export_path, "write the QBF instance (.qdimacs or .qcir)");
  add_output(cs, spl_out);

  // gen
  GenOptions gen;
  std::string gen_dir;
  auto* g = app.add_subcommand("gen", "generate a random product line");
  g->add_option("--count", gen.count, "number of features")->required()->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--out", gen_dir, "output directory")->required();
  g->add_option("--inject-bugs", gen.inject_bugs, "probability of a design bug per feature")->check(CLI::Range(0.0, 1.0));
  g->add_option("--link", gen.link_probability, "probability of linking neighbouring features")
      ->check(CLI::Range(0.0, 1.0));

  // report
  std::string report_in;
  Output report_out;
  auto* rp = app.add_subcommand("report", "render a saved report");
  rp->add_option("file", report_in, "key=value report")->required();
  rp->add_option("--format", report_out.format, "rendering")->check(CLI::IsMember({"text", "kv"}));

  // export
  std::string export_manifest, export_out;
  auto* ex = app.add_subcommand("export", "write the QBF instance of a product line");
  ex->add_option("manifest", export_manifest, "SPL manifest")->required();
  ex->add_option("out", export_out, "output file (.qdimacs or .qcir)")->required();

  // solve
  std::string solve_in;
  auto* sv = app.add_subcommand("solve", "decide a forall-exists QDIMACS instance");
  sv->add_option("file", solve_in, "QDIMACS file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*cf) {
      FsmvMachine req = load_model(req_path);
      FsmvMachine des = load_model(des_path);
      if (!promela_path.empty()) write_file(promela_path, emit_promela(des, req));
      FeatureResult r = check_feature(des.name(), des, req, ConformanceOptions{default_enum_budget(), jobs});
      if (!mapping_path.empty()) write_file(mapping_path, format_mapping(r.mapping));
      feature_out.emit(make_report(r));
      return exit_code(r);
    }
    if (*cs) {
      Spl spl = load_spl(load_manifest(manifest_path));
      SplResult r = check_spl(spl, spl_options(mode, keep_going, jobs, no_cluster));
      if (!export_path.empty()) export_formula(build_spl_psi(spl, r.features), export_path);
      spl_out.emit(make_report(r, spl));
      if (r.disagreement) std::cerr << "splv: internal error: verification modes disagree\n";
      if (r.masked) std::cerr << "splv: note: the composed design conforms; shared events hide the failing behaviour\n";
      return exit_code(r);
    }
    if (*g) {
      fs::path manifest = write_generated(generate_spl(gen), gen_dir);
      std::cout << manifest.string() << "\n";
      return kExitConforms;
    }
    if (*rp) {
      report_out.emit(parse_kv(read_file(report_in), report_in));
      return kExitConforms;
    }
    if (*ex) {
      Spl spl = load_spl(load_manifest(export_manifest));
      // only the per-feature mappings are needed; failing features just make Psi false
      std::vector<FeatureResult> features;
      for (const auto& f : spl.features) features.push_back(check_feature(f.name, f.design, f.requirement));
      export_formula(build_spl_psi(spl, features), export_out);
      return kExitConforms;
    }
    if (*sv) {
      QbfFormula f = to_formula(parse_qdimacs(read_file(solve_in), solve_in), solve_in);
      SplVerdict v = solve_forall_exists(f);
      std::cout << (v.conforms ? "valid" : "invalid") << " refinements=" << v.stats.refinements << "\n";
      return v.conforms ? kExitConforms : kExitNonConforming;
    }
  } catch (const CapacityError& e) {
    std::cerr << "splv: capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ParseError& e) {
    std::cerr << "splv: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "splv: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
