#include "splv/generator.hpp"

#include <cstdio>
#include <map>
#include <random>

#include "splv/model_io.hpp"

namespace splv {

namespace {

// Draws come straight from the engine so output does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(engine_() % n); }
  std::uint32_t between(std::uint32_t lo, std::uint32_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

struct Lit {
  int var;  // 0 = first variable, 1 = second
  int value;
  bool negated;
};

struct RawTransition {
  std::uint32_t src, dst, event;
  std::vector<Lit> guard;  // conjunction; empty = true
};

std::string guard_text(const std::vector<Lit>& g, const std::string (&vars)[2]) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += " && ";
    out += vars[g[i].var] + (g[i].negated ? " != " : " = ") + vars[g[i].var] + std::to_string(g[i].value);
  }
  return out;
}

// Global predicates that admit a model for either value of the first variable,
// so equality links between features never make the composite inconsistent.
const char* const kGlobals[] = {"", "{0} = {0}0 => {1} = {1}0", "{0} = {0}1 => {1} = {1}1",
                                "{0} != {0}1 || {1} != {1}0"};

std::string global_text(int which, const std::string (&vars)[2]) {
  std::string out;
  for (const char* p = kGlobals[which]; *p; ++p) {
    if (p[0] == '{' && p[2] == '}') {
      out += vars[p[1] - '0'];
      p += 2;
    } else {
      out += *p;
    }
  }
  return out;
}

std::string render(const std::string& name, const std::string (&vars)[2], int global,
                   const std::vector<std::string>& events, std::uint32_t states,
                   const std::vector<RawTransition>& trans) {
  std::string out = "fsmv " + name + " {\n";
  for (const auto& v : vars) out += "  var " + v + " in {" + v + "0, " + v + "1};\n";
  if (global) out += "  global " + global_text(global, vars) + ";\n";
  out += "  events {";
  for (std::size_t i = 0; i < events.size(); ++i) out += (i ? ", " : "") + events[i];
  out += "};\n  states {";
  for (std::uint32_t s = 0; s < states; ++s) out += (s ? ", s" : "s") + std::to_string(s);
  out += "};\n  initial s0;\n";
  for (const auto& t : trans) {
    out += "  trans s" + std::to_string(t.src) + " -> s" + std::to_string(t.dst) + " on " + events[t.event];
    if (!t.guard.empty()) out += " when " + guard_text(t.guard, vars);
    out += ";\n";
  }
  return out + "}\n";
}

std::vector<Lit> random_guard(Rng& rng) {
  switch (rng.below(4)) {
    case 0:
      return {};
    case 1:
    case 2:
      return {Lit{static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2)), rng.chance(0.3)}};
    default:
      return {Lit{0, static_cast<int>(rng.below(2)), false}, Lit{1, static_cast<int>(rng.below(2)), false}};
  }
}

}  // namespace

GeneratedSpl generate_spl(const GenOptions& options) {
  Rng rng(options.seed);
  GeneratedSpl g;
  g.manifest.name = "Gen" + std::to_string(options.count) + "s" + std::to_string(options.seed);
  const std::string req_vars[2] = {"a", "b"};
  const std::string des_vars[2] = {"c", "d"};

  std::vector<int> globals;
  for (std::size_t f = 0; f < options.count; ++f) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "F%04zu", f + 1);
    std::string name = buf;

    std::uint32_t n = rng.between(options.min_states, options.max_states);
    std::uint32_t ne = rng.between(2, 4);
    std::vector<std::string> events;
    for (std::uint32_t e = 0; e < ne; ++e) events.push_back(name + "_e" + std::to_string(e));

    std::vector<RawTransition> req;
    // a spanning tree from s0 keeps every state reachable under some guard
    for (std::uint32_t s = 1; s < n; ++s) req.push_back({rng.below(s), s, rng.below(ne), random_guard(rng)});
    std::uint32_t extra = rng.between(1, n);
    for (std::uint32_t k = 0; k < extra; ++k) req.push_back({rng.below(n), rng.below(n), rng.below(ne), random_guard(rng)});
    int global = static_cast<int>(rng.below(4));
    globals.push_back(global);

    // design: drop some transitions, strengthen some guards with a fresh literal
    std::vector<RawTransition> des;
    for (const auto& t : req) {
      if (rng.chance(0.1)) continue;
      RawTransition d = t;
      if (d.guard.size() == 1 && rng.chance(0.25))
        d.guard.push_back(Lit{1 - d.guard[0].var, static_cast<int>(rng.below(2)), false});
      des.push_back(std::move(d));
    }
    std::vector<std::string> des_events = events;
    if (options.inject_bugs > 0 && rng.chance(options.inject_bugs)) {
      des_events.push_back(name + "_bug");
      des.push_back({0, rng.below(n), static_cast<std::uint32_t>(des_events.size() - 1), {}});
      g.bugged.push_back(name);
    }

    std::string req_file = name + ".req.fsmv", des_file = name + ".des.fsmv";
    g.files.emplace_back(req_file, render(name + "_req", req_vars, global, events, n, req));
    g.files.emplace_back(des_file, render(name + "_des", des_vars, global, des_events, n, des));
    g.manifest.features.push_back(ManifestFeature{name, req_file, des_file});

    if (f > 0 && rng.chance(options.link_probability)) {
      const std::string& prev = g.manifest.features[f - 1].name;
      g.manifest.req_constraints.push_back(Predicate::eq_var(prev + ".a", name + ".a"));
      g.manifest.des_constraints.push_back(Predicate::eq_var(prev + ".c", name + ".c"));
    }
  }
  g.files.emplace_back("spl.splv", print_manifest(g.manifest));
  return g;
}

std::filesystem::path write_generated(const GeneratedSpl& g, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [file, content] : g.files) write_file(dir / file, content);
  return dir / g.files.back().first;
}

Spl generated_to_spl(const GeneratedSpl& g) {
  std::map<std::string, const std::string*> by_name;
  for (const auto& [file, content] : g.files) by_name.emplace(file, &content);
  std::vector<SplFeature> features;
  for (const auto& f : g.manifest.features)
    features.push_back(SplFeature{f.name, parse_model(*by_name.at(f.requirement), f.requirement),
                                  parse_model(*by_name.at(f.design), f.design)});
  Spl spl = make_spl(g.manifest.name, std::move(features), g.manifest.req_constraints, g.manifest.des_constraints);
  spl.manifest = g.manifest;
  return spl;
}

}  // namespace splv
