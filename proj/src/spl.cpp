#include "splv/spl.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "splv/composition.hpp"
#include "splv/lexer.hpp"
#include "splv/model_io.hpp"
#include "splv/parallel.hpp"

namespace splv {

using text::Tok;
using text::Token;
using text::TokenStream;

SplManifest parse_manifest(std::string_view input, const std::string& source, const std::filesystem::path& base) {
  TokenStream ts(text::tokenize(input, source), source);
  SplManifest m;
  m.base = base;
  ts.expect_word("spl");
  m.name = ts.expect(Tok::Ident, "an SPL name").text;
  ts.expect(Tok::LBrace, "'{'");
  std::set<std::string> seen;
  while (!ts.at(Tok::RBrace)) {
    Token kw = ts.expect(Tok::Ident, "a declaration");
    if (kw.text == "feature") {
      Token at = ts.peek();
      ManifestFeature f;
      f.name = ts.expect(Tok::Ident, "a feature name").text;
      if (f.name.find('.') != std::string::npos) ts.fail(at, "feature names cannot contain '.'");
      if (!seen.insert(f.name).second) ts.fail(at, "duplicate feature " + f.name);
      ts.expect_word("req");
      f.requirement = ts.expect(Tok::String, "a quoted path").text;
      ts.expect_word("des");
      f.design = ts.expect(Tok::String, "a quoted path").text;
      m.features.push_back(std::move(f));
    } else if (kw.text == "req_constraint") {
      m.req_constraints.push_back(text::parse_predicate(ts));
    } else if (kw.text == "des_constraint") {
      m.des_constraints.push_back(text::parse_predicate(ts));
    } else {
      ts.fail(kw, "unknown declaration '" + kw.text + "'");
    }
    ts.expect(Tok::Semi, "';'");
  }
  ts.expect(Tok::RBrace, "'}'");
  if (!ts.at(Tok::End)) ts.fail(ts.peek(), "trailing input after the manifest");
  return m;
}

std::string print_manifest(const SplManifest& m) {
  std::ostringstream out;
  out << "spl " << m.name << " {\n";
  for (const auto& f : m.features)
    out << "  feature " << f.name << " req \"" << f.requirement << "\" des \"" << f.design << "\";\n";
  for (const auto& p : m.req_constraints) out << "  req_constraint " << to_string(p) << ";\n";
  for (const auto& p : m.des_constraints) out << "  des_constraint " << to_string(p) << ";\n";
  out << "}\n";
  return out.str();
}

SplManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.string(), path.parent_path());
}

Spl make_spl(std::string name, std::vector<SplFeature> features, std::vector<Predicate> req_constraints,
             std::vector<Predicate> des_constraints) {
  Spl spl;
  spl.manifest.name = std::move(name);
  spl.manifest.req_constraints = req_constraints;
  spl.manifest.des_constraints = des_constraints;
  spl.req_scope = Scope::empty();
  spl.des_scope = Scope::empty();
  for (const auto& f : features) {
    spl.manifest.features.push_back(ManifestFeature{f.name, "", ""});
    spl.req_scope = Scope::join(*spl.req_scope, *qualify_scope(*f.requirement.scope(), f.name));
    spl.des_scope = Scope::join(*spl.des_scope, *qualify_scope(*f.design.scope(), f.name));
  }
  auto bind = [&](std::vector<Predicate> ps, const Scope& scope, const char* side) {
    try {
      return resolve(Predicate::conj(std::move(ps)), scope);
    } catch (const ScopeError& e) {
      throw ModelError(spl.manifest.name + ": " + side + " constraint: " + e.what());
    }
  };
  spl.req_constraint = bind(std::move(req_constraints), *spl.req_scope, "requirement");
  spl.des_constraint = bind(std::move(des_constraints), *spl.des_scope, "design");
  spl.features = std::move(features);
  return spl;
}

Spl load_spl(const SplManifest& m) {
  std::vector<SplFeature> features;
  for (const auto& f : m.features)
    features.push_back(SplFeature{f.name, load_model(m.base / f.requirement), load_model(m.base / f.design)});
  Spl spl = make_spl(m.name, std::move(features), m.req_constraints, m.des_constraints);
  spl.manifest = m;
  return spl;
}

// ---------------------------------------------------------------------------

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Copy of `part` placed into `whole` by variable name; unset variables keep `base`.
Configuration place(const Configuration& base, const Configuration& part) {
  std::vector<std::uint32_t> values(base.values().begin(), base.values().end());
  for (std::size_t i = 0; i < part.size(); ++i) values[base.scope()->index_of(part.scope()->at(i).name)] = part.index(i);
  return Configuration(base.scope(), std::move(values));
}

Configuration rescope(const Configuration& c, const ScopePtr& scope) {
  return Configuration(scope, std::vector<std::uint32_t>(c.values().begin(), c.values().end()));
}

std::string feature_of(const std::string& qualified) { return qualified.substr(0, qualified.find('.')); }

// Independent groups of features for the oracle modes. Two features land in one
// group when a constraint conjunct mentions both, or, with `by_events`, when
// their requirement or design alphabets intersect.
struct Cluster {
  std::vector<std::size_t> features;
  std::vector<Predicate> req;  // conjuncts touching only this group
  std::vector<Predicate> des;
};

std::vector<Cluster> clusters_of(const Spl& spl, bool split, bool by_events) {
  std::size_t n = spl.features.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(spl.features[i].name, i);

  auto owners = [&](const Predicate& p) {
    std::set<std::size_t> out;
    for (const auto& v : mentioned_vars(p)) out.insert(index.at(feature_of(v)));
    return out;
  };
  auto req_conj = conjuncts(spl.req_constraint);
  auto des_conj = conjuncts(spl.des_constraint);
  if (n == 0) return {Cluster{{}, req_conj, des_conj}};
  if (!split) {
    for (std::size_t i = 1; i < n; ++i) unite(0, i);
  } else {
    for (const auto* list : {&req_conj, &des_conj})
      for (const auto& p : *list) {
        auto o = owners(p);
        for (std::size_t f : o) unite(*o.begin(), f);
      }
    if (by_events) {
      std::map<std::string, std::size_t> req_first, des_first;
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : spl.features[i].requirement.events())
          if (auto [it, fresh] = req_first.emplace(e, i); !fresh) unite(it->second, i);
        for (const auto& e : spl.features[i].design.events())
          if (auto [it, fresh] = des_first.emplace(e, i); !fresh) unite(it->second, i);
      }
    }
  }
  std::map<std::size_t, Cluster> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[find(i)].features.push_back(i);
  auto home = [&](const Predicate& p) {
    auto o = owners(p);
    return o.empty() ? find(0) : find(*o.begin());
  };
  for (const auto& p : req_conj) by_root[home(p)].req.push_back(p);
  for (const auto& p : des_conj) by_root[home(p)].des.push_back(p);
  std::vector<Cluster> out;
  for (auto& [root, c] : by_root) out.push_back(std::move(c));
  return out;
}

// Outcome of one group: no valid design configuration at all (the whole SPL is
// then vacuously conforming), or the least valid and least failing design
// configurations over the group's own scope.
struct ClusterOutcome {
  bool vacuous = false;
  std::optional<Configuration> least_valid;
  std::optional<Configuration> least_failing;
};

// Per-group results combine like the conjuncts of Ψ: the overall witness is the
// lexicographically least among "one group fails, every other group takes its
// least valid configuration".
ModeResult combine(SplMode mode, const std::vector<ClusterOutcome>& outcomes, const ScopePtr& des_scope) {
  ModeResult r;
  r.mode = mode;
  for (const auto& o : outcomes)
    if (o.vacuous) return r;
  Configuration base(des_scope, std::vector<std::uint32_t>(des_scope->size(), 0));
  for (const auto& o : outcomes) base = place(base, *o.least_valid);
  for (const auto& o : outcomes) {
    if (!o.least_failing) continue;
    Configuration w = place(base, *o.least_failing);
    if (!r.witness || w < *r.witness) r.witness = w;
  }
  r.conforms = !r.witness;
  return r;
}

ConformanceMapping restrict_mapping(const ConformanceMapping& phi, const Predicate& rho_d, const Predicate& rho_r) {
  BoundPredicate bd(resolve(rho_d, *phi.design_scope), *phi.design_scope);
  BoundPredicate br(resolve(rho_r, *phi.requirement_scope), *phi.requirement_scope);
  ConformanceMapping out;
  out.feature = phi.feature;
  out.design_scope = phi.design_scope;
  out.requirement_scope = phi.requirement_scope;
  for (const auto& [d, image] : phi.entries) {
    if (!bd.eval(d)) continue;
    std::vector<Configuration> kept;
    for (const auto& r : image)
      if (br.eval(r)) kept.push_back(r);
    if (kept.empty()) out.failing.push_back(d);
    out.entries.emplace_back(d, std::move(kept));
  }
  return out;
}

// Conjuncts from `ps` whose variables all lie in `scope` and are not yet used.
Predicate take_applicable(std::vector<Predicate>& ps, const Scope& scope) {
  std::vector<Predicate> now, later;
  for (auto& p : ps) {
    auto vars = mentioned_vars(p);
    bool inside = std::all_of(vars.begin(), vars.end(), [&](const std::string& v) { return scope.find(v).has_value(); });
    (inside ? now : later).push_back(std::move(p));
  }
  ps = std::move(later);
  return Predicate::conj(std::move(now));
}

ClusterOutcome enumerate_cluster(const Spl& spl, const Cluster& cl, const std::vector<FeatureResult>& results,
                                 std::size_t budget) {
  std::vector<Predicate> req = cl.req, des = cl.des;
  ConformanceMapping acc;
  for (std::size_t k = 0; k < cl.features.size(); ++k) {
    std::size_t i = cl.features[k];
    ConformanceMapping q = qualify_mapping(results[i].mapping, spl.features[i].name);
    if (k == 0) {
      acc = restrict_mapping(q, take_applicable(des, *q.design_scope), take_applicable(req, *q.requirement_scope));
      continue;
    }
    ScopePtr ds = Scope::join(*acc.design_scope, *q.design_scope);
    ScopePtr rs = Scope::join(*acc.requirement_scope, *q.requirement_scope);
    acc = add_mappings(acc, q, take_applicable(des, *ds), take_applicable(req, *rs), budget);
  }
  if (cl.features.empty()) {
    // only variable-free conjuncts; nothing to enumerate
    acc.entries.emplace_back(Configuration(), std::vector<Configuration>{Configuration()});
    acc = restrict_mapping(acc, Predicate::conj(des), Predicate::conj(req));
  }
  ClusterOutcome out;
  if (acc.entries.empty()) {
    out.vacuous = true;
    return out;
  }
  out.least_valid = acc.entries.front().first;
  if (!acc.failing.empty()) out.least_failing = acc.failing.front();
  return out;
}

ClusterOutcome direct_cluster(const Spl& spl, const Cluster& cl, std::size_t budget) {
  std::vector<std::pair<std::string, FsmvMachine>> reqs, dess;
  for (std::size_t i : cl.features) {
    reqs.emplace_back(spl.features[i].name, spl.features[i].requirement);
    dess.emplace_back(spl.features[i].name, spl.features[i].design);
  }
  Predicate rho_r = Predicate::conj(cl.req), rho_d = Predicate::conj(cl.des);

  // compose refuses inconsistent predicates, so empty configuration spaces are
  // settled here first
  auto global_of = [&](const std::vector<std::pair<std::string, FsmvMachine>>& ms, const Predicate& extra) {
    ScopePtr scope = Scope::empty();
    std::vector<Predicate> ps{extra};
    for (const auto& [name, m] : ms) {
      FsmvMachine q = m.qualify(name);
      scope = Scope::join(*scope, *q.scope());
      ps.push_back(q.global());
    }
    return std::make_pair(resolve(Predicate::conj(std::move(ps)), *scope), scope);
  };
  auto [gd, sd] = global_of(dess, rho_d);
  ClusterOutcome out;
  auto valid_d = satisfying_assignments(gd, sd, budget);
  if (valid_d.empty()) {
    out.vacuous = true;
    return out;
  }
  out.least_valid = valid_d.front();
  auto [gr, sr] = global_of(reqs, rho_r);
  if (!is_consistent(gr, sr)) {
    out.least_failing = valid_d.front();
    return out;
  }
  FsmvMachine des = compose_all(dess, rho_d);
  FsmvMachine req = compose_all(reqs, rho_r);
  DirectVerdict v = check_direct(des, req, budget);
  if (v.witness) out.least_failing = rescope(*v.witness, sd);
  return out;
}

}  // namespace

FeatureResult check_feature(const std::string& name, const FsmvMachine& des, const FsmvMachine& req,
                            const ConformanceOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  FeatureResult r;
  r.name = name;
  r.mapping = compute_conformance(des, req, options);
  r.mapping.feature = name;
  r.design_configs = r.mapping.entries.size();
  r.requirement_configs = valid_configs(req, options.budget).size();
  r.mapping_pairs = r.mapping.pair_count();
  r.failing = r.mapping.failing;
  r.seconds = since(t0);
  return r;
}

const char* mode_name(SplMode m) {
  switch (m) {
    case SplMode::Qbf: return "qbf";
    case SplMode::Monolithic: return "monolithic";
    case SplMode::Enumerate: return "enumerate";
    case SplMode::All: return "all";
  }
  return "?";
}

std::optional<SplMode> parse_mode(std::string_view s) {
  for (SplMode m : {SplMode::Qbf, SplMode::Monolithic, SplMode::Enumerate, SplMode::All})
    if (s == mode_name(m)) return m;
  return std::nullopt;
}

QbfFormula build_spl_psi(const Spl& spl, const std::vector<FeatureResult>& features) {
  std::vector<PsiFeature> fs;
  for (std::size_t i = 0; i < spl.features.size(); ++i)
    fs.push_back(PsiFeature{spl.features[i].name, features[i].mapping, spl.features[i].design.global(),
                            spl.features[i].requirement.global()});
  return build_psi(fs, spl.des_constraint, spl.req_constraint);
}

DirectVerdict check_direct(const FsmvMachine& des, const FsmvMachine& req, std::size_t budget) {
  std::vector<Fsm> variants;
  {
    std::set<std::vector<bool>> seen;
    for (const auto& pi : valid_configs(req, budget))
      if (seen.insert(enabled_set(req, pi)).second) variants.push_back(project(req, pi));
  }
  // the requirement variant that covered the previous design variant is tried first
  std::vector<std::size_t> order(variants.size());
  std::iota(order.begin(), order.end(), 0);
  std::map<std::vector<bool>, bool> known;
  for (const auto& pi : valid_configs(des, budget)) {
    auto key = enabled_set(des, pi);
    auto it = known.find(key);
    if (it == known.end()) {
      Fsm d = project(des, pi);
      bool covered = false;
      for (std::size_t k = 0; k < order.size() && !covered; ++k) {
        if (contains(d, variants[order[k]]).holds) {
          std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                      order.begin() + static_cast<std::ptrdiff_t>(k) + 1);
          covered = true;
        }
      }
      it = known.emplace(std::move(key), covered).first;
    }
    if (!it->second) return DirectVerdict{false, pi};
  }
  return DirectVerdict{};
}

SplResult check_spl(const Spl& spl, const SplOptions& options) {
  SplResult result;
  result.name = spl.manifest.name;
  result.features.resize(spl.features.size());
  ConformanceOptions copt{options.budget, 1};
  parallel_for(spl.features.size(), options.jobs, [&](std::size_t i) {
    const auto& f = spl.features[i];
    result.features[i] = check_feature(f.name, f.design, f.requirement, copt);
  });
  for (const auto& f : result.features) result.features_conform &= f.conforms();
  if (!result.features_conform && !options.keep_going) {
    result.conforms = false;
    return result;
  }
  result.spl_checked = true;

  std::vector<SplMode> modes;
  if (options.mode == SplMode::All)
    modes = {SplMode::Qbf, SplMode::Monolithic, SplMode::Enumerate};
  else
    modes = {options.mode};

  for (SplMode mode : modes) {
    auto t0 = std::chrono::steady_clock::now();
    ModeResult r;
    if (mode == SplMode::Qbf) {
      QbfFormula f = build_spl_psi(spl, result.features);
      SplVerdict v = solve_forall_exists(f, options.qbf);
      r.mode = mode;
      r.conforms = v.conforms;
      if (v.witness) r.witness = rescope(*v.witness, spl.des_scope);
      r.stats = v.stats;
    } else {
      bool direct = mode == SplMode::Monolithic;
      std::vector<ClusterOutcome> outcomes;
      for (const auto& cl : clusters_of(spl, options.cluster, direct))
        outcomes.push_back(direct ? direct_cluster(spl, cl, options.budget)
                                  : enumerate_cluster(spl, cl, result.features, options.budget));
      r = combine(mode, outcomes, spl.des_scope);
    }
    r.seconds = since(t0);
    result.modes.push_back(std::move(r));
  }

  const ModeResult& first = result.modes.front();
  result.conforms = first.conforms;
  result.witness = first.witness;
  // qbf and enumeration decide the same relation, so verdicts and least
  // witnesses must coincide. Against the composite only one direction is
  // guaranteed: a shared event can block a design move that the mappings
  // still count against it, so the composite may conform when they do not.
  const ModeResult* by_mapping = nullptr;
  const ModeResult* composite = nullptr;
  for (const auto& r : result.modes) {
    if (r.mode == SplMode::Monolithic) {
      composite = &r;
      continue;
    }
    if (by_mapping && (r.conforms != by_mapping->conforms || !(r.witness == by_mapping->witness)))
      result.disagreement = true;
    if (!by_mapping) by_mapping = &r;
  }
  if (by_mapping && composite) {
    if (by_mapping->conforms && !composite->conforms) result.disagreement = true;
    if (!by_mapping->conforms && composite->conforms) result.masked = true;
  }
  return result;
}

int exit_code(const SplResult& r) {
  if (r.disagreement) return kExitDisagreement;
  return r.conforms ? kExitConforms : kExitNonConforming;
}

int exit_code(const FeatureResult& r) { return r.conforms() ? kExitConforms : kExitNonConforming; }

std::string format_witness(const Configuration& witness, const Spl& spl) {
  std::string out;
  std::size_t at = 0;
  for (std::size_t i = 0; i < spl.features.size(); ++i) {
    std::size_t n = spl.features[i].design.scope()->size();
    out += i ? "+<" : "<";
    for (std::size_t k = 0; k < n; ++k) out += (k ? "," : "") + witness.value(at + k);
    out += ">";
    at += n;
  }
  return out;
}

}  // namespace splv
