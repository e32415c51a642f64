#include "splv/containment.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "splv/parallel.hpp"

namespace splv {

namespace {

struct SubsetHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h = h * 1000003u ^ x;
    return h;
  }
};

// Subset construction built on demand; state 0 is the empty subset (the sink).
class LazyDfa {
 public:
  LazyDfa(const Fsm& r, const std::vector<std::string>& alphabet) : r_(r), width_(alphabet.size()) {
    std::unordered_map<std::string, std::uint32_t> pos;
    for (std::size_t i = 0; i < alphabet.size(); ++i) pos.emplace(alphabet[i], static_cast<std::uint32_t>(i));
    to_alpha_.reserve(r.events().size());
    for (const auto& e : r.events()) {
      auto it = pos.find(e);
      if (it == pos.end()) throw ModelError("alphabet does not cover event '" + e + "'");
      to_alpha_.push_back(it->second);
    }
    intern({});
    initial_ = intern({r.initial()});
  }

  std::uint32_t initial() const { return initial_; }
  static constexpr std::uint32_t sink() { return 0; }
  std::size_t size() const { return subsets_.size(); }
  const std::vector<std::uint32_t>& subset(std::uint32_t s) const { return subsets_[s]; }

  std::uint32_t step(std::uint32_t s, std::uint32_t a) {
    std::uint32_t& slot = delta_[s][a];
    if (slot != kUnknown) return slot;
    std::vector<std::uint32_t> next;
    for (std::uint32_t q : subsets_[s])
      for (const auto& e : r_.out(q))
        if (to_alpha_[e.event] == a) next.push_back(e.dst);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::uint32_t id = intern(std::move(next));
    delta_[s][a] = id;  // `slot` may dangle after intern grew delta_
    return id;
  }

 private:
  static constexpr std::uint32_t kUnknown = ~0u;

  std::uint32_t intern(std::vector<std::uint32_t> subset) {
    auto it = ids_.find(subset);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(subsets_.size());
    ids_.emplace(subset, id);
    subsets_.push_back(std::move(subset));
    delta_.emplace_back(width_, kUnknown);
    return id;
  }

  const Fsm& r_;
  std::size_t width_;
  std::vector<std::uint32_t> to_alpha_;
  std::vector<std::vector<std::uint32_t>> subsets_;
  std::vector<std::vector<std::uint32_t>> delta_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, SubsetHash> ids_;
  std::uint32_t initial_ = 0;
};

std::vector<std::string> union_alphabet(const Fsm& a, const Fsm& b) {
  std::vector<std::string> out(a.events());
  out.insert(out.end(), b.events().begin(), b.events().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Dfa complete_and_determinize(const Fsm& r, const std::vector<std::string>& alphabet) {
  LazyDfa lazy(r, alphabet);
  std::deque<std::uint32_t> queue{LazyDfa::sink(), lazy.initial()};
  std::vector<char> seen{1, 1};
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    for (std::uint32_t a = 0; a < alphabet.size(); ++a) {
      std::uint32_t t = lazy.step(s, a);
      if (t >= seen.size()) seen.resize(t + 1, 0);
      if (!seen[t]) {
        seen[t] = 1;
        queue.push_back(t);
      }
    }
  }
  Dfa dfa;
  dfa.alphabet = alphabet;
  dfa.initial = lazy.initial();
  dfa.sink = LazyDfa::sink();
  for (std::uint32_t s = 0; s < lazy.size(); ++s) {
    dfa.subsets.push_back(lazy.subset(s));
    std::vector<std::uint32_t> row;
    for (std::uint32_t a = 0; a < alphabet.size(); ++a) row.push_back(lazy.step(s, a));
    dfa.delta.push_back(std::move(row));
  }
  return dfa;
}

Fsm Dfa::to_fsm() const {
  std::vector<std::string> names;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    std::string n = "{";
    for (std::size_t i = 0; i < subsets[s].size(); ++i) n += (i ? "," : "") + std::to_string(subsets[s][i]);
    names.push_back(n + "}");
  }
  std::vector<Fsm::Edge> edges;
  for (std::uint32_t s = 0; s < delta.size(); ++s) {
    if (s == sink) continue;
    for (std::uint32_t a = 0; a < delta[s].size(); ++a)
      if (delta[s][a] != sink) edges.push_back({s, a, delta[s][a]});
  }
  return Fsm(std::move(names), initial, alphabet, std::move(edges));
}

ContainmentVerdict contains(const Fsm& d, const Fsm& r) {
  std::vector<std::string> alphabet = union_alphabet(d, r);
  LazyDfa rdfa(r, alphabet);
  std::vector<std::uint32_t> d_to_alpha;
  for (const auto& e : d.events())
    d_to_alpha.push_back(static_cast<std::uint32_t>(std::lower_bound(alphabet.begin(), alphabet.end(), e) -
                                                    alphabet.begin()));

  struct Node {
    std::uint32_t ds, rs;
    std::uint32_t parent;
    std::uint32_t event;  // d-local event index leading here
  };
  std::vector<Node> nodes{{d.initial(), rdfa.initial(), ~0u, 0}};
  std::unordered_map<std::uint64_t, std::uint32_t> seen{{(std::uint64_t{d.initial()} << 32) | rdfa.initial(), 0}};
  auto trace = [&](std::uint32_t n, std::uint32_t last_event) {
    Word w{d.events()[last_event]};
    for (; nodes[n].parent != ~0u; n = nodes[n].parent) w.push_back(d.events()[nodes[n].event]);
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    Node cur = nodes[head];
    for (const auto& e : d.out(cur.ds)) {
      std::uint32_t rs = rdfa.step(cur.rs, d_to_alpha[e.event]);
      if (rs == LazyDfa::sink()) return ContainmentVerdict{false, trace(head, e.event)};
      std::uint64_t key = (std::uint64_t{e.dst} << 32) | rs;
      if (seen.emplace(key, static_cast<std::uint32_t>(nodes.size())).second)
        nodes.push_back({e.dst, rs, head, e.event});
    }
  }
  return ContainmentVerdict{true, std::nullopt};
}

std::size_t ConformanceMapping::pair_count() const {
  std::size_t n = 0;
  for (const auto& [d, image] : entries) n += image.size();
  return n;
}

const std::vector<Configuration>* ConformanceMapping::image(const Configuration& pi_d) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), pi_d,
                             [](const auto& entry, const Configuration& key) { return entry.first < key; });
  if (it == entries.end() || !(it->first == pi_d)) return nullptr;
  return &it->second;
}

namespace {

// Configurations grouped by the set of transitions they enable.
struct Variants {
  std::vector<Configuration> configs;
  std::vector<std::uint32_t> group;  // config -> variant
  std::vector<Fsm> fsms;             // one per variant
};

Variants group_variants(const FsmvMachine& m, std::size_t budget) {
  Variants v;
  v.configs = valid_configs(m, budget);
  std::map<std::vector<bool>, std::uint32_t> ids;
  for (const auto& pi : v.configs) {
    auto [it, fresh] = ids.emplace(enabled_set(m, pi), static_cast<std::uint32_t>(v.fsms.size()));
    if (fresh) v.fsms.push_back(project(m, pi));
    v.group.push_back(it->second);
  }
  return v;
}

}  // namespace

ConformanceMapping compute_conformance(const FsmvMachine& des, const FsmvMachine& req,
                                       const ConformanceOptions& options) {
  Variants dv = group_variants(des, options.budget);
  Variants rv = group_variants(req, options.budget);
  std::vector<std::vector<char>> passes(dv.fsms.size(), std::vector<char>(rv.fsms.size(), 0));
  parallel_for(dv.fsms.size(), options.jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < rv.fsms.size(); ++j) passes[i][j] = contains(dv.fsms[i], rv.fsms[j]).holds;
  });

  ConformanceMapping phi;
  phi.feature = des.name();
  phi.design_scope = des.scope();
  phi.requirement_scope = req.scope();
  for (std::size_t i = 0; i < dv.configs.size(); ++i) {
    std::vector<Configuration> image;
    for (std::size_t j = 0; j < rv.configs.size(); ++j)
      if (passes[dv.group[i]][rv.group[j]]) image.push_back(rv.configs[j]);
    if (image.empty()) phi.failing.push_back(dv.configs[i]);
    phi.entries.emplace_back(dv.configs[i], std::move(image));
  }
  return phi;
}

std::string format_mapping(const ConformanceMapping& phi) {
  auto names = [](const Scope& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + s.at(i).name;
    return out;
  };
  std::ostringstream out;
  out << "# mapping " << phi.feature << "\n";
  out << "# design: " << names(*phi.design_scope) << "\n";
  out << "# requirement: " << names(*phi.requirement_scope) << "\n";
  for (const auto& [d, image] : phi.entries) {
    out << d.to_string() << " -> {";
    for (std::size_t i = 0; i < image.size(); ++i) out << (i ? ", " : "") << image[i].to_string();
    out << "}\n";
  }
  return out.str();
}

}  // namespace splv
