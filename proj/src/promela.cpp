#include "splv/promela.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace splv {

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

struct Side {
  const FsmvMachine& m;
  std::string tag;  // "des" or "req"

  std::string var(const std::string& name) const { return tag + "_" + sanitize(name); }
  std::string value(const std::string& name, const std::string& v) const {
    return tag + "_" + sanitize(name) + "_" + sanitize(v);
  }
  std::string state(const std::string& s) const { return tag + "_S_" + sanitize(s); }
  std::string state_var() const { return tag + "_state"; }
  std::string error_var() const { return tag + "_error"; }

  std::string expr(const Predicate& p) const {
    using K = Predicate::Kind;
    switch (p.kind()) {
      case K::True: return "true";
      case K::False: return "false";
      case K::Atom: {
        const Atom& a = p.atom();
        std::string rhs = a.rhs_kind == RhsKind::Variable ? var(a.rhs) : value(a.lhs, a.rhs);
        return "(" + var(a.lhs) + (a.negated ? " != " : " == ") + rhs + ")";
      }
      case K::Not: return "!" + expr(p.operands()[0]);
      case K::And:
      case K::Or: {
        std::string out = "(";
        for (std::size_t i = 0; i < p.operands().size(); ++i) {
          if (i) out += p.kind() == K::And ? " && " : " || ";
          out += expr(p.operands()[i]);
        }
        return out + ")";
      }
      case K::Implies: return "(!" + expr(p.operands()[0]) + " || " + expr(p.operands()[1]) + ")";
    }
    return "false";
  }
};

void declare(std::ostringstream& out, const Side& s) {
  out << "/* " << s.tag << ": " << s.m.name() << " */\n";
  for (const auto& v : s.m.scope()->vars()) {
    for (std::size_t i = 0; i < v.domain.size(); ++i)
      out << "#define " << s.value(v.name, v.domain[i]) << " " << i << "\n";
    out << "byte " << s.var(v.name) << ";\n";
  }
  for (std::size_t i = 0; i < s.m.states().size(); ++i) out << "#define " << s.state(s.m.states()[i]) << " " << i << "\n";
  out << "byte " << s.state_var() << " = " << s.state(s.m.initial()) << ";\n";
  out << "bit " << s.error_var() << " = 0;\n\n";
}

void process(std::ostringstream& out, const Side& s, const char* proc, int my_turn, int next_turn) {
  out << "proctype " << proc << "() {\n";
  out << "  do\n";
  out << "  :: atomic {\n";
  out << "       turn == " << my_turn << " ->\n";
  out << "       if\n";
  out << "       :: (des_error || req_error) -> skip  /* errors are absorbing */\n";
  out << "       :: else ->\n";
  out << "          if\n";
  for (const auto& t : s.m.transitions()) {
    out << "          :: (" << s.state_var() << " == " << s.state(t.src) << " && ev == " << sanitize(t.event);
    if (!t.guard.is_true()) out << " && " << s.expr(t.guard);
    out << ") -> " << s.state_var() << " = " << s.state(t.dst) << "\n";
  }
  out << "          :: else -> " << s.error_var() << " = 1\n";
  out << "          fi\n";
  out << "       fi;\n";
  out << "       turn = " << next_turn << "\n";
  out << "     }\n";
  out << "  od\n";
  out << "}\n\n";
}

void choose_config(std::ostringstream& out, const Side& s) {
  for (const auto& v : s.m.scope()->vars()) {
    out << "      if";
    for (const auto& val : v.domain) out << " :: " << s.var(v.name) << " = " << s.value(v.name, val);
    out << " fi;\n";
  }
}

}  // namespace

std::string emit_promela(const FsmvMachine& des, const FsmvMachine& req) {
  Side d{des, "des"};
  Side r{req, "req"};
  std::vector<std::string> events(des.events());
  events.insert(events.end(), req.events().begin(), req.events().end());
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  std::ostringstream out;
  out << "/* Conformance check of design " << des.name() << " against requirement " << req.name() << ".\n";
  out << " * The environment emits any event of either alphabet; design then requirement\n";
  out << " * consume it in one atomic step each. A requirement variant with nondeterminism\n";
  out << " * resolves its choice per run, so the claim is exact only for deterministic\n";
  out << " * requirement variants. */\n\n";

  // (i) environment
  if (events.empty()) {
    out << "byte ev = 0;  /* no events */\n";
  } else {
    out << "mtype = { ";
    for (std::size_t i = 0; i < events.size(); ++i) out << (i ? ", " : "") << sanitize(events[i]);
    out << " };\n";
    out << "mtype ev;\n";
  }
  out << "byte turn = 0;  /* 0 environment, 1 design, 2 requirement */\n\n";
  declare(out, d);
  declare(out, r);

  out << "proctype Environment() {\n";
  if (events.empty()) {
    out << "  skip  /* empty choice set */\n";
  } else {
    out << "  do\n";
    out << "  :: atomic {\n";
    out << "       turn == 0 ->\n";
    out << "       if";
    for (const auto& e : events) out << " :: ev = " << sanitize(e);
    out << " fi;\n";
    out << "       turn = 1\n";
    out << "     }\n";
    out << "  od\n";
  }
  out << "}\n\n";

  // (ii), (iii) the machines
  process(out, d, "Design", 1, 2);
  process(out, r, "Requirement", 2, 0);

  // (iv) initialisation with a random pair of valid configurations
  out << "init {\n";
  out << "  atomic {\n";
  out << "    do\n";
  out << "    ::\n";
  choose_config(out, d);
  choose_config(out, r);
  out << "      if\n";
  out << "      :: (" << d.expr(des.global()) << " && " << r.expr(req.global()) << ") -> break\n";
  out << "      :: else -> skip\n";
  out << "      fi\n";
  out << "    od;\n";
  out << "    run Environment(); run Design(); run Requirement()\n";
  out << "  }\n";
  out << "}\n\n";

  // (v) never claim
  out << "#define violation (!des_error && req_error)\n";
  out << "never {  /* []<>violation */\n";
  out << "T0_init:\n";
  out << "  do\n";
  out << "  :: (violation) -> goto accept_S9\n";
  out << "  :: true -> goto T0_init\n";
  out << "  od;\n";
  out << "accept_S9:\n";
  out << "  do\n";
  out << "  :: true -> goto T0_init\n";
  out << "  od\n";
  out << "}\n";
  return out.str();
}

}  // namespace splv
