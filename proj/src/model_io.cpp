#include "splv/model_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "splv/lexer.hpp"

namespace splv {

using text::Tok;
using text::Token;
using text::TokenStream;

namespace {

std::vector<std::string> parse_name_set(TokenStream& ts) {
  std::vector<std::string> out;
  ts.expect(Tok::LBrace, "'{'");
  if (!ts.at(Tok::RBrace)) {
    do {
      out.push_back(ts.expect(Tok::Ident, "a name").text);
    } while (ts.accept(Tok::Comma));
  }
  ts.expect(Tok::RBrace, "'}'");
  return out;
}

struct PendingTransition {
  Transition t;
  Token at;
  bool has_guard;
};

FsmvMachine parse_machine(TokenStream& ts) {
  Token head = ts.peek();
  ts.expect_word("fsmv");
  std::string name = ts.expect(Tok::Ident, "a machine name").text;
  ts.expect(Tok::LBrace, "'{'");

  std::vector<VarDecl> vars;
  std::vector<std::pair<Predicate, Token>> globals;
  std::optional<std::vector<std::string>> events, states;
  std::optional<std::string> initial;
  std::vector<PendingTransition> trans;

  while (!ts.at(Tok::RBrace)) {
    Token kw = ts.expect(Tok::Ident, "a declaration");
    if (kw.text == "var") {
      std::string v = ts.expect(Tok::Ident, "a variable name").text;
      ts.expect_word("in");
      vars.push_back(VarDecl{v, parse_name_set(ts)});
    } else if (kw.text == "global") {
      Token at = ts.peek();
      globals.emplace_back(text::parse_predicate(ts), at);
    } else if (kw.text == "events") {
      if (events) ts.fail(kw, "duplicate events declaration");
      events = parse_name_set(ts);
    } else if (kw.text == "states") {
      if (states) ts.fail(kw, "duplicate states declaration");
      states = parse_name_set(ts);
    } else if (kw.text == "initial") {
      if (initial) ts.fail(kw, "duplicate initial declaration");
      initial = ts.expect(Tok::Ident, "a state").text;
    } else if (kw.text == "trans") {
      PendingTransition p{{}, kw, false};
      p.t.src = ts.expect(Tok::Ident, "a source state").text;
      ts.expect(Tok::Arrow, "'->'");
      p.t.dst = ts.expect(Tok::Ident, "a target state").text;
      ts.expect_word("on");
      p.t.event = ts.expect(Tok::Ident, "an event").text;
      if (ts.at_word("when")) {
        ts.next();
        p.at = ts.peek();
        p.t.guard = text::parse_predicate(ts);
        p.has_guard = true;
      }
      trans.push_back(std::move(p));
    } else {
      ts.fail(kw, "unknown declaration '" + kw.text + "'");
    }
    ts.expect(Tok::Semi, "';'");
  }
  ts.expect(Tok::RBrace, "'}'");

  if (!states) ts.fail(head, "machine " + name + " declares no states");
  if (!initial) ts.fail(head, "machine " + name + " declares no initial state");

  ScopePtr scope;
  try {
    scope = Scope::make(std::move(vars));
  } catch (const ModelError& e) {
    ts.fail(head, e.what());
  }
  std::vector<Predicate> gs;
  for (const auto& [p, at] : globals) gs.push_back(text::resolve_at(p, *scope, at, ts.source()));
  std::vector<Transition> ts_list;
  for (auto& p : trans) {
    if (p.has_guard) p.t.guard = text::resolve_at(p.t.guard, *scope, p.at, ts.source());
    ts_list.push_back(std::move(p.t));
  }
  try {
    return FsmvMachine(name, *states, *initial, events.value_or(std::vector<std::string>{}), scope, std::move(ts_list),
                       gs.size() == 1 ? gs.front() : Predicate::conj(std::move(gs)));
  } catch (const ModelError& e) {
    ts.fail(head, e.what());
  }
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

}  // namespace

std::vector<FsmvMachine> parse_models(std::string_view input, const std::string& source) {
  TokenStream ts(text::tokenize(input, source), source);
  std::vector<FsmvMachine> out;
  while (!ts.at(Tok::End)) out.push_back(parse_machine(ts));
  return out;
}

FsmvMachine parse_model(std::string_view input, const std::string& source) {
  auto ms = parse_models(input, source);
  if (ms.size() != 1)
    throw ParseError(source, 1, 1, "expected exactly one machine, found " + std::to_string(ms.size()));
  return std::move(ms.front());
}

std::string print_model(const FsmvMachine& m) {
  std::ostringstream out;
  out << "fsmv " << m.name() << " {\n";
  for (const auto& v : m.scope()->vars()) out << "  var " << v.name << " in {" << join(v.domain) << "};\n";
  if (!m.global().is_true()) out << "  global " << to_string(m.global()) << ";\n";
  out << "  events {" << join(m.events()) << "};\n";
  out << "  states {" << join(m.states()) << "};\n";
  out << "  initial " << m.initial() << ";\n";
  for (const auto& t : m.transitions()) {
    out << "  trans " << t.src << " -> " << t.dst << " on " << t.event;
    if (!t.guard.is_true()) out << " when " << to_string(t.guard);
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

FsmvMachine load_model(const std::filesystem::path& path) { return parse_model(read_file(path), path.string()); }

}  // namespace splv
