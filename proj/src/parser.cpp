#include "dlcert/parser.hpp"

#include <functional>
#include <map>
#include <set>

#include "dlcert/errors.hpp"
#include "lexer.hpp"

namespace dlcert {

const Definition* Model::find_def(const std::string& name) const {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

const NamedProgram* Model::find_program(const std::string& name) const {
  for (const auto& p : programs)
    if (p.name == name) return &p;
  return nullptr;
}

const char* method_name(CutMethod m) {
  switch (m) {
    case CutMethod::DIEq: return "di_eq";
    case CutMethod::DIIneq: return "di_ineq";
    case CutMethod::Darboux: return "darboux";
    case CutMethod::DomainConstraint: return "domain";
  }
  return "?";
}

namespace {

using detail::Tok;
using detail::Token;

bool before(SourcePosition a, SourcePosition b) {
  return a.line < b.line || (a.line == b.line && a.column < b.column);
}

// Parameters live under a name no identifier can spell, so instantiation
// never touches a global variable that happens to share the name.
std::string param_symbol(const std::string& name) { return "%" + name; }

std::string show(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

// Name lookup for definitions, programs and the `const` formula.
class Resolver {
 public:
  virtual ~Resolver() = default;
  virtual bool has_def(const std::string& name) const = 0;
  virtual std::size_t arity(const std::string& name) const = 0;
  virtual Term def_body(const std::string& name) = 0;
  virtual std::vector<std::string> def_params(const std::string& name) const = 0;
  virtual bool has_program(const std::string& name) const = 0;
  virtual Program program_body(const std::string& name) = 0;
  virtual std::optional<Formula> constants() = 0;
};

class NullResolver : public Resolver {
 public:
  bool has_def(const std::string&) const override { return false; }
  std::size_t arity(const std::string&) const override { return 0; }
  Term def_body(const std::string& name) override { throw UndefinedName(name); }
  std::vector<std::string> def_params(const std::string&) const override { return {}; }
  bool has_program(const std::string&) const override { return false; }
  Program program_body(const std::string& name) override { throw UndefinedName(name); }
  std::optional<Formula> constants() override { return std::nullopt; }
};

class ModelResolver : public Resolver {
 public:
  explicit ModelResolver(const Model& m) : m_(m) {}
  bool has_def(const std::string& name) const override { return m_.find_def(name) != nullptr; }
  std::size_t arity(const std::string& name) const override {
    return m_.find_def(name)->params.size();
  }
  Term def_body(const std::string& name) override { return m_.find_def(name)->body; }
  std::vector<std::string> def_params(const std::string& name) const override {
    return m_.find_def(name)->params;
  }
  bool has_program(const std::string& name) const override {
    return m_.find_program(name) != nullptr;
  }
  Program program_body(const std::string& name) override {
    const NamedProgram* p = m_.find_program(name);
    if (!p) throw UndefinedName(name);
    return p->body;
  }
  std::optional<Formula> constants() override { return m_.constants; }

 private:
  const Model& m_;
};

class Parser {
 public:
  Parser(const std::vector<Token>& toks, std::size_t begin, std::size_t end, Resolver& res,
         std::set<std::string> params = {})
      : toks_(toks), pos_(begin), end_(end), res_(res), params_(std::move(params)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < end_ ? toks_[i] : end_token();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const char* w) const { return at(Tok::Ident) && peek().text == w; }
  bool done() const { return pos_ >= end_ || toks_[pos_].kind == Tok::End; }

  const Token& take() {
    const Token& t = peek();
    if (pos_ < end_) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().pos, std::move(expected), show(peek()));
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail({detail::describe(k)});
    return take();
  }

  void expect_word(const char* w) {
    if (!at_word(w)) fail({std::string("'") + w + "'"});
    take();
  }

  std::string expect_name() {
    if (!at(Tok::Ident) || detail::is_reserved(peek().text)) fail({"identifier"});
    return take().text;
  }

  void expect_end() {
    if (!done()) fail({"end of section"});
  }

  // ---- terms ----

  Term term() {
    Term l = product();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      bool plus = take().kind == Tok::Plus;
      Term r = product();
      l = plus ? Term::add(l, r) : Term::sub(l, r);
    }
    return l;
  }

  Term product() {
    Term l = unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      bool mul = take().kind == Tok::Star;
      Term r = unary();
      l = mul ? Term::mul(l, r) : Term::div(l, r);
    }
    return l;
  }

  Term unary() {
    if (at(Tok::Minus)) {
      take();
      return Term::neg(unary());
    }
    return power();
  }

  Term power() {
    Term base = primary();
    while (at(Tok::Caret)) {
      take();
      if (!at(Tok::Number) || peek().value.get_den() != 1 || peek().value < 0 ||
          peek().text.find('.') != std::string::npos)
        fail({"integer exponent"});
      unsigned long e = take().value.get_num().get_ui();
      base = Term::pow(base, static_cast<unsigned>(e));
    }
    return base;
  }

  Term primary() {
    if (at(Tok::Number)) return Term::lit(take().value);
    if (at(Tok::LParen)) {
      take();
      Term t = term();
      expect(Tok::RParen);
      return t;
    }
    if (at(Tok::Ident)) {
      const Token& tok = peek();
      const std::string name = tok.text;
      if (name == "min" || name == "max") {
        take();
        expect(Tok::LParen);
        Term a = term();
        expect(Tok::Comma);
        Term b = term();
        expect(Tok::RParen);
        return name == "min" ? Term::min(a, b) : Term::max(a, b);
      }
      if (detail::is_reserved(name)) fail({"term"});
      take();
      if (params_.count(name)) return Term::var(param_symbol(name));
      if (at(Tok::LParen)) {
        if (!res_.has_def(name)) throw UndefinedName(name);
        take();
        std::vector<Term> args;
        if (!at(Tok::RParen)) {
          args.push_back(term());
          while (at(Tok::Comma)) {
            take();
            args.push_back(term());
          }
        }
        std::size_t want = res_.arity(name);
        if (args.size() != want) fail({std::to_string(want) + " argument(s) for '" + name + "'"});
        expect(Tok::RParen);
        return instantiate(name, args);
      }
      if (res_.has_def(name)) {
        if (res_.arity(name) != 0) fail({"'(' after '" + name + "'"});
        return res_.def_body(name);
      }
      return Term::var(name);
    }
    fail({"term"});
  }

  Term instantiate(const std::string& name, const std::vector<Term>& args) {
    Term body = res_.def_body(name);
    std::vector<std::string> ps = res_.def_params(name);
    Substitution s;
    for (std::size_t i = 0; i < ps.size(); ++i) s[param_symbol(ps[i])] = args[i];
    return substitute(body, s);
  }

  // ---- formulas ----

  Formula formula() {
    Formula l = disjunction();
    if (at(Tok::Arrow)) {
      take();
      return Formula::implies(l, formula());
    }
    return l;
  }

  Formula disjunction() {
    Formula l = conjunction_();
    while (at(Tok::Bar)) {
      take();
      l = Formula::disj(l, conjunction_());
    }
    return l;
  }

  Formula conjunction_() {
    Formula l = prefix();
    while (at(Tok::Amp)) {
      take();
      l = Formula::conj(l, prefix());
    }
    return l;
  }

  Formula prefix() {
    if (at(Tok::Bang)) {
      take();
      return Formula::negation(prefix());
    }
    if (at(Tok::LBracket)) {
      take();
      Program p = program();
      expect(Tok::RBracket);
      return Formula::box(p, prefix());
    }
    if (at(Tok::Lt)) {
      take();
      Program p = program();
      expect(Tok::Gt);
      return Formula::diamond(p, prefix());
    }
    return atom();
  }

  Formula atom() {
    if (at_word("true")) {
      take();
      return Formula::truth();
    }
    if (at_word("false")) {
      take();
      return Formula::falsity();
    }
    if (at_word("const")) {
      SourcePosition p = peek().pos;
      take();
      auto c = res_.constants();
      if (!c) throw SyntaxError(p, {"formula"}, "'const' outside a model");
      return *c;
    }
    if (at(Tok::LParen)) {
      // Either a parenthesised term opening a comparison or a parenthesised
      // formula; try both and report the error that got further.
      std::size_t save = pos_;
      try {
        return comparison();
      } catch (const SyntaxError& e1) {
        pos_ = save;
        try {
          take();
          Formula f = formula();
          expect(Tok::RParen);
          return f;
        } catch (const SyntaxError& e2) {
          if (before(e2.position(), e1.position())) throw e1;
          throw;
        }
      }
    }
    return comparison();
  }

  Formula comparison() {
    Term l = term();
    CmpOp op;
    switch (peek().kind) {
      case Tok::Ge: op = CmpOp::Ge; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      default:
        fail({"comparison operator"});
    }
    take();
    Term r = term();
    return Formula::cmp(l, op, r);
  }

  // ---- programs ----

  Program program() {
    Program l = sequence();
    while (at(Tok::PlusPlus)) {
      take();
      l = Program::choice(l, sequence());
    }
    return l;
  }

  bool starts_statement() const {
    if (at(Tok::Question) || at(Tok::LBrace)) return true;
    if (!at(Tok::Ident)) return false;
    const std::string& w = peek().text;
    return w == "if" || w == "while" || !detail::is_reserved(w);
  }

  Program sequence() {
    if (!starts_statement()) fail({"'?'", "'{'", "assignment", "program name", "'if'", "'while'"});
    Program s = statement();
    while (starts_statement()) s = Program::seq(s, statement());
    return s;
  }

  Program maybe_loop(Program p) {
    while (at(Tok::Star)) {
      take();
      p = Program::loop(p);
    }
    return p;
  }

  Program statement() {
    if (at(Tok::Question)) {
      take();
      Formula f = formula();
      expect(Tok::Semi);
      return Program::test(f);
    }
    if (at(Tok::LBrace)) {
      take();
      if (at(Tok::Ident) && peek(1).kind == Tok::Prime) return maybe_loop(ode());
      Program p = program();
      expect(Tok::RBrace);
      return maybe_loop(p);
    }
    if (at_word("if")) {
      take();
      expect(Tok::LParen);
      Formula cond = formula();
      expect(Tok::RParen);
      Program then = block();
      Program otherwise = Program::test(Formula::negation(cond));
      if (at_word("else")) {
        take();
        Program alt = at_word("if") ? statement() : block();
        otherwise = Program::seq(otherwise, alt);
      }
      return Program::choice(Program::seq(Program::test(cond), then), otherwise);
    }
    if (at_word("while")) {
      take();
      expect(Tok::LParen);
      Formula cond = formula();
      expect(Tok::RParen);
      Program body = block();
      return Program::seq(Program::loop(Program::seq(Program::test(cond), body)),
                          Program::test(Formula::negation(cond)));
    }
    std::string name = expect_name();
    if (at(Tok::Assign)) {
      take();
      Term value = term();
      expect(Tok::Semi);
      return Program::assign(name, value);
    }
    if (!res_.has_program(name)) throw UndefinedName(name);
    Program p = res_.program_body(name);
    if (at(Tok::Semi)) take();
    return maybe_loop(p);
  }

  Program block() {
    expect(Tok::LBrace);
    Program p = program();
    expect(Tok::RBrace);
    return p;
  }

  // After the opening brace.
  Program ode() {
    std::vector<OdeEquation> eqs;
    std::set<std::string> seen;
    while (true) {
      SourcePosition at_name = peek().pos;
      std::string var = expect_name();
      if (!seen.insert(var).second)
        throw SyntaxError(at_name, {"a variable not yet differentiated"}, "'" + var + "'");
      expect(Tok::Prime);
      expect(Tok::Eq);
      eqs.push_back({var, term()});
      if (!at(Tok::Comma)) break;
      take();
    }
    Formula domain = Formula::truth();
    if (at(Tok::Amp)) {
      take();
      domain = formula();
    }
    if (!at(Tok::RBrace)) fail({"','", "'&'", "'}'"});
    take();
    return Program::ode(std::move(eqs), domain);
  }

 private:
  static const Token& end_token() {
    static const Token t = [] {
      Token e;
      e.kind = Tok::End;
      return e;
    }();
    return t;
  }

  const std::vector<Token>& toks_;
  std::size_t pos_;
  std::size_t end_;
  Resolver& res_;
  std::set<std::string> params_;

 public:
  std::size_t position() const { return pos_; }
};

struct Section {
  std::string keyword;
  std::size_t begin;  // first token after the keyword
  std::size_t end;
  SourcePosition pos;
};

std::vector<Section> split_sections(const std::vector<Token>& toks,
                                    const std::set<std::string>& keywords) {
  std::vector<Section> out;
  std::size_t n = toks.size() - 1;  // drop End
  if (n == 0) return out;
  if (!(toks[0].kind == Tok::Ident && keywords.count(toks[0].text))) {
    std::vector<std::string> exp;
    for (const auto& k : keywords) exp.push_back("'" + k + "'");
    throw SyntaxError(toks[0].pos, exp, show(toks[0]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = toks[i];
    if (t.line_start && t.kind == Tok::Ident && keywords.count(t.text)) {
      if (!out.empty()) out.back().end = i;
      out.push_back({t.text, i + 1, n, t.pos});
    }
  }
  return out;
}

class FileResolver : public Resolver {
 public:
  struct DefEntry {
    std::vector<std::string> params;
    std::size_t begin = 0, end = 0;
    int state = 0;  // 0 fresh, 1 expanding, 2 done
    Term body;
  };
  struct ProgEntry {
    std::size_t begin = 0, end = 0;
    int state = 0;
    Program body;
  };

  explicit FileResolver(const std::vector<Token>& toks) : toks_(toks) {}

  std::map<std::string, DefEntry> defs;
  std::map<std::string, ProgEntry> progs;
  std::vector<std::pair<std::size_t, std::size_t>> const_spans;
  int const_state = 0;
  std::optional<Formula> const_value;

  bool has_def(const std::string& name) const override { return defs.count(name) > 0; }
  std::size_t arity(const std::string& name) const override {
    return defs.at(name).params.size();
  }
  std::vector<std::string> def_params(const std::string& name) const override {
    return defs.at(name).params;
  }
  Term def_body(const std::string& name) override {
    DefEntry& d = defs.at(name);
    if (d.state == 1) throw RecursiveDefinition(name);
    if (d.state == 0) {
      d.state = 1;
      std::set<std::string> ps(d.params.begin(), d.params.end());
      Parser p(toks_, d.begin, d.end, *this, ps);
      Term t = p.term();
      p.expect_end();
      d.body = t;
      d.state = 2;
    }
    return d.body;
  }
  bool has_program(const std::string& name) const override { return progs.count(name) > 0; }
  Program program_body(const std::string& name) override {
    auto it = progs.find(name);
    if (it == progs.end()) throw UndefinedName(name);
    ProgEntry& e = it->second;
    if (e.state == 1) throw RecursiveDefinition(name);
    if (e.state == 0) {
      e.state = 1;
      Parser p(toks_, e.begin, e.end, *this);
      Program body = p.program();
      p.expect_end();
      e.body = body;
      e.state = 2;
    }
    return e.body;
  }
  std::optional<Formula> constants() override {
    if (const_state == 1) throw RecursiveDefinition("const");
    if (const_state == 0) {
      const_state = 1;
      std::vector<Formula> parts;
      for (auto [b, e] : const_spans) {
        Parser p(toks_, b, e, *this);
        parts.push_back(p.formula());
        p.expect_end();
      }
      const_value = conjunction(parts);
      const_state = 2;
    }
    return const_value;
  }

 private:
  const std::vector<Token>& toks_;
};

void check_fresh(bool exists, const Token& name_tok) {
  if (exists) throw SyntaxError(name_tok.pos, {"a fresh name"}, show(name_tok));
}

Certificate parse_certificate_with(const std::string& text, Resolver& res) {
  std::vector<Token> toks = detail::lex(text);
  auto sections = split_sections(toks, {"certificate", "loop_invariant", "cut", "variant"});
  Certificate cert;
  bool have_variant = false;
  for (const auto& s : sections) {
    Parser p(toks, s.begin, s.end, res);
    if (s.keyword == "certificate") {
      p.expect_word("for");
      cert.model = p.expect_name();
      p.expect_end();
    } else if (s.keyword == "loop_invariant") {
      cert.loop_invariant = p.formula();
      p.expect_end();
    } else if (s.keyword == "cut") {
      CutStep step;
      step.formula = p.formula();
      p.expect_word("by");
      if (!p.at(Tok::Ident)) p.fail({"cut method"});
      std::string m = p.take().text;
      if (m == "di_eq") {
        step.method = CutMethod::DIEq;
      } else if (m == "di_ineq") {
        step.method = CutMethod::DIIneq;
      } else if (m == "darboux") {
        step.method = CutMethod::Darboux;
        p.expect_word("cofactor");
        step.cofactor = p.term();
      } else if (m == "domain") {
        step.method = CutMethod::DomainConstraint;
      } else {
        throw UnknownMethod(m);
      }
      p.expect_end();
      cert.cuts.push_back(step);
      if (!have_variant) cert.cuts_before_variant = cert.cuts.size();
    } else if (s.keyword == "variant") {
      if (have_variant) throw SyntaxError(s.pos, {"a single variant"}, "'variant'");
      Variant v;
      v.progress = p.term();
      p.expect_word("bound");
      v.bound = p.term();
      p.expect_end();
      cert.variant = v;
      have_variant = true;
    }
  }
  if (!have_variant) cert.cuts_before_variant = cert.cuts.size();
  return cert;
}

}  // namespace

Model parse_model(const std::string& text) {
  std::vector<Token> toks = detail::lex(text);
  auto sections = split_sections(toks, {"model", "def", "const", "program", "theorem"});
  FileResolver res(toks);
  Model model;
  std::vector<std::string> def_order, prog_order;
  std::optional<std::pair<std::size_t, std::size_t>> theorem_span;

  for (const auto& s : sections) {
    Parser p(toks, s.begin, s.end, res);
    if (s.keyword == "model") {
      model.name = p.expect_name();
      p.expect_end();
    } else if (s.keyword == "def") {
      const Token& name_tok = p.peek();
      std::string name = p.expect_name();
      check_fresh(res.defs.count(name) || res.progs.count(name), name_tok);
      FileResolver::DefEntry d;
      if (p.at(Tok::LParen)) {
        p.take();
        if (!p.at(Tok::RParen)) {
          d.params.push_back(p.expect_name());
          while (p.at(Tok::Comma)) {
            p.take();
            d.params.push_back(p.expect_name());
          }
        }
        p.expect(Tok::RParen);
      }
      p.expect(Tok::Eq);
      d.begin = p.position();
      d.end = s.end;
      if (d.begin >= d.end) p.fail({"term"});
      res.defs[name] = d;
      def_order.push_back(name);
    } else if (s.keyword == "const") {
      res.const_spans.emplace_back(s.begin, s.end);
      if (s.begin >= s.end) p.fail({"formula"});
    } else if (s.keyword == "program") {
      const Token& name_tok = p.peek();
      std::string name = p.expect_name();
      check_fresh(res.defs.count(name) || res.progs.count(name), name_tok);
      p.expect(Tok::Eq);
      FileResolver::ProgEntry e;
      e.begin = p.position();
      e.end = s.end;
      if (e.begin >= e.end) p.fail({"program"});
      res.progs[name] = e;
      prog_order.push_back(name);
    } else if (s.keyword == "theorem") {
      if (theorem_span) throw SyntaxError(s.pos, {"a single theorem"}, "'theorem'");
      theorem_span = std::make_pair(s.begin, s.end);
    }
  }

  for (const auto& name : def_order) {
    res.def_body(name);
    const auto& d = res.defs.at(name);
    model.defs.push_back({name, d.params, d.body});
  }
  for (const auto& name : prog_order) model.programs.push_back({name, res.program_body(name)});
  model.constants = *res.constants();
  if (!theorem_span) throw SyntaxError(toks.back().pos, {"'theorem'"}, "end of input");
  {
    Parser p(toks, theorem_span->first, theorem_span->second, res);
    model.theorem = p.formula();
    p.expect_end();
  }

  std::set<std::string> used;
  collect_vars(model.theorem, used);
  collect_vars(model.constants, used);
  for (const auto& np : model.programs) collect_vars(np.body, used);
  std::set<std::string> listed;
  for (const auto& t : toks)
    if (t.kind == Tok::Ident && used.count(t.text) && listed.insert(t.text).second)
      model.variables.push_back(t.text);
  return model;
}

Certificate parse_certificate(const std::string& text) {
  NullResolver res;
  return parse_certificate_with(text, res);
}

Certificate parse_certificate(const std::string& text, const Model& model) {
  ModelResolver res(model);
  return parse_certificate_with(text, res);
}

namespace {

template <class T>
T parse_fragment(const std::string& text, Resolver& res, const std::function<T(Parser&)>& f) {
  std::vector<Token> toks = detail::lex(text);
  Parser p(toks, 0, toks.size() - 1, res);
  T out = f(p);
  p.expect_end();
  return out;
}

}  // namespace

Term parse_term(const std::string& text) {
  NullResolver res;
  return parse_fragment<Term>(text, res, [](Parser& p) { return p.term(); });
}

Term parse_term(const std::string& text, const Model& model) {
  ModelResolver res(model);
  return parse_fragment<Term>(text, res, [](Parser& p) { return p.term(); });
}

Formula parse_formula(const std::string& text) {
  NullResolver res;
  return parse_fragment<Formula>(text, res, [](Parser& p) { return p.formula(); });
}

Formula parse_formula(const std::string& text, const Model& model) {
  ModelResolver res(model);
  return parse_fragment<Formula>(text, res, [](Parser& p) { return p.formula(); });
}

Program parse_program(const std::string& text) {
  NullResolver res;
  return parse_fragment<Program>(text, res, [](Parser& p) { return p.program(); });
}

}  // namespace dlcert
