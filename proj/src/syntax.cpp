#include "lmv/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

namespace lmv {

int Signature::arity(const std::string& name) const {
  auto it = modalities.find(name);
  if (it == modalities.end())
    throw std::invalid_argument("unknown modality: " + name);
  return it->second;
}

void Signature::validate() const {
  static const std::set<std::string> reserved = {"x"};
  for (const auto& [name, k] : modalities) {
    if (name.empty()) throw std::invalid_argument("empty modality name");
    if (k < 1)
      throw std::invalid_argument("modality " + name + " must have arity >= 1");
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_')
      throw std::invalid_argument("modality name must be an identifier: " + name);
    for (char c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        throw std::invalid_argument("modality name must be an identifier: " + name);
    if (reserved.count(name))
      throw std::invalid_argument("reserved name used as modality: " + name);
  }
}

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
  Kind kind;
  std::string name;            // Var / Modal
  int k = 0;                   // KTimes / KPower
  std::vector<Formula> args;
};

Formula Formula::make(Kind kind, std::string name, int k,
                      std::vector<Formula> args) {
  return Formula(std::make_shared<const Node>(
      Node{kind, std::move(name), k, std::move(args)}));
}

Formula Formula::var(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return make(Kind::Var, std::move(name), 0, {});
}
Formula Formula::zero() { return make(Kind::Zero, {}, 0, {}); }
Formula Formula::one() { return make(Kind::One, {}, 0, {}); }
Formula Formula::neg(Formula a) {
  return make(Kind::Neg, {}, 0, {std::move(a)});
}
Formula Formula::imp(Formula a, Formula b) {
  return make(Kind::Imp, {}, 0, {std::move(a), std::move(b)});
}
Formula Formula::modal(std::string name, std::vector<Formula> args) {
  if (args.empty()) throw std::invalid_argument("modality needs arguments");
  return make(Kind::Modal, std::move(name), 0, std::move(args));
}
Formula Formula::oplus(Formula a, Formula b) {
  return make(Kind::OPlus, {}, 0, {std::move(a), std::move(b)});
}
Formula Formula::odot(Formula a, Formula b) {
  return make(Kind::ODot, {}, 0, {std::move(a), std::move(b)});
}
Formula Formula::join(Formula a, Formula b) {
  return make(Kind::Join, {}, 0, {std::move(a), std::move(b)});
}
Formula Formula::meet(Formula a, Formula b) {
  return make(Kind::Meet, {}, 0, {std::move(a), std::move(b)});
}
Formula Formula::ktimes(int k, Formula a) {
  if (k < 0) throw std::invalid_argument("negative repetition");
  return make(Kind::KTimes, {}, k, {std::move(a)});
}
Formula Formula::kpower(int k, Formula a) {
  if (k < 0) throw std::invalid_argument("negative repetition");
  return make(Kind::KPower, {}, k, {std::move(a)});
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
int Formula::repeat() const { return node_->k; }
size_t Formula::child_count() const { return node_->args.size(); }
Formula Formula::child(size_t i) const { return node_->args.at(i); }
const void* Formula::id() const { return node_.get(); }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->kind != other.node_->kind) return false;
  if (node_->name != other.node_->name) return false;
  if (node_->k != other.node_->k) return false;
  if (node_->args.size() != other.node_->args.size()) return false;
  for (size_t i = 0; i < node_->args.size(); ++i)
    if (node_->args[i] != other.node_->args[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer / parser

namespace {

enum class Tok {
  End, Ident, Int, Tilde, Arrow, OPlus, ODot, Or, And,
  LParen, RParen, Comma, Dot, Caret
};

struct Token {
  Tok kind;
  std::string text;
  int value = 0;
  size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(&s) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    const std::string& s = *s_;
    while (i_ < s.size() && std::isspace(static_cast<unsigned char>(s[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= s.size()) {
      tok_ = {Tok::End, "", 0, i_};
      return;
    }
    char c = s[i_];
    auto two = [&](char a, char b) {
      return c == a && i_ + 1 < s.size() && s[i_ + 1] == b;
    };
    if (c == '(' && i_ + 2 < s.size() && s[i_ + 1] == '+' && s[i_ + 2] == ')') {
      tok_ = {Tok::OPlus, "(+)", 0, i_};
      i_ += 3;
    } else if (c == '(' && i_ + 2 < s.size() && s[i_ + 1] == '.' && s[i_ + 2] == ')') {
      tok_ = {Tok::ODot, "(.)", 0, i_};
      i_ += 3;
    } else if (c == '(') {
      tok_ = {Tok::LParen, "(", 0, i_};
      ++i_;
    } else if (c == ')') {
      tok_ = {Tok::RParen, ")", 0, i_};
      ++i_;
    } else if (c == ',') {
      tok_ = {Tok::Comma, ",", 0, i_};
      ++i_;
    } else if (c == '~') {
      tok_ = {Tok::Tilde, "~", 0, i_};
      ++i_;
    } else if (c == '^') {
      tok_ = {Tok::Caret, "^", 0, i_};
      ++i_;
    } else if (c == '.') {
      tok_ = {Tok::Dot, ".", 0, i_};
      ++i_;
    } else if (two('-', '>')) {
      tok_ = {Tok::Arrow, "->", 0, i_};
      i_ += 2;
    } else if (two('\\', '/')) {
      tok_ = {Tok::Or, "\\/", 0, i_};
      i_ += 2;
    } else if (two('/', '\\')) {
      tok_ = {Tok::And, "/\\", 0, i_};
      i_ += 2;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      Token t{Tok::Int, s.substr(i_, j - i_), 0, i_};
      t.value = std::stoi(t.text);
      tok_ = t;
      i_ = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      tok_ = {Tok::Ident, s.substr(i_, j - i_), 0, i_};
      i_ = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }
  }

  const std::string* s_;
  size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : lex_(text), sig_(sig) {}

  Formula parse_all() {
    Formula f = formula();
    if (lex_.peek().kind != Tok::End)
      throw ParseError("trailing input after formula", lex_.peek().pos);
    return f;
  }

 private:
  Formula formula() {  // -> level, right-associative
    Formula lhs = level_or();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return Formula::imp(std::move(lhs), formula());
    }
    return lhs;
  }

  Formula level_or() {
    Formula f = level_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      f = Formula::join(std::move(f), level_and());
    }
    return f;
  }

  Formula level_and() {
    Formula f = level_oplus();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      f = Formula::meet(std::move(f), level_oplus());
    }
    return f;
  }

  Formula level_oplus() {
    Formula f = level_odot();
    while (lex_.peek().kind == Tok::OPlus) {
      lex_.take();
      f = Formula::oplus(std::move(f), level_odot());
    }
    return f;
  }

  Formula level_odot() {
    Formula f = unary();
    while (lex_.peek().kind == Tok::ODot) {
      lex_.take();
      f = Formula::odot(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    if (lex_.peek().kind == Tok::Tilde) {
      lex_.take();
      return Formula::neg(unary());
    }
    if (lex_.peek().kind == Tok::Int) {
      // either the k of "k.f" or a 0/1 constant handled by primary()
      Token t = lex_.peek();
      Lexer save = lex_;  // cheap: lexer holds a reference plus indices
      lex_.take();
      if (lex_.peek().kind == Tok::Dot) {
        lex_.take();
        return Formula::ktimes(t.value, unary());
      }
      lex_ = save;
    }
    return postfix();
  }

  Formula postfix() {
    Formula f = primary();
    while (lex_.peek().kind == Tok::Caret) {
      lex_.take();
      Token t = lex_.take();
      if (t.kind != Tok::Int) throw ParseError("expected integer after ^", t.pos);
      f = Formula::kpower(t.value, std::move(f));
    }
    return f;
  }

  Formula primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::LParen: {
        Formula f = formula();
        Token close = lex_.take();
        if (close.kind != Tok::RParen)
          throw ParseError("expected ')'", close.pos);
        return f;
      }
      case Tok::Int:
        if (t.value == 0) return Formula::zero();
        if (t.value == 1) return Formula::one();
        throw ParseError("integer constant must be 0 or 1", t.pos);
      case Tok::Ident: {
        if (sig_.is_modality(t.text)) {
          Token open = lex_.take();
          if (open.kind != Tok::LParen)
            throw ParseError("modality " + t.text + " needs arguments", open.pos);
          std::vector<Formula> args;
          args.push_back(formula());
          while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            args.push_back(formula());
          }
          Token close = lex_.take();
          if (close.kind != Tok::RParen)
            throw ParseError("expected ')'", close.pos);
          int k = sig_.arity(t.text);
          if (static_cast<int>(args.size()) != k)
            throw ParseError("modality " + t.text + " expects " +
                                 std::to_string(k) + " arguments, got " +
                                 std::to_string(args.size()),
                             t.pos);
          return Formula::modal(t.text, std::move(args));
        }
        return Formula::var(t.text);
      }
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.pos);
    }
  }

  Lexer lex_;
  const Signature& sig_;
};

}  // namespace

Formula parse(const std::string& text, const Signature& sig) {
  sig.validate();
  return Parser(text, sig).parse_all();
}

// ---------------------------------------------------------------------------
// Printer. Binding strengths, loosest to tightest:
//   -> (10, right)  \/ (20)  /\ (30)  (+) (40)  (.) (50)  unary (60/70)

namespace {

int prec_of(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Imp: return 10;
    case Formula::Kind::Join: return 20;
    case Formula::Kind::Meet: return 30;
    case Formula::Kind::OPlus: return 40;
    case Formula::Kind::ODot: return 50;
    case Formula::Kind::Neg:
    case Formula::Kind::KTimes: return 60;
    case Formula::Kind::KPower: return 70;
    default: return 100;
  }
}

std::string render(const Formula& f, int min_prec) {
  std::string s;
  switch (f.kind()) {
    case Formula::Kind::Var: s = f.name(); break;
    case Formula::Kind::Zero: s = "0"; break;
    case Formula::Kind::One: s = "1"; break;
    case Formula::Kind::Neg: s = "~" + render(f.child(0), 60); break;
    case Formula::Kind::KTimes:
      s = std::to_string(f.repeat()) + "." + render(f.child(0), 60);
      break;
    case Formula::Kind::KPower:
      s = render(f.child(0), 70) + "^" + std::to_string(f.repeat());
      break;
    case Formula::Kind::Imp:
      s = render(f.child(0), 11) + " -> " + render(f.child(1), 10);
      break;
    case Formula::Kind::Join:
      s = render(f.child(0), 20) + " \\/ " + render(f.child(1), 21);
      break;
    case Formula::Kind::Meet:
      s = render(f.child(0), 30) + " /\\ " + render(f.child(1), 31);
      break;
    case Formula::Kind::OPlus:
      s = render(f.child(0), 40) + " (+) " + render(f.child(1), 41);
      break;
    case Formula::Kind::ODot:
      s = render(f.child(0), 50) + " (.) " + render(f.child(1), 51);
      break;
    case Formula::Kind::Modal: {
      s = f.name() + "(";
      for (size_t i = 0; i < f.child_count(); ++i) {
        if (i) s += ", ";
        s += render(f.child(i), 0);
      }
      s += ")";
      break;
    }
  }
  if (prec_of(f) < min_prec) return "(" + s + ")";
  return s;
}

}  // namespace

std::string print(const Formula& f) { return render(f, 0); }

// ---------------------------------------------------------------------------
// Desugaring and the power fragment

Formula desugar(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Var:
    case K::One:
      return f;
    case K::Zero:
      return Formula::neg(Formula::one());
    case K::Neg:
      return Formula::neg(desugar(f.child(0)));
    case K::Imp:
      return Formula::imp(desugar(f.child(0)), desugar(f.child(1)));
    case K::Modal: {
      std::vector<Formula> args;
      for (size_t i = 0; i < f.child_count(); ++i)
        args.push_back(desugar(f.child(i)));
      return Formula::modal(f.name(), std::move(args));
    }
    case K::OPlus: {  // a (+) b == ~a -> b
      Formula a = desugar(f.child(0));
      return Formula::imp(Formula::neg(std::move(a)), desugar(f.child(1)));
    }
    case K::ODot:  // a (.) b == ~(~a (+) ~b)
      return desugar(Formula::neg(
          Formula::oplus(Formula::neg(f.child(0)), Formula::neg(f.child(1)))));
    case K::Join:  // a \/ b == (b (.) ~a) (+) a
      return desugar(Formula::oplus(
          Formula::odot(f.child(1), Formula::neg(f.child(0))), f.child(0)));
    case K::Meet:  // a /\ b == (b (+) ~a) (.) a
      return desugar(Formula::odot(
          Formula::oplus(f.child(1), Formula::neg(f.child(0))), f.child(0)));
    case K::KTimes: {
      int k = f.repeat();
      if (k == 0) return desugar(Formula::zero());
      Formula acc = f.child(0);
      for (int i = 1; i < k; ++i) acc = Formula::oplus(std::move(acc), f.child(0));
      return desugar(acc);
    }
    case K::KPower: {
      int k = f.repeat();
      if (k == 0) return Formula::one();
      Formula acc = f.child(0);
      for (int i = 1; i < k; ++i) acc = Formula::odot(std::move(acc), f.child(0));
      return desugar(acc);
    }
  }
  throw std::logic_error("unreachable formula kind");
}

Formula tr_n(const Formula& f, int m) {
  if (m < 1) throw std::invalid_argument("tr_n grain must be >= 1");
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Var:
      return Formula::kpower(m, f);
    case K::Zero:
    case K::One:
      return f;
    default: {
      std::vector<Formula> args;
      for (size_t i = 0; i < f.child_count(); ++i)
        args.push_back(tr_n(f.child(i), m));
      switch (f.kind()) {
        case K::Neg: return Formula::neg(std::move(args[0]));
        case K::Imp: return Formula::imp(std::move(args[0]), std::move(args[1]));
        case K::Modal: return Formula::modal(f.name(), std::move(args));
        case K::OPlus: return Formula::oplus(std::move(args[0]), std::move(args[1]));
        case K::ODot: return Formula::odot(std::move(args[0]), std::move(args[1]));
        case K::Join: return Formula::join(std::move(args[0]), std::move(args[1]));
        case K::Meet: return Formula::meet(std::move(args[0]), std::move(args[1]));
        case K::KTimes: return Formula::ktimes(f.repeat(), std::move(args[0]));
        case K::KPower: return Formula::kpower(f.repeat(), std::move(args[0]));
        default: break;
      }
    }
  }
  throw std::logic_error("unreachable formula kind");
}

namespace {

// Recognize the desugared image of an odot-association of bare occurrences
// of one variable; returns the variable and the factor count.
std::optional<std::pair<std::string, int>> match_var_power(const Formula& f) {
  using K = Formula::Kind;
  if (f.kind() == K::Var) return std::make_pair(f.name(), 1);
  // desugar(a (.) b) = ~(~~a -> ~b)
  if (f.kind() != K::Neg) return std::nullopt;
  Formula body = f.child(0);
  if (body.kind() != K::Imp) return std::nullopt;
  Formula l = body.child(0), r = body.child(1);
  if (l.kind() != K::Neg || r.kind() != K::Neg) return std::nullopt;
  Formula ll = l.child(0);
  if (ll.kind() != K::Neg) return std::nullopt;
  auto a = match_var_power(ll.child(0));
  auto b = match_var_power(r.child(0));
  if (!a || !b || a->first != b->first) return std::nullopt;
  return std::make_pair(a->first, a->second + b->second);
}

bool pform_core(const Formula& f, int m) {
  using K = Formula::Kind;
  if (auto p = match_var_power(f); p && p->second == m) return true;
  switch (f.kind()) {
    case K::One: return true;
    case K::Var: return false;  // bare variable, and m != 1 since the match failed
    case K::Neg: return pform_core(f.child(0), m);
    case K::Imp: return pform_core(f.child(0), m) && pform_core(f.child(1), m);
    case K::Modal:
      for (size_t i = 0; i < f.child_count(); ++i)
        if (!pform_core(f.child(i), m)) return false;
      return true;
    default:
      throw std::logic_error("pform check expects a desugared formula");
  }
}

}  // namespace

bool is_pform(const Formula& f, int m) {
  if (m < 1) throw std::invalid_argument("fragment grain must be >= 1");
  return pform_core(desugar(f), m);
}

std::vector<std::string> variables(const Formula& f) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  struct Rec {
    std::vector<std::string>& out;
    std::set<std::string>& seen;
    void go(const Formula& g) {
      if (g.kind() == Formula::Kind::Var) {
        if (seen.insert(g.name()).second) out.push_back(g.name());
        return;
      }
      for (size_t i = 0; i < g.child_count(); ++i) go(g.child(i));
    }
  };
  Rec{out, seen}.go(f);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  struct Rec {
    std::vector<Formula>& out;
    void go(const Formula& g) {
      for (const Formula& h : out)
        if (h == g) return;
      out.push_back(g);
      for (size_t i = 0; i < g.child_count(); ++i) go(g.child(i));
    }
  };
  Rec{out}.go(f);
  return out;
}

int depth(const Formula& f) {
  int d = 0;
  for (size_t i = 0; i < f.child_count(); ++i)
    d = std::max(d, 1 + depth(f.child(i)));
  return d;
}

}  // namespace lmv
