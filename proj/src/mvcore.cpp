#include "lmv/mvcore.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace lmv {

namespace {
void require_grain(int grain) {
  if (grain < 1) throw std::invalid_argument("grain must be positive");
}
void require_same_grain(const TruthValue& a, const TruthValue& b) {
  if (a.grain != b.grain)
    throw std::invalid_argument("mixed-grain operation: " + to_string(a) +
                                " vs " + to_string(b));
}
}  // namespace

TruthValue make_tv(int num, int grain) {
  require_grain(grain);
  if (num < 0 || num > grain)
    throw std::invalid_argument("numerator out of range for grain " +
                                std::to_string(grain));
  return TruthValue{num, grain};
}

std::string to_string(const TruthValue& a) {
  return std::to_string(a.num) + "/" + std::to_string(a.grain);
}

TruthValue neg(TruthValue a) { return {chainop::neg(a.num, a.grain), a.grain}; }

TruthValue imp(TruthValue a, TruthValue b) {
  require_same_grain(a, b);
  return {chainop::imp(a.num, b.num, a.grain), a.grain};
}

TruthValue oplus(TruthValue a, TruthValue b) {
  require_same_grain(a, b);
  return {chainop::oplus(a.num, b.num, a.grain), a.grain};
}

TruthValue odot(TruthValue a, TruthValue b) {
  require_same_grain(a, b);
  return {chainop::odot(a.num, b.num, a.grain), a.grain};
}

TruthValue join(TruthValue a, TruthValue b) {
  require_same_grain(a, b);
  return {chainop::join(a.num, b.num), a.grain};
}

TruthValue meet(TruthValue a, TruthValue b) {
  require_same_grain(a, b);
  return {chainop::meet(a.num, b.num), a.grain};
}

TruthValue embed(TruthValue a, int n) {
  require_grain(n);
  if (n % a.grain != 0)
    throw std::invalid_argument("cannot embed grain " +
                                std::to_string(a.grain) + " into grain " +
                                std::to_string(n));
  return {a.num * (n / a.grain), n};
}

// ---------------------------------------------------------------------------
// UnaryMVTerm

struct UnaryMVTerm::Node {
  Kind kind;
  std::shared_ptr<const Node> a, b;
};

UnaryMVTerm UnaryMVTerm::var() {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::Var, nullptr, nullptr}));
}
UnaryMVTerm UnaryMVTerm::zero() {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::Zero, nullptr, nullptr}));
}
UnaryMVTerm UnaryMVTerm::one() {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::One, nullptr, nullptr}));
}
UnaryMVTerm UnaryMVTerm::neg(UnaryMVTerm a) {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::Neg, a.node_, nullptr}));
}
UnaryMVTerm UnaryMVTerm::imp(UnaryMVTerm a, UnaryMVTerm b) {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::Imp, a.node_, b.node_}));
}
UnaryMVTerm UnaryMVTerm::oplus(UnaryMVTerm a, UnaryMVTerm b) {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::OPlus, a.node_, b.node_}));
}
UnaryMVTerm UnaryMVTerm::odot(UnaryMVTerm a, UnaryMVTerm b) {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::ODot, a.node_, b.node_}));
}
UnaryMVTerm UnaryMVTerm::join(UnaryMVTerm a, UnaryMVTerm b) {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::Join, a.node_, b.node_}));
}
UnaryMVTerm UnaryMVTerm::meet(UnaryMVTerm a, UnaryMVTerm b) {
  return UnaryMVTerm(std::make_shared<Node>(Node{Kind::Meet, a.node_, b.node_}));
}

UnaryMVTerm::Kind UnaryMVTerm::kind() const { return node_->kind; }

UnaryMVTerm UnaryMVTerm::left() const {
  if (!node_->a) throw std::logic_error("term node has no left child");
  return UnaryMVTerm(node_->a);
}
UnaryMVTerm UnaryMVTerm::right() const {
  if (!node_->b) throw std::logic_error("term node has no right child");
  return UnaryMVTerm(node_->b);
}

TruthValue UnaryMVTerm::eval(TruthValue x) const {
  struct Rec {
    int n;
    int go(const Node* t, int x) const {
      switch (t->kind) {
        case Kind::Var: return x;
        case Kind::Zero: return 0;
        case Kind::One: return n;
        case Kind::Neg: return chainop::neg(go(t->a.get(), x), n);
        case Kind::Imp: return chainop::imp(go(t->a.get(), x), go(t->b.get(), x), n);
        case Kind::OPlus: return chainop::oplus(go(t->a.get(), x), go(t->b.get(), x), n);
        case Kind::ODot: return chainop::odot(go(t->a.get(), x), go(t->b.get(), x), n);
        case Kind::Join: return chainop::join(go(t->a.get(), x), go(t->b.get(), x));
        case Kind::Meet: return chainop::meet(go(t->a.get(), x), go(t->b.get(), x));
      }
      throw std::logic_error("unreachable term kind");
    }
  };
  return {Rec{x.grain}.go(node_.get(), x.num), x.grain};
}

std::string UnaryMVTerm::to_string() const {
  switch (kind()) {
    case Kind::Var: return "x";
    case Kind::Zero: return "0";
    case Kind::One: return "1";
    case Kind::Neg: return "~" + left().to_string();
    case Kind::Imp: return "(" + left().to_string() + " -> " + right().to_string() + ")";
    case Kind::OPlus: return "(" + left().to_string() + " (+) " + right().to_string() + ")";
    case Kind::ODot: return "(" + left().to_string() + " (.) " + right().to_string() + ")";
    case Kind::Join: return "(" + left().to_string() + " \\/ " + right().to_string() + ")";
    case Kind::Meet: return "(" + left().to_string() + " /\\ " + right().to_string() + ")";
  }
  throw std::logic_error("unreachable term kind");
}

bool UnaryMVTerm::is_doubling_composition() const {
  if (kind() == Kind::Var) return true;
  if (kind() != Kind::OPlus && kind() != Kind::ODot) return false;
  if (node_->a != node_->b) return false;  // both operands the same shared subterm
  return left().is_doubling_composition();
}

TruthValue eval_unary_term(const UnaryMVTerm& t, TruthValue a) { return t.eval(a); }

std::vector<int> term_profile(const UnaryMVTerm& t, int n) {
  require_grain(n);
  std::vector<int> out(n + 1);
  for (int a = 0; a <= n; ++a) out[a] = t.eval(TruthValue{a, n}).num;
  return out;
}

// ---------------------------------------------------------------------------
// tau synthesis: breadth-first search over the function vectors reachable
// from the identity by pointwise d(x)=x(+)x and s(x)=x(.)x. The search space
// is finite, so either the target step function is found or the exhaustion
// signals a bug.

UnaryMVTerm tau_term(int n, int i) {
  require_grain(n);
  if (i < 1 || i > n)
    throw std::invalid_argument("tau index must satisfy 1 <= i <= n");

  std::vector<int> target(n + 1);
  for (int a = 0; a <= n; ++a) target[a] = (a >= i) ? n : 0;

  std::vector<int> identity(n + 1);
  for (int a = 0; a <= n; ++a) identity[a] = a;

  // parent vector and the op ('d' or 's') that produced each visited vector
  std::map<std::vector<int>, std::pair<std::vector<int>, char>> parent;
  parent.emplace(identity, std::make_pair(std::vector<int>{}, ' '));
  std::deque<std::vector<int>> queue{identity};

  auto build = [&](std::vector<int> cur) {
    std::vector<char> ops;
    while (true) {
      const auto& [prev, op] = parent.at(cur);
      if (op == ' ') break;
      ops.push_back(op);
      cur = prev;
    }
    UnaryMVTerm t = UnaryMVTerm::var();
    for (auto it = ops.rbegin(); it != ops.rend(); ++it)
      t = (*it == 'd') ? UnaryMVTerm::oplus(t, t) : UnaryMVTerm::odot(t, t);
    return t;
  };

  if (identity == target) return build(identity);

  while (!queue.empty()) {
    std::vector<int> f = std::move(queue.front());
    queue.pop_front();
    for (char op : {'d', 's'}) {
      std::vector<int> g(n + 1);
      for (int a = 0; a <= n; ++a)
        g[a] = (op == 'd') ? chainop::oplus(f[a], f[a], n)
                           : chainop::odot(f[a], f[a], n);
      if (parent.emplace(g, std::make_pair(f, op)).second) {
        if (g == target) return build(g);
        queue.push_back(std::move(g));
      }
    }
  }
  throw std::logic_error("tau synthesis failed for n=" + std::to_string(n) +
                         ", i=" + std::to_string(i));
}

// I_m as a lattice combination of taus: one {0,1}-valued disjunct per
// multiple j*(n/m) of 1/m, pinning the value to exactly that point, plus the
// top threshold for a=1.
UnaryMVTerm membership_term(int n, int m) {
  require_grain(n);
  if (m < 1 || n % m != 0)
    throw std::invalid_argument("membership grain must divide the chain grain");

  const int step = n / m;
  UnaryMVTerm acc = tau_term(n, n);  // covers a = 1
  for (int j = 0; j < m; ++j) {
    const int lo = j * step;
    // at-least-lo /\ not-at-least-(lo+1), i.e. "a == lo"; for j = 0 the
    // lower threshold is vacuous.
    UnaryMVTerm point = UnaryMVTerm::neg(tau_term(n, lo + 1));
    if (lo >= 1) point = UnaryMVTerm::meet(tau_term(n, lo), point);
    acc = UnaryMVTerm::join(acc, point);
  }
  return acc;
}

}  // namespace lmv
