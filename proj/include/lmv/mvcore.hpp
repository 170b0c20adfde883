#pragma once

// Arithmetic of the finite Lukasiewicz chain {0, 1/n, ..., 1} and synthesis
// of its characteristic unary terms (threshold steps and membership
// indicators), all over exact integer numerators.

#include <memory>
#include <string>
#include <vector>

namespace lmv {

/// Element i/n of the (n+1)-element chain. Values of different grain never
/// mix implicitly; cross-grain use goes through embed().
struct TruthValue {
  int num = 0;    // numerator, 0..grain
  int grain = 1;  // the fixed n

  friend bool operator==(const TruthValue&, const TruthValue&) = default;
};

TruthValue make_tv(int num, int grain);
std::string to_string(const TruthValue& a);

TruthValue neg(TruthValue a);
TruthValue imp(TruthValue a, TruthValue b);
TruthValue oplus(TruthValue a, TruthValue b);
TruthValue odot(TruthValue a, TruthValue b);
TruthValue join(TruthValue a, TruthValue b);
TruthValue meet(TruthValue a, TruthValue b);

/// Embed a value of grain m into grain n; requires m | n.
TruthValue embed(TruthValue a, int n);

// Numerator-level connectives for hot loops. Arguments are numerators over
// a shared grain n; callers are responsible for grain agreement.
namespace chainop {
inline int neg(int a, int n) { return n - a; }
inline int imp(int a, int b, int n) {
  int v = n - a + b;
  return v < n ? v : n;
}
inline int oplus(int a, int b, int n) {
  int v = a + b;
  return v < n ? v : n;
}
inline int odot(int a, int b, int n) {
  int v = a + b - n;
  return v > 0 ? v : 0;
}
inline int join(int a, int b) { return a > b ? a : b; }
inline int meet(int a, int b) { return a < b ? a : b; }
}  // namespace chainop

/// Term tree in one variable x over the Lukasiewicz connectives. Immutable;
/// copies share structure.
class UnaryMVTerm {
 public:
  enum class Kind { Var, Zero, One, Neg, Imp, OPlus, ODot, Join, Meet };

  static UnaryMVTerm var();
  static UnaryMVTerm zero();
  static UnaryMVTerm one();
  static UnaryMVTerm neg(UnaryMVTerm a);
  static UnaryMVTerm imp(UnaryMVTerm a, UnaryMVTerm b);
  static UnaryMVTerm oplus(UnaryMVTerm a, UnaryMVTerm b);
  static UnaryMVTerm odot(UnaryMVTerm a, UnaryMVTerm b);
  static UnaryMVTerm join(UnaryMVTerm a, UnaryMVTerm b);
  static UnaryMVTerm meet(UnaryMVTerm a, UnaryMVTerm b);

  Kind kind() const;
  UnaryMVTerm left() const;
  UnaryMVTerm right() const;

  TruthValue eval(TruthValue x) const;
  std::string to_string() const;

  /// True when the term is x under a stack of self-doublings t(+)t / t(.)t,
  /// the shape tau synthesis promises.
  bool is_doubling_composition() const;

 private:
  struct Node;
  explicit UnaryMVTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

TruthValue eval_unary_term(const UnaryMVTerm& t, TruthValue a);

/// Evaluation vector of t over the whole chain of grain n, as numerators.
std::vector<int> term_profile(const UnaryMVTerm& t, int n);

/// Threshold term: evaluates to 1 on a >= i/n and to 0 below, built only
/// from compositions of x(+)x and x(.)x. Throws std::logic_error if the
/// bounded search fails (which would be a bug, not an input error).
UnaryMVTerm tau_term(int n, int i);

/// Membership indicator for the subchain of grain m inside grain n (m | n):
/// evaluates to 1 exactly on multiples of 1/m, to 0 elsewhere.
UnaryMVTerm membership_term(int n, int m);

}  // namespace lmv
