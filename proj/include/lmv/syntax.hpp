#pragma once

// The modal language: signatures, formula ASTs, the concrete text syntax,
// the variable-power translation tr_n and its target fragment.
//
// Concrete syntax, tightest first:  ~  ^  k.   then  (.)  (+)  /\  \/  ->
// with -> right-associative. Modalities are written name(f1, ..., fk).

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmv {

struct Signature {
  std::map<std::string, int> modalities;  // name -> arity, arity >= 1

  bool operator==(const Signature&) const = default;
  bool is_modality(const std::string& name) const {
    return modalities.count(name) != 0;
  }
  int arity(const std::string& name) const;
  void validate() const;  // throws std::invalid_argument on a bad signature

  /// The one-unary-box signature used throughout the examples.
  static Signature unary_box() { return Signature{{{"box", 1}}}; }
};

/// Immutable formula tree. Sugar connectives are kept in the tree and
/// eliminated on demand by desugar().
class Formula {
 public:
  enum class Kind {
    Var, Zero, One, Neg, Imp, Modal,        // core
    OPlus, ODot, Join, Meet, KTimes, KPower  // sugar
  };

  static Formula var(std::string name);
  static Formula zero();
  static Formula one();
  static Formula neg(Formula a);
  static Formula imp(Formula a, Formula b);
  static Formula modal(std::string name, std::vector<Formula> args);
  static Formula oplus(Formula a, Formula b);
  static Formula odot(Formula a, Formula b);
  static Formula join(Formula a, Formula b);
  static Formula meet(Formula a, Formula b);
  static Formula ktimes(int k, Formula a);  // k.a, k >= 0
  static Formula kpower(int k, Formula a);  // a^k, k >= 0

  Kind kind() const;
  const std::string& name() const;  // variable or modality name
  int repeat() const;               // k of ktimes/kpower
  size_t child_count() const;
  Formula child(size_t i) const;

  bool operator==(const Formula& other) const;  // structural
  bool operator!=(const Formula& other) const { return !(*this == other); }

  /// Raw node identity; shared subterms compare equal. Used for memoized
  /// bulk evaluation.
  const void* id() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind kind, std::string name, int k,
                      std::vector<Formula> args);
  std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  size_t position;
};

Formula parse(const std::string& text, const Signature& sig);
std::string print(const Formula& f);

/// Eliminate all sugar; the result contains only Var, One, Neg, Imp, Modal.
Formula desugar(const Formula& f);

/// Replace every variable occurrence p by p^m.
Formula tr_n(const Formula& f, int m);

/// Whether the desugared formula lies in the fragment whose variables occur
/// only as m-th (.)-powers.
bool is_pform(const Formula& f, int m);

/// Variable names in first-occurrence order.
std::vector<std::string> variables(const Formula& f);

/// Distinct subformulas in first-occurrence preorder, the formula itself
/// included.
std::vector<Formula> subformulas(const Formula& f);

/// Height of the tree; atoms have depth 0. Sugar counts as written.
int depth(const Formula& f);

}  // namespace lmv
