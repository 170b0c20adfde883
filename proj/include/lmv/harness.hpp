#pragma once

// Definability workbench: frame-class predicates, model sets over finite
// universes, bounded modal theories, closure-under-construction tests, and
// the worked counterexamples.
//
// A finite universe can refute definability (by exhibiting a closure
// violation) or report consistency at a bound; it can never certify
// definability outright. Reports say which.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "lmv/frames.hpp"
#include "lmv/semantics.hpp"
#include "lmv/syntax.hpp"

namespace lmv {

/// Named membership test over frames. Classes of plain frames also lift to
/// enriched frames through the reduct; enriched-only classes leave `on_l`
/// empty.
struct ClassPredicate {
  std::string name;
  std::function<bool(const LFrame&)> on_l;
  std::function<bool(const LnFrame&)> on_ln;

  bool ln_only() const { return !on_l; }
};

ClassPredicate class_all();
ClassPredicate class_empty_relation();
ClassPredicate class_reflexive();
/// Every successor of every world lies in r_1 (all modalities).
ClassPredicate class_ru_sub_r1();
/// No world lies in r_k.
ClassPredicate class_c1(int k);
/// Some world u has r_k included in its unary successor set.
ClassPredicate class_c2(int k);
ClassPredicate class_complement(ClassPredicate c);
ClassPredicate class_and(ClassPredicate a, ClassPredicate b);

/// Registry lookup for the CLI: all, empty-relation, reflexive, ru-sub-r1,
/// C1, C2 (the last two take k).
ClassPredicate class_by_name(const std::string& name, std::optional<int> k);

/// Frames of the universe on which every formula of the theory is valid.
std::vector<LFrame> mod_n(const std::vector<Formula>& theory,
                          const std::vector<LFrame>& universe, int n,
                          Budget budget = {}, int jobs = 1);
std::vector<LnFrame> mod(const std::vector<Formula>& theory,
                         const std::vector<LnFrame>& universe,
                         Budget budget = {}, int jobs = 1);

/// Formula enumeration with shared subterms, closed under subformulas and
/// ordered by depth, then constructor (variables, 0, 1, negation,
/// implication, modalities), then operand index.
struct FormulaEnumeration {
  struct Info {
    Formula::Kind kind;
    std::vector<int> args;  // operand positions in `formulas`
    int var = -1;           // variable position for Kind::Var
    std::string modality;
  };
  std::vector<Formula> formulas;
  std::vector<Info> info;
  std::vector<std::string> vars;
};

FormulaEnumeration enumerate_formulas(const Signature& sig, int max_depth,
                                      const std::vector<std::string>& vars);

/// All enumerated formulas valid on the frame, in enumeration order.
std::vector<Formula> theory_n(const LFrame& f, int n, int max_depth,
                              int num_vars, Budget budget = {});
std::vector<Formula> theory_ln(const LnFrame& f, int max_depth, int num_vars,
                               Budget budget = {});

enum class ClosureOp { GenSub, BoundedImage, DisjointUnion, CanExtReflection };

std::string closure_op_name(ClosureOp op);
ClosureOp closure_op_by_name(const std::string& name);

struct ClosureWitnessL {
  ClosureOp op;
  LFrame frame_a;                 // the member (for CanExtReflection: the non-member)
  std::optional<LFrame> frame_b;  // second member of a union
  LFrame result;                  // produced frame on the wrong side of the class
  std::vector<int> detail;        // seeds (GenSub) or the map (BoundedImage)
  std::string text;
};

struct ClosureWitnessLn {
  ClosureOp op;
  LnFrame frame_a;
  std::optional<LnFrame> frame_b;
  LnFrame result;
  std::vector<int> detail;
  std::string text;
};

struct ClosureReportL {
  bool ok = true;
  std::optional<ClosureWitnessL> witness;
};

struct ClosureReportLn {
  bool ok = true;
  std::optional<ClosureWitnessLn> witness;
};

/// Search the universe for a violation of the closure conditions: a member
/// with a generated subframe or bounded morphic image outside the class, a
/// union of members outside it, or a non-member whose canonical extension
/// is inside. First witness in a fixed deterministic order.
ClosureReportLn closure_check_ln(const ClassPredicate& c,
                                 const std::vector<LnFrame>& universe,
                                 const std::set<ClosureOp>& ops);
ClosureReportL closure_check_l(const ClassPredicate& c,
                               const std::vector<LFrame>& universe, int n,
                               const std::set<ClosureOp>& ops);

nlohmann::json closure_witness_json(const ClosureWitnessL& w);
nlohmann::json closure_witness_json(const ClosureWitnessLn& w);

struct BohReport {
  int n = 1;
  bool counterexample_exists = false;
  std::optional<LnFrame> witness;  // valid, satisfies the formula, nonempty R
  std::string text;
  nlohmann::json to_json() const;
};

/// An enriched frame satisfying box(p \/ ~p) whose reduct has a nonempty
/// relation; exists exactly when n > 1.
BohReport reproduce_counterexample_boh(int n);

struct GodequivReport {
  bool separated_boolean = false;  // grain 1 pins the class down at the bound
  bool separated_n = false;        // grain n does
  bool agree = false;
  std::string text;
  nlohmann::json details;
};

/// Compare, at a fixed formula bound over the finite universe, whether the
/// class is cut out by its valid formulas under the Boolean grain versus
/// grain n. Disagreement yields a candidate for closer inspection.
GodequivReport godequiv_check(const ClassPredicate& c,
                              const std::vector<LFrame>& universe, int n,
                              int max_depth, int num_vars, Budget budget = {});

}  // namespace lmv
