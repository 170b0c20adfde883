#pragma once

// Finite modal MV-algebras presented as sub-carriers of products of
// subchains, with modal operator tables. Covers complex and tight complex
// algebras of frames, the modal distribution axioms, Boolean skeletons,
// homomorphism enumeration through Boolean ultrafilters, canonical frames
// and models, canonical extensions, dual morphisms, products and
// isomorphism search.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmv/frames.hpp"
#include "lmv/semantics.hpp"
#include "lmv/syntax.hpp"

namespace lmv {

struct Coordinate {
  std::string label;
  int grain;  // divides the ambient grain; coordinate values lie in its subchain

  bool operator==(const Coordinate&) const = default;
};

struct ModalOp {
  int arity = 1;
  std::vector<int> table;  // carrier-index tuple (mixed radix) -> carrier index
};

/// Carrier elements are tuples of numerators over the ambient grain n, one
/// per coordinate, each a multiple of n/grain_i. The carrier is sorted and
/// closed under the MV operations; modal operators come as tables.
class FiniteMMVAlgebra {
 public:
  FiniteMMVAlgebra(int n, std::vector<Coordinate> coords,
                   std::vector<std::vector<int>> carrier,
                   std::map<std::string, ModalOp> ops);

  int n() const { return n_; }
  const std::vector<Coordinate>& coords() const { return coords_; }
  const std::vector<std::vector<int>>& carrier() const { return carrier_; }
  const std::map<std::string, ModalOp>& ops() const { return ops_; }
  int size() const { return static_cast<int>(carrier_.size()); }

  int index_of(const std::vector<int>& tuple) const;  // throws if absent
  const std::vector<int>& element(int idx) const { return carrier_[idx]; }

  int one() const { return one_; }
  int zero() const { return zero_; }
  int op_neg(int a) const;
  int op_imp(int a, int b) const;
  int op_oplus(int a, int b) const;
  int op_odot(int a, int b) const;
  int op_join(int a, int b) const;
  int op_meet(int a, int b) const;
  int apply(const std::string& modality, std::span<const int> args) const;

  /// Elements with a(+)a = a, i.e. all components in {0, n}; sorted.
  const std::vector<int>& idempotents() const { return idempotents_; }
  bool is_idempotent(int a) const;

  /// Value of a desugared or sugared formula under an assignment of carrier
  /// elements to its variables.
  int eval_formula(const Formula& phi, const std::map<std::string, int>& assign) const;

  Signature signature() const;

 private:
  int n_;
  std::vector<Coordinate> coords_;
  std::vector<std::vector<int>> carrier_;
  std::map<std::string, ModalOp> ops_;
  std::map<std::vector<int>, int> index_;
  std::vector<int> idempotents_;
  int one_ = -1, zero_ = -1;

  std::vector<int> idempotent_scan() const;
  std::vector<int> pointwise(const std::vector<int>& a, const std::vector<int>& b,
                             int which) const;
};

/// Full power algebra of a frame at grain n.
FiniteMMVAlgebra complex_algebra(const LFrame& f, int n);

/// Product of the local subchains of a valid enriched frame.
FiniteMMVAlgebra tight_complex_algebra(const LnFrame& f);

struct AxiomReport {
  bool ok = true;
  std::string detail;
};

/// Exhaustively checks the three modal distribution equation schemes.
AxiomReport check_mmv_axioms(const FiniteMMVAlgebra& a);

/// The idempotents as an algebra of their own (coordinate grains collapse
/// to 1, the ambient grain stays); modal operators are restricted.
FiniteMMVAlgebra boolean_skeleton_algebra(const FiniteMMVAlgebra& a);

/// MV-homomorphism into the ambient chain, tabulated on the carrier.
struct Homomorphism {
  std::vector<int> values;  // carrier index -> numerator over n

  /// Least divisor m of n with every value in the m-subchain.
  int image_grain(int n) const;
};

/// All MV-homomorphisms into the chain whose image lies in the m-subchain.
/// Enumerated through ultrafilters of the Boolean skeleton; the recovered
/// maps are asserted to be homomorphisms on every pair.
std::vector<Homomorphism> enumerate_homs(const FiniteMMVAlgebra& a, int m);

struct CanonicalOptions {
  bool check_axioms = true;
  /// Quantify the canonical relation over the full carrier instead of the
  /// idempotent tuples. Slow; used to cross-check the fast route.
  bool full_carrier_relation = false;
};

/// Canonical enriched frame: worlds are the homomorphisms into the chain,
/// r_m collects those with image in the m-subchain, and the relations hold
/// when forcing the operator to 1 forces some component to 1.
LnFrame canonical_frame(const FiniteMMVAlgebra& a, CanonicalOptions opts = {});
LFrame canonical_lframe(const FiniteMMVAlgebra& a, CanonicalOptions opts = {});

/// Canonical model over the canonical frame of a: world u values p at
/// u(assign_p).
Model canonical_model(const FiniteMMVAlgebra& a,
                      const std::map<std::string, int>& assign,
                      CanonicalOptions opts = {});

struct TruthLemmaReport {
  bool ok = true;
  std::string detail;
};

/// Compares the semantic value of each formula at each canonical world with
/// the world's value on the algebraic image of the formula.
TruthLemmaReport truth_lemma_check(const FiniteMMVAlgebra& a,
                                   const std::map<std::string, int>& assign,
                                   std::span<const Formula> formulas,
                                   CanonicalOptions opts = {});

struct CanonicalExtensionLn {
  LnFrame frame;
  std::vector<int> iota;  // original world -> canonical world (its projection)
};

struct CanonicalExtensionL {
  LFrame frame;
  std::vector<int> iota;
};

/// Canonical frame of the tight complex algebra.
CanonicalExtensionLn canonical_extension_ln(const LnFrame& f);

/// Canonical frame of the Boolean skeleton of the complex algebra.
CanonicalExtensionL canonical_extension_l(const LFrame& f, int n);

struct ModelExtension {
  Model model;            // over the canonical frame of the complex algebra
  std::vector<int> iota;  // original world -> canonical world
};

/// Canonical extension of a model: worlds are the homomorphisms on the
/// complex algebra, and p takes the value the world assigns to the table
/// column of p.
ModelExtension model_extension(const Model& m);

/// Map between carriers; validity as an MMV-homomorphism is checkable.
struct AlgebraHom {
  std::vector<int> map;  // source carrier index -> target carrier index
};

bool is_mmv_hom(const FiniteMMVAlgebra& a, const FiniteMMVAlgebra& b,
                const AlgebraHom& h);

/// All MMV-homomorphisms between two algebras (through per-coordinate chain
/// homomorphisms, then filtered by modal preservation). Desk scale only.
std::vector<AlgebraHom> enumerate_mmv_homs(const FiniteMMVAlgebra& a,
                                           const FiniteMMVAlgebra& b);

/// Dual of a homomorphism h : a -> b, as the map between canonical frames
/// carrying a world u of b* to u o h in a*.
LnFrameMap dual_morphism(const FiniteMMVAlgebra& a, const FiniteMMVAlgebra& b,
                         const AlgebraHom& h);

FiniteMMVAlgebra product(const std::vector<FiniteMMVAlgebra>& factors);

/// Isomorphism search through matchings of the homomorphism sets; returns a
/// carrier bijection if the algebras are isomorphic.
std::optional<std::vector<int>> iso_check(const FiniteMMVAlgebra& a,
                                          const FiniteMMVAlgebra& b);

}  // namespace lmv
