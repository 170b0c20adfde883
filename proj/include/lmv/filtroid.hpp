#pragma once

// Finite bounded distributive lattices, filtroids on their k-th powers,
// primality via decomposition into prime filters, and brute-force
// verification of the prime-intersection theorem. Also the three-way
// agreement check tying canonical relations to prime filtroids.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmv/algebra.hpp"

namespace lmv {

/// Order matrix plus join/meet tables; element ids are 0..size-1.
class DistributiveLattice {
 public:
  static DistributiveLattice chain(int elements);
  static DistributiveLattice boolean(int atoms);
  /// Order a set of abstract elements by a reflexive comparison; joins and
  /// meets must exist and distribute (validated).
  static DistributiveLattice from_leq(std::vector<std::vector<bool>> leq);
  /// The idempotents of an algebra under the componentwise order.
  static DistributiveLattice from_boolean_skeleton(const FiniteMMVAlgebra& a);

  int size() const { return static_cast<int>(leq_.size()); }
  bool leq(int x, int y) const { return leq_[x][y]; }
  int join(int x, int y) const { return join_[x][y]; }
  int meet(int x, int y) const { return meet_[x][y]; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }

  /// Empty string when the axioms (poset, lattice, bounds, distributivity)
  /// all hold, else a description of the first failure.
  std::string validate() const;

  /// Minima of the prime filters: the join-prime elements above bottom.
  /// Prime filter i is the up-set of minimum i.
  std::vector<int> prime_filter_minima() const;

  /// Prime filters as membership bitmaps, in minimum order.
  std::vector<std::vector<char>> prime_filters() const;

  /// Same set recovered by filtering all subsets; usable while 2^size is
  /// small. Cross-checks the join-prime route.
  std::vector<std::vector<char>> prime_filters_bruteforce() const;

 private:
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<int>> join_, meet_;
  int bottom_ = 0, top_ = 0;
};

/// Subset of L^k stored as a bitmap over tuple codes (mixed radix over
/// element ids, first position most significant).
struct Filtroid {
  const DistributiveLattice* lattice = nullptr;
  int k = 1;
  std::vector<char> members;  // size = lattice->size()^k

  uint64_t space() const;
  uint64_t encode(const std::vector<int>& tuple) const;
  std::vector<int> decode(uint64_t code) const;
  bool proper() const;
};

Filtroid make_filtroid(const DistributiveLattice& l, int k,
                       const std::vector<std::vector<int>>& tuples);

/// Increasing, contains every tuple with a 1-component, and closed under
/// meets of tuples that differ in at most one position.
bool is_filtroid(const Filtroid& f);

/// Sum of k prime filters equal to f, if one exists; returned as the k
/// prime-filter minima. Requires f proper.
std::optional<std::vector<int>> is_prime(const Filtroid& f);

/// Smallest filtroid containing the seed tuples: close under the
/// one-component-1 base, up-sets and near-tuple meets.
Filtroid filtroid_closure(const DistributiveLattice& l, int k,
                          const std::vector<std::vector<int>>& seeds);

struct PrimeIntersectionReport {
  bool ok = true;
  int checked = 0;     // proper filtroids examined
  int improper = 0;    // closures that collapsed to the full power
  std::string detail;  // first counterexample, if any
};

/// Every proper filtroid must equal the intersection of the prime filtroids
/// above it. Mode "full": all subsets of L^k (needs a tiny space). Mode
/// "seeded": closures of `seeds` random seed sets.
PrimeIntersectionReport check_prime_intersection_theorem(
    const DistributiveLattice& l, int k, bool full_enumeration, int seeds = 100,
    uint64_t seed = 0);

struct LemmaRReport {
  bool ok = true;
  std::string detail;
};

/// For every canonical world u and world tuple v of the algebra's canonical
/// frame, three conditions must agree: membership of v in the canonical
/// relation, the value inequality over all carrier tuples, and primality-
/// with-containment of the induced filtroid on the Boolean skeleton.
LemmaRReport lemma_r_check(const FiniteMMVAlgebra& a, const std::string& modality);

}  // namespace lmv
