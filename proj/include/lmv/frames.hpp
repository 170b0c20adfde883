#pragma once

// Relational frames for the modal language, their divisor-enriched variant,
// and the construction operators used to test definability: reducts and
// trivial enrichments, disjoint unions, generated subframes, bounded
// morphisms, and exhaustive enumeration of small frames.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lmv/syntax.hpp"

namespace lmv {

/// Finite relational structure: labelled worlds and, per modality of arity
/// k, a set of (k+1)-tuples of world indices. Tuple (u, v1..vk) reads "the
/// tuple v is a successor of u". Relation tuples are kept sorted.
struct LFrame {
  Signature sig;
  std::vector<std::string> worlds;
  std::map<std::string, std::vector<std::vector<int>>> relations;

  int world_index(const std::string& label) const;
  void validate() const;  // throws std::invalid_argument on malformed data

  /// Successor tuples of u for one modality: the tails (v1..vk) of all
  /// relation tuples whose head is u.
  std::vector<std::vector<int>> successors(const std::string& modality, int u) const;

  bool operator==(const LFrame&) const = default;
};

/// LFrame enriched with one world set per divisor m of n. Raw data may
/// violate the enrichment laws; validate_ln reports the first violation.
struct LnFrame {
  LFrame base;
  int n = 1;
  std::map<int, std::vector<int>> r;  // divisor -> sorted world indices

  bool in_r(int divisor, int world) const;
  bool operator==(const LnFrame&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::string clause;   // name of the first failing law
  std::string detail;   // witness description
};

ValidationReport validate_ln(const LnFrame& f);

/// Enrichment with r_n = W and every other r_m empty.
LnFrame trivial_enrichment(const LFrame& f, int n);

/// The reduct: drop the divisor structure.
LFrame underlying(const LnFrame& f);

/// gcd of the divisors m with u in r_m; requires a frame valid enough for
/// the gcd to exist (r_n = W).
int s_value(const LnFrame& f, int u);

/// Build the enrichment of f whose divisor sets are cut out by a given
/// local-grain assignment: u lies in r_m iff s[u] divides m. Inverse of
/// s_value on valid frames.
LnFrame enrich_by_s(const LFrame& f, int n, const std::vector<int>& s);

LFrame disjoint_union(const std::vector<LFrame>& frames);
LnFrame disjoint_union_ln(const std::vector<LnFrame>& frames);

/// Smallest substructure containing the seeds and closed under successor
/// tuples; world labels are preserved.
LFrame generated_subframe(const LFrame& f, const std::set<int>& seeds);
LnFrame generated_subframe_ln(const LnFrame& f, const std::set<int>& seeds);

/// Index map of the generated subframe's inclusion back into f.
std::vector<int> inclusion_map(const LFrame& sub, const LFrame& whole);

struct FrameMap {
  LFrame source;
  LFrame target;
  std::vector<int> map;  // source world index -> target world index
};

struct LnFrameMap {
  LnFrame source;
  LnFrame target;
  std::vector<int> map;
};

bool is_bounded_morphism(const LFrame& f, const LFrame& g, const std::vector<int>& map);
bool is_bounded_morphism(const FrameMap& m);
bool is_ln_bounded_morphism(const LnFrame& f, const LnFrame& g, const std::vector<int>& map);
bool is_ln_bounded_morphism(const LnFrameMap& m);

/// Brute-force isomorphism search; returns a world bijection if one exists.
std::optional<std::vector<int>> frame_isomorphism(const LFrame& f, const LFrame& g);
std::optional<std::vector<int>> ln_frame_isomorphism(const LnFrame& f, const LnFrame& g);

/// All labelled frames over sig with 1..max_worlds worlds, in a fixed order:
/// by world count, then per-modality relation bitmask (tuples lexicographic,
/// later modalities vary fastest). Restartable.
class LFrameEnumerator {
 public:
  LFrameEnumerator(Signature sig, int max_worlds);
  std::optional<LFrame> next();
  void reset();

 private:
  Signature sig_;
  int max_worlds_;
  int world_count_;
  std::vector<uint64_t> masks_;    // one bitmask per modality
  std::vector<uint64_t> limits_;   // 2^(count^(k+1)) per modality
  bool done_ = false;
  void start_count(int c);
  bool bump();
};

/// All valid enriched frames with 1..max_worlds worlds: every base frame in
/// LFrameEnumerator order, each paired with every local-grain assignment
/// (ascending divisor odometer, last world fastest) that respects the
/// successor law. Emits each valid frame exactly once.
class LnFrameEnumerator {
 public:
  LnFrameEnumerator(Signature sig, int max_worlds, int n);
  std::optional<LnFrame> next();
  void reset();

 private:
  LFrameEnumerator base_;
  int n_;
  std::vector<int> divisors_;
  std::optional<LFrame> current_;
  std::vector<int> s_digits_;  // indices into divisors_, one per world
  bool fresh_ = true;
  bool bump_s();
};

std::vector<LFrame> all_lframes(const Signature& sig, int max_worlds);
std::vector<LnFrame> all_ln_frames(const Signature& sig, int max_worlds, int n);

/// Drop frames isomorphic to an earlier one. Quadratic; intended for small
/// universes only.
std::vector<LFrame> dedup_isomorphic(const std::vector<LFrame>& frames);

std::vector<int> divisors_of(int n);

}  // namespace lmv
