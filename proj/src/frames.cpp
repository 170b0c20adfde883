#include "lmv/frames.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lmv {

std::vector<int> divisors_of(int n) {
  if (n < 1) throw std::invalid_argument("grain must be positive");
  std::vector<int> out;
  for (int m = 1; m <= n; ++m)
    if (n % m == 0) out.push_back(m);
  return out;
}

int LFrame::world_index(const std::string& label) const {
  auto it = std::find(worlds.begin(), worlds.end(), label);
  if (it == worlds.end()) throw std::invalid_argument("unknown world: " + label);
  return static_cast<int>(it - worlds.begin());
}

void LFrame::validate() const {
  sig.validate();
  if (worlds.empty()) throw std::invalid_argument("frame needs at least one world");
  std::set<std::string> seen(worlds.begin(), worlds.end());
  if (seen.size() != worlds.size())
    throw std::invalid_argument("duplicate world labels");
  const int w = static_cast<int>(worlds.size());
  for (const auto& [name, tuples] : relations) {
    const int k = sig.arity(name);  // throws on unknown modality
    for (const auto& t : tuples) {
      if (static_cast<int>(t.size()) != k + 1)
        throw std::invalid_argument("relation tuple arity mismatch for " + name);
      for (int v : t)
        if (v < 0 || v >= w)
          throw std::invalid_argument("relation tuple mentions unknown world");
    }
  }
  for (const auto& [name, k] : sig.modalities)
    if (!relations.count(name))
      throw std::invalid_argument("missing relation for modality " + name);
}

std::vector<std::vector<int>> LFrame::successors(const std::string& modality,
                                                 int u) const {
  std::vector<std::vector<int>> out;
  auto it = relations.find(modality);
  if (it == relations.end())
    throw std::invalid_argument("unknown modality: " + modality);
  for (const auto& t : it->second)
    if (t[0] == u) out.emplace_back(t.begin() + 1, t.end());
  return out;
}

bool LnFrame::in_r(int divisor, int world) const {
  auto it = r.find(divisor);
  if (it == r.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), world);
}

ValidationReport validate_ln(const LnFrame& f) {
  f.base.validate();
  if (f.n < 1) return {false, "grain", "n must be positive"};

  const std::vector<int> divs = divisors_of(f.n);
  {
    std::vector<int> keys;
    for (const auto& [m, _] : f.r) keys.push_back(m);
    if (keys != divs)
      return {false, "divisor-keys",
              "r must be indexed by exactly the divisors of n"};
  }
  const int w = static_cast<int>(f.base.worlds.size());
  for (const auto& [m, set] : f.r) {
    for (int u : set)
      if (u < 0 || u >= w) return {false, "divisor-keys", "r mentions unknown world"};
    if (!std::is_sorted(set.begin(), set.end()))
      return {false, "divisor-keys", "r sets must be sorted"};
  }

  if (f.r.at(f.n) != [&] {
        std::vector<int> all(w);
        std::iota(all.begin(), all.end(), 0);
        return all;
      }())
    return {false, "r_n=W", "r_" + std::to_string(f.n) + " must contain every world"};

  for (int m : divs)
    for (int q : divs) {
      const int g = std::gcd(m, q);
      for (int u = 0; u < w; ++u) {
        const bool lhs = f.in_r(m, u) && f.in_r(q, u);
        const bool rhs = f.in_r(g, u);
        if (lhs != rhs)
          return {false, "r_m*r_q=r_gcd",
                  "world " + f.base.worlds[u] + " violates r_" + std::to_string(m) +
                      " * r_" + std::to_string(q) + " = r_" + std::to_string(g)};
      }
    }

  for (const auto& [name, arity] : f.base.sig.modalities) {
    (void)arity;
    for (int m : divs)
      for (int u : f.r.at(m))
        for (const auto& tail : f.base.successors(name, u))
          for (int v : tail)
            if (!f.in_r(m, v))
              return {false, "Ru-in-r_m",
                      "world " + f.base.worlds[u] + " in r_" + std::to_string(m) +
                          " has " + name + "-successor " + f.base.worlds[v] +
                          " outside r_" + std::to_string(m)};
  }
  return {};
}

LnFrame trivial_enrichment(const LFrame& f, int n) {
  f.validate();
  LnFrame out{f, n, {}};
  for (int m : divisors_of(n)) out.r[m] = {};
  std::vector<int> all(f.worlds.size());
  std::iota(all.begin(), all.end(), 0);
  out.r[n] = all;
  return out;
}

LFrame underlying(const LnFrame& f) { return f.base; }

int s_value(const LnFrame& f, int u) {
  if (u < 0 || u >= static_cast<int>(f.base.worlds.size()))
    throw std::invalid_argument("unknown world index");
  int g = 0;
  for (const auto& [m, _] : f.r)
    if (f.in_r(m, u)) g = std::gcd(g, m);
  if (g == 0) throw std::invalid_argument("world lies in no r_m; frame invalid");
  return g;
}

LnFrame enrich_by_s(const LFrame& f, int n, const std::vector<int>& s) {
  if (s.size() != f.worlds.size())
    throw std::invalid_argument("one local grain per world required");
  LnFrame out{f, n, {}};
  for (int m : divisors_of(n)) {
    std::vector<int> set;
    for (int u = 0; u < static_cast<int>(s.size()); ++u) {
      if (n % s[u] != 0) throw std::invalid_argument("local grain must divide n");
      if (m % s[u] == 0) set.push_back(u);
    }
    out.r[m] = std::move(set);
  }
  return out;
}

namespace {
std::string tagged(size_t i, const std::string& label) {
  return std::to_string(i) + ":" + label;
}
}  // namespace

LFrame disjoint_union(const std::vector<LFrame>& frames) {
  if (frames.empty()) throw std::invalid_argument("union of no frames");
  const Signature& sig = frames.front().sig;
  for (const auto& f : frames)
    if (f.sig.modalities != sig.modalities)
      throw std::invalid_argument("signature mismatch in disjoint union");

  LFrame out;
  out.sig = sig;
  std::vector<int> offset(frames.size());
  for (size_t i = 0; i < frames.size(); ++i) {
    offset[i] = static_cast<int>(out.worlds.size());
    for (const auto& w : frames[i].worlds) out.worlds.push_back(tagged(i, w));
  }
  for (const auto& [name, _] : sig.modalities) {
    auto& tuples = out.relations[name];
    for (size_t i = 0; i < frames.size(); ++i)
      for (const auto& t : frames[i].relations.at(name)) {
        std::vector<int> shifted;
        shifted.reserve(t.size());
        for (int v : t) shifted.push_back(v + offset[i]);
        tuples.push_back(std::move(shifted));
      }
    std::sort(tuples.begin(), tuples.end());
  }
  return out;
}

LnFrame disjoint_union_ln(const std::vector<LnFrame>& frames) {
  if (frames.empty()) throw std::invalid_argument("union of no frames");
  const int n = frames.front().n;
  std::vector<LFrame> bases;
  for (const auto& f : frames) {
    if (f.n != n) throw std::invalid_argument("grain mismatch in disjoint union");
    bases.push_back(f.base);
  }
  LnFrame out{disjoint_union(bases), n, {}};
  std::vector<int> offset(frames.size());
  int acc = 0;
  for (size_t i = 0; i < frames.size(); ++i) {
    offset[i] = acc;
    acc += static_cast<int>(frames[i].base.worlds.size());
  }
  for (int m : divisors_of(n)) {
    std::vector<int> set;
    for (size_t i = 0; i < frames.size(); ++i)
      for (int u : frames[i].r.at(m)) set.push_back(u + offset[i]);
    std::sort(set.begin(), set.end());
    out.r[m] = std::move(set);
  }
  return out;
}

namespace {

std::vector<int> closed_world_set(const LFrame& f, const std::set<int>& seeds) {
  std::vector<char> in(f.worlds.size(), 0);
  std::vector<int> stack;
  for (int u : seeds) {
    if (u < 0 || u >= static_cast<int>(f.worlds.size()))
      throw std::invalid_argument("seed is not a world");
    if (!in[u]) {
      in[u] = 1;
      stack.push_back(u);
    }
  }
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (const auto& [name, tuples] : f.relations)
      for (const auto& t : tuples)
        if (t[0] == u)
          for (size_t i = 1; i < t.size(); ++i)
            if (!in[t[i]]) {
              in[t[i]] = 1;
              stack.push_back(t[i]);
            }
  }
  std::vector<int> keep;
  for (int u = 0; u < static_cast<int>(f.worlds.size()); ++u)
    if (in[u]) keep.push_back(u);
  return keep;
}

LFrame restrict_frame(const LFrame& f, const std::vector<int>& keep) {
  LFrame out;
  out.sig = f.sig;
  std::vector<int> newindex(f.worlds.size(), -1);
  for (size_t i = 0; i < keep.size(); ++i) {
    newindex[keep[i]] = static_cast<int>(i);
    out.worlds.push_back(f.worlds[keep[i]]);
  }
  for (const auto& [name, tuples] : f.relations) {
    auto& dst = out.relations[name];
    for (const auto& t : tuples) {
      bool inside = true;
      for (int v : t) inside = inside && newindex[v] >= 0;
      if (!inside) continue;
      std::vector<int> mapped;
      mapped.reserve(t.size());
      for (int v : t) mapped.push_back(newindex[v]);
      dst.push_back(std::move(mapped));
    }
    std::sort(dst.begin(), dst.end());
  }
  return out;
}

}  // namespace

LFrame generated_subframe(const LFrame& f, const std::set<int>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("seed set must be nonempty");
  return restrict_frame(f, closed_world_set(f, seeds));
}

LnFrame generated_subframe_ln(const LnFrame& f, const std::set<int>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("seed set must be nonempty");
  const std::vector<int> keep = closed_world_set(f.base, seeds);
  LnFrame out{restrict_frame(f.base, keep), f.n, {}};
  std::vector<int> newindex(f.base.worlds.size(), -1);
  for (size_t i = 0; i < keep.size(); ++i) newindex[keep[i]] = static_cast<int>(i);
  for (const auto& [m, set] : f.r) {
    std::vector<int> mapped;
    for (int u : set)
      if (newindex[u] >= 0) mapped.push_back(newindex[u]);
    std::sort(mapped.begin(), mapped.end());
    out.r[m] = std::move(mapped);
  }
  return out;
}

std::vector<int> inclusion_map(const LFrame& sub, const LFrame& whole) {
  std::vector<int> map;
  map.reserve(sub.worlds.size());
  for (const auto& w : sub.worlds) map.push_back(whole.world_index(w));
  return map;
}

bool is_bounded_morphism(const LFrame& f, const LFrame& g,
                         const std::vector<int>& map) {
  if (f.sig.modalities != g.sig.modalities)
    throw std::invalid_argument("signature mismatch");
  if (map.size() != f.worlds.size())
    throw std::invalid_argument("map must be total on source worlds");
  for (int v : map)
    if (v < 0 || v >= static_cast<int>(g.worlds.size()))
      throw std::invalid_argument("map leaves target worlds");

  for (const auto& [name, _] : f.sig.modalities) {
    for (int u = 0; u < static_cast<int>(f.worlds.size()); ++u) {
      std::set<std::vector<int>> image;
      for (const auto& tail : f.successors(name, u)) {
        std::vector<int> mapped;
        mapped.reserve(tail.size());
        for (int v : tail) mapped.push_back(map[v]);
        image.insert(std::move(mapped));
      }
      std::set<std::vector<int>> target;
      for (const auto& tail : g.successors(name, map[u])) target.insert(tail);
      if (image != target) return false;
    }
  }
  return true;
}

bool is_bounded_morphism(const FrameMap& m) {
  return is_bounded_morphism(m.source, m.target, m.map);
}

bool is_ln_bounded_morphism(const LnFrame& f, const LnFrame& g,
                            const std::vector<int>& map) {
  if (f.n != g.n) throw std::invalid_argument("grain mismatch");
  if (!is_bounded_morphism(f.base, g.base, map)) return false;
  for (const auto& [m, set] : f.r)
    for (int u : set)
      if (!g.in_r(m, map[u])) return false;
  return true;
}

bool is_ln_bounded_morphism(const LnFrameMap& m) {
  return is_ln_bounded_morphism(m.source, m.target, m.map);
}

namespace {

// All bijections [0..n) -> [0..n), lexicographic.
bool next_permutation_vec(std::vector<int>& p) {
  return std::next_permutation(p.begin(), p.end());
}

bool relations_match(const LFrame& f, const LFrame& g, const std::vector<int>& p) {
  for (const auto& [name, tuples] : f.relations) {
    std::set<std::vector<int>> mapped;
    for (const auto& t : tuples) {
      std::vector<int> m;
      m.reserve(t.size());
      for (int v : t) m.push_back(p[v]);
      mapped.insert(std::move(m));
    }
    std::set<std::vector<int>> expect(g.relations.at(name).begin(),
                                      g.relations.at(name).end());
    if (mapped != expect) return false;
  }
  return true;
}

}  // namespace

std::optional<std::vector<int>> frame_isomorphism(const LFrame& f, const LFrame& g) {
  if (f.sig.modalities != g.sig.modalities) return std::nullopt;
  if (f.worlds.size() != g.worlds.size()) return std::nullopt;
  for (const auto& [name, tuples] : f.relations)
    if (tuples.size() != g.relations.at(name).size()) return std::nullopt;

  std::vector<int> p(f.worlds.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (relations_match(f, g, p)) return p;
  } while (next_permutation_vec(p));
  return std::nullopt;
}

std::optional<std::vector<int>> ln_frame_isomorphism(const LnFrame& f,
                                                     const LnFrame& g) {
  if (f.n != g.n) return std::nullopt;
  if (f.base.sig.modalities != g.base.sig.modalities) return std::nullopt;
  if (f.base.worlds.size() != g.base.worlds.size()) return std::nullopt;

  std::vector<int> p(f.base.worlds.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (!relations_match(f.base, g.base, p)) continue;
    bool rs = true;
    for (const auto& [m, set] : f.r) {
      for (int u = 0; u < static_cast<int>(p.size()) && rs; ++u)
        if (f.in_r(m, u) != g.in_r(m, p[u])) rs = false;
      if (!rs) break;
    }
    if (rs) return p;
  } while (next_permutation_vec(p));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {
uint64_t pow_u64(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) r *= b;
  return r;
}
}  // namespace

LFrameEnumerator::LFrameEnumerator(Signature sig, int max_worlds)
    : sig_(std::move(sig)), max_worlds_(max_worlds) {
  sig_.validate();
  if (max_worlds_ < 1) throw std::invalid_argument("max_worlds must be >= 1");
  reset();
}

void LFrameEnumerator::reset() {
  done_ = false;
  start_count(1);
}

void LFrameEnumerator::start_count(int c) {
  world_count_ = c;
  masks_.assign(sig_.modalities.size(), 0);
  limits_.clear();
  for (const auto& [name, k] : sig_.modalities) {
    const uint64_t tuples = pow_u64(static_cast<uint64_t>(c), k + 1);
    if (tuples > 62)
      throw std::invalid_argument("frame enumeration space too large");
    limits_.push_back(uint64_t{1} << tuples);
  }
}

bool LFrameEnumerator::bump() {
  // odometer over the per-modality masks; the last modality varies fastest
  for (int i = static_cast<int>(masks_.size()) - 1; i >= 0; --i) {
    if (++masks_[i] < limits_[i]) return true;
    masks_[i] = 0;
  }
  if (world_count_ < max_worlds_) {
    start_count(world_count_ + 1);
    return true;
  }
  return false;
}

std::optional<LFrame> LFrameEnumerator::next() {
  if (done_) return std::nullopt;

  LFrame f;
  f.sig = sig_;
  for (int i = 0; i < world_count_; ++i) f.worlds.push_back("w" + std::to_string(i));
  size_t mi = 0;
  for (const auto& [name, k] : sig_.modalities) {
    auto& tuples = f.relations[name];
    const uint64_t mask = masks_[mi];
    const uint64_t total = pow_u64(static_cast<uint64_t>(world_count_), k + 1);
    for (uint64_t t = 0; t < total; ++t) {
      if (!(mask & (uint64_t{1} << t))) continue;
      // decode tuple index, first component most significant
      std::vector<int> tuple(k + 1);
      uint64_t rem = t;
      for (int j = k; j >= 0; --j) {
        tuple[j] = static_cast<int>(rem % world_count_);
        rem /= world_count_;
      }
      tuples.push_back(std::move(tuple));
    }
    std::sort(tuples.begin(), tuples.end());
    ++mi;
  }
  if (!bump()) done_ = true;
  return f;
}

LnFrameEnumerator::LnFrameEnumerator(Signature sig, int max_worlds, int n)
    : base_(std::move(sig), max_worlds), n_(n), divisors_(divisors_of(n)) {}

void LnFrameEnumerator::reset() {
  base_.reset();
  current_.reset();
  fresh_ = true;
}

bool LnFrameEnumerator::bump_s() {
  for (int i = static_cast<int>(s_digits_.size()) - 1; i >= 0; --i) {
    if (++s_digits_[i] < static_cast<int>(divisors_.size())) return true;
    s_digits_[i] = 0;
  }
  return false;
}

std::optional<LnFrame> LnFrameEnumerator::next() {
  while (true) {
    if (!current_) {
      current_ = base_.next();
      if (!current_) return std::nullopt;
      s_digits_.assign(current_->worlds.size(), 0);
      fresh_ = true;
    }
    if (!fresh_ && !bump_s()) {
      current_.reset();
      continue;
    }
    fresh_ = false;

    std::vector<int> s(s_digits_.size());
    for (size_t i = 0; i < s.size(); ++i) s[i] = divisors_[s_digits_[i]];

    // successor law: every successor's local grain divides the source's
    bool ok = true;
    for (const auto& [name, tuples] : current_->relations) {
      for (const auto& t : tuples) {
        for (size_t j = 1; j < t.size() && ok; ++j)
          if (s[t[0]] % s[t[j]] != 0) ok = false;
        if (!ok) break;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    return enrich_by_s(*current_, n_, s);
  }
}

std::vector<LFrame> all_lframes(const Signature& sig, int max_worlds) {
  std::vector<LFrame> out;
  LFrameEnumerator e(sig, max_worlds);
  while (auto f = e.next()) out.push_back(std::move(*f));
  return out;
}

std::vector<LnFrame> all_ln_frames(const Signature& sig, int max_worlds, int n) {
  std::vector<LnFrame> out;
  LnFrameEnumerator e(sig, max_worlds, n);
  while (auto f = e.next()) out.push_back(std::move(*f));
  return out;
}

std::vector<LFrame> dedup_isomorphic(const std::vector<LFrame>& frames) {
  std::vector<LFrame> out;
  for (const auto& f : frames) {
    bool dup = false;
    for (const auto& g : out)
      if (frame_isomorphism(f, g)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(f);
  }
  return out;
}

}  // namespace lmv
