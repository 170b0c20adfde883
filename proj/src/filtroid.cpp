#include "lmv/filtroid.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace lmv {

namespace {
uint64_t pow_u64(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) r *= b;
  return r;
}
}  // namespace

// ---------------------------------------------------------------------------
// Lattices

DistributiveLattice DistributiveLattice::from_leq(
    std::vector<std::vector<bool>> leq) {
  DistributiveLattice l;
  l.leq_ = std::move(leq);
  const int s = l.size();
  for (const auto& row : l.leq_)
    if (static_cast<int>(row.size()) != s)
      throw std::invalid_argument("order matrix must be square");

  auto upper_bound_of = [&](int x, int y) {
    int best = -1;
    for (int z = 0; z < s; ++z) {
      if (!l.leq_[x][z] || !l.leq_[y][z]) continue;
      if (best < 0 || l.leq_[z][best]) best = z;
    }
    return best;
  };
  auto lower_bound_of = [&](int x, int y) {
    int best = -1;
    for (int z = 0; z < s; ++z) {
      if (!l.leq_[z][x] || !l.leq_[z][y]) continue;
      if (best < 0 || l.leq_[best][z]) best = z;
    }
    return best;
  };

  l.join_.assign(s, std::vector<int>(s, -1));
  l.meet_.assign(s, std::vector<int>(s, -1));
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y) {
      l.join_[x][y] = upper_bound_of(x, y);
      l.meet_[x][y] = lower_bound_of(x, y);
      if (l.join_[x][y] < 0 || l.meet_[x][y] < 0)
        throw std::invalid_argument("not a lattice: missing bound");
    }
  l.bottom_ = 0;
  l.top_ = 0;
  for (int x = 0; x < s; ++x) {
    if (l.leq_[x][l.bottom_]) l.bottom_ = x;
    if (l.leq_[l.top_][x]) l.top_ = x;
  }
  std::string err = l.validate();
  if (!err.empty()) throw std::invalid_argument("bad lattice: " + err);
  return l;
}

DistributiveLattice DistributiveLattice::chain(int elements) {
  if (elements < 1) throw std::invalid_argument("chain needs elements");
  std::vector<std::vector<bool>> leq(elements, std::vector<bool>(elements));
  for (int x = 0; x < elements; ++x)
    for (int y = 0; y < elements; ++y) leq[x][y] = x <= y;
  return from_leq(std::move(leq));
}

DistributiveLattice DistributiveLattice::boolean(int atoms) {
  if (atoms < 0 || atoms > 16) throw std::invalid_argument("bad atom count");
  const int s = 1 << atoms;
  std::vector<std::vector<bool>> leq(s, std::vector<bool>(s));
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y) leq[x][y] = (x & y) == x;
  return from_leq(std::move(leq));
}

DistributiveLattice DistributiveLattice::from_boolean_skeleton(
    const FiniteMMVAlgebra& a) {
  const auto& idem = a.idempotents();
  const int s = static_cast<int>(idem.size());
  std::vector<std::vector<bool>> leq(s, std::vector<bool>(s));
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y) {
      const auto& ex = a.element(idem[x]);
      const auto& ey = a.element(idem[y]);
      bool below = true;
      for (size_t c = 0; c < ex.size(); ++c) below = below && ex[c] <= ey[c];
      leq[x][y] = below;
    }
  return from_leq(std::move(leq));
}

std::string DistributiveLattice::validate() const {
  const int s = size();
  for (int x = 0; x < s; ++x)
    if (!leq_[x][x]) return "order not reflexive";
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y) {
      if (x != y && leq_[x][y] && leq_[y][x]) return "order not antisymmetric";
      for (int z = 0; z < s; ++z)
        if (leq_[x][y] && leq_[y][z] && !leq_[x][z]) return "order not transitive";
    }
  for (int x = 0; x < s; ++x) {
    if (!leq_[bottom_][x]) return "bottom not below everything";
    if (!leq_[x][top_]) return "top not above everything";
  }
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y) {
      const int j = join_[x][y], m = meet_[x][y];
      if (!leq_[x][j] || !leq_[y][j]) return "join not an upper bound";
      if (!leq_[m][x] || !leq_[m][y]) return "meet not a lower bound";
      for (int z = 0; z < s; ++z) {
        if (leq_[x][z] && leq_[y][z] && !leq_[j][z]) return "join not least";
        if (leq_[z][x] && leq_[z][y] && !leq_[z][m]) return "meet not greatest";
      }
    }
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < s; ++z)
        if (meet_[x][join_[y][z]] != join_[meet_[x][y]][meet_[x][z]])
          return "not distributive";
  return "";
}

std::vector<int> DistributiveLattice::prime_filter_minima() const {
  // join-prime elements: p != bottom with p <= x v y implying p <= x or p <= y
  std::vector<int> out;
  for (int p = 0; p < size(); ++p) {
    if (p == bottom_) continue;
    bool prime = true;
    for (int x = 0; x < size() && prime; ++x)
      for (int y = 0; y < size() && prime; ++y)
        if (leq_[p][join_[x][y]] && !leq_[p][x] && !leq_[p][y]) prime = false;
    if (prime) out.push_back(p);
  }
  return out;
}

std::vector<std::vector<char>> DistributiveLattice::prime_filters() const {
  std::vector<std::vector<char>> out;
  for (int p : prime_filter_minima()) {
    std::vector<char> f(size(), 0);
    for (int x = 0; x < size(); ++x) f[x] = leq_[p][x] ? 1 : 0;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<std::vector<char>> DistributiveLattice::prime_filters_bruteforce()
    const {
  const int s = size();
  if (s > 20) throw std::invalid_argument("lattice too large for subset scan");
  std::vector<std::vector<char>> out;
  for (uint64_t mask = 1; mask < (uint64_t{1} << s); ++mask) {
    auto in = [&](int x) { return (mask >> x) & 1; };
    if (in(bottom_)) continue;           // proper
    if (!in(top_)) continue;             // nonempty filter contains top
    bool good = true;
    for (int x = 0; x < s && good; ++x)
      for (int y = 0; y < s && good; ++y) {
        if (in(x) && leq_[x][y] && !in(y)) good = false;               // up-set
        if (in(x) && in(y) && !in(meet_[x][y])) good = false;          // meets
        if (!in(x) && !in(y) && in(join_[x][y])) good = false;         // prime
      }
    if (!good) continue;
    std::vector<char> f(s, 0);
    for (int x = 0; x < s; ++x) f[x] = in(x) ? 1 : 0;
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtroids

uint64_t Filtroid::space() const { return pow_u64(lattice->size(), k); }

uint64_t Filtroid::encode(const std::vector<int>& tuple) const {
  uint64_t code = 0;
  for (int x : tuple) code = code * lattice->size() + static_cast<uint64_t>(x);
  return code;
}

std::vector<int> Filtroid::decode(uint64_t code) const {
  std::vector<int> tuple(k);
  for (int j = k - 1; j >= 0; --j) {
    tuple[j] = static_cast<int>(code % lattice->size());
    code /= lattice->size();
  }
  return tuple;
}

bool Filtroid::proper() const {
  for (char c : members)
    if (!c) return true;
  return false;
}

Filtroid make_filtroid(const DistributiveLattice& l, int k,
                       const std::vector<std::vector<int>>& tuples) {
  if (k < 1) throw std::invalid_argument("filtroid arity must be >= 1");
  Filtroid f{&l, k, {}};
  f.members.assign(f.space(), 0);
  for (const auto& t : tuples) {
    if (static_cast<int>(t.size()) != k)
      throw std::invalid_argument("tuple arity mismatch");
    for (int x : t)
      if (x < 0 || x >= l.size())
        throw std::invalid_argument("tuple mentions unknown element");
    f.members[f.encode(t)] = 1;
  }
  return f;
}

namespace {

// componentwise order on decoded tuples
bool tuple_leq(const DistributiveLattice& l, const std::vector<int>& a,
               const std::vector<int>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (!l.leq(a[i], b[i])) return false;
  return true;
}

// differ in at most one position
bool near(const std::vector<int>& a, const std::vector<int>& b) {
  int diff = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) ++diff;
  return diff <= 1;
}

}  // namespace

bool is_filtroid(const Filtroid& f) {
  const auto& l = *f.lattice;
  const uint64_t space = f.space();

  std::vector<std::vector<int>> tuples(space);
  for (uint64_t c = 0; c < space; ++c) tuples[c] = f.decode(c);

  for (uint64_t c = 0; c < space; ++c) {
    bool has_top = false;
    for (int x : tuples[c]) has_top = has_top || x == l.top();
    if (has_top && !f.members[c]) return false;  // misses {1}+...+{1}
  }
  for (uint64_t c = 0; c < space; ++c) {
    if (!f.members[c]) continue;
    for (uint64_t d = 0; d < space; ++d) {
      if (tuple_leq(l, tuples[c], tuples[d]) && !f.members[d]) return false;
      if (f.members[d] && near(tuples[c], tuples[d])) {
        std::vector<int> m(f.k);
        for (int j = 0; j < f.k; ++j) m[j] = l.meet(tuples[c][j], tuples[d][j]);
        if (!f.members[f.encode(m)]) return false;
      }
    }
  }
  return true;
}

namespace {

// sum of k filters (as bitmaps over L): tuples with some component inside
std::vector<char> filter_sum(const DistributiveLattice& l, int k,
                             const std::vector<const std::vector<char>*>& filters) {
  const uint64_t space = pow_u64(l.size(), k);
  std::vector<char> out(space, 0);
  Filtroid probe{&l, k, {}};
  for (uint64_t c = 0; c < space; ++c) {
    const auto t = probe.decode(c);
    for (int j = 0; j < k; ++j)
      if ((*filters[j])[t[j]]) {
        out[c] = 1;
        break;
      }
  }
  return out;
}

}  // namespace

std::optional<std::vector<int>> is_prime(const Filtroid& f) {
  if (!f.proper()) throw std::invalid_argument("primality needs a proper filtroid");
  const auto& l = *f.lattice;
  const auto minima = l.prime_filter_minima();
  const auto filters = l.prime_filters();
  if (filters.empty()) return std::nullopt;

  std::vector<int> pick(f.k, 0);
  while (true) {
    std::vector<const std::vector<char>*> chosen;
    for (int j = 0; j < f.k; ++j) chosen.push_back(&filters[pick[j]]);
    if (filter_sum(l, f.k, chosen) == f.members) {
      std::vector<int> decomposition(f.k);
      for (int j = 0; j < f.k; ++j) decomposition[j] = minima[pick[j]];
      return decomposition;
    }
    int j = f.k - 1;
    for (; j >= 0; --j) {
      if (++pick[j] < static_cast<int>(filters.size())) break;
      pick[j] = 0;
    }
    if (j < 0) break;
  }
  return std::nullopt;
}

Filtroid filtroid_closure(const DistributiveLattice& l, int k,
                          const std::vector<std::vector<int>>& seeds) {
  Filtroid f = make_filtroid(l, k, seeds);
  const uint64_t space = f.space();

  std::vector<std::vector<int>> tuples(space);
  for (uint64_t c = 0; c < space; ++c) tuples[c] = f.decode(c);

  for (uint64_t c = 0; c < space; ++c) {
    bool has_top = false;
    for (int x : tuples[c]) has_top = has_top || x == l.top();
    if (has_top) f.members[c] = 1;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint64_t c = 0; c < space; ++c) {
      if (!f.members[c]) continue;
      for (uint64_t d = 0; d < space; ++d) {
        if (!f.members[d] && tuple_leq(l, tuples[c], tuples[d])) {
          f.members[d] = 1;
          changed = true;
        }
        if (f.members[d] && near(tuples[c], tuples[d])) {
          std::vector<int> m(k);
          for (int j = 0; j < k; ++j) m[j] = l.meet(tuples[c][j], tuples[d][j]);
          const uint64_t mc = f.encode(m);
          if (!f.members[mc]) {
            f.members[mc] = 1;
            changed = true;
          }
        }
      }
    }
  }
  return f;
}

namespace {

std::optional<std::string> intersection_property_holds(
    const DistributiveLattice& l, int k, const Filtroid& f,
    const std::vector<std::vector<char>>& prime_filtroids) {
  std::vector<char> inter(f.space(), 1);
  bool any = false;
  for (const auto& p : prime_filtroids) {
    bool contains = true;
    for (uint64_t c = 0; c < f.space() && contains; ++c)
      if (f.members[c] && !p[c]) contains = false;
    if (!contains) continue;
    any = true;
    for (uint64_t c = 0; c < f.space(); ++c) inter[c] = inter[c] && p[c];
  }
  if (!any) return "no prime filtroid contains the candidate";
  if (inter != f.members) return "intersection of containing primes is larger";
  (void)l;
  (void)k;
  return std::nullopt;
}

}  // namespace

PrimeIntersectionReport check_prime_intersection_theorem(
    const DistributiveLattice& l, int k, bool full_enumeration, int seeds,
    uint64_t seed) {
  PrimeIntersectionReport rep;
  const uint64_t space = pow_u64(l.size(), k);

  // all prime filtroids: sums over k-tuples of prime filters
  const auto filters = l.prime_filters();
  std::vector<std::vector<char>> primes;
  {
    std::vector<int> pick(k, 0);
    if (!filters.empty()) {
      while (true) {
        std::vector<const std::vector<char>*> chosen;
        for (int j = 0; j < k; ++j) chosen.push_back(&filters[pick[j]]);
        auto sum = filter_sum(l, k, chosen);
        if (std::find(primes.begin(), primes.end(), sum) == primes.end())
          primes.push_back(std::move(sum));
        int j = k - 1;
        for (; j >= 0; --j) {
          if (++pick[j] < static_cast<int>(filters.size())) break;
          pick[j] = 0;
        }
        if (j < 0) break;
      }
    }
  }

  auto examine = [&](const Filtroid& f) -> bool {
    if (!f.proper()) {
      ++rep.improper;
      return true;
    }
    ++rep.checked;
    if (auto err = intersection_property_holds(l, k, f, primes)) {
      rep.ok = false;
      std::string tuples;
      for (uint64_t c = 0; c < f.space(); ++c)
        if (f.members[c]) {
          tuples += " ";
          for (int x : f.decode(c)) tuples += std::to_string(x) + ",";
        }
      rep.detail = *err + "; filtroid tuples:" + tuples;
      return false;
    }
    return true;
  };

  if (full_enumeration) {
    if (space > 20)
      throw std::invalid_argument("power space too large for full enumeration");
    for (uint64_t mask = 0; mask < (uint64_t{1} << space); ++mask) {
      Filtroid f{&l, k, std::vector<char>(space, 0)};
      for (uint64_t c = 0; c < space; ++c) f.members[c] = (mask >> c) & 1;
      if (!is_filtroid(f)) continue;
      if (!examine(f)) return rep;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<uint64_t> pick_code(0, space - 1);
    std::uniform_int_distribution<int> pick_count(0, 2);
    for (int i = 0; i < seeds; ++i) {
      std::vector<std::vector<int>> seed_tuples;
      const int count = pick_count(rng);
      Filtroid probe{&l, k, {}};
      for (int t = 0; t < count; ++t)
        seed_tuples.push_back(probe.decode(pick_code(rng)));
      Filtroid f = filtroid_closure(l, k, seed_tuples);
      if (!examine(f)) return rep;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Lemma R three-way agreement

LemmaRReport lemma_r_check(const FiniteMMVAlgebra& a, const std::string& modality) {
  auto it = a.ops().find(modality);
  if (it == a.ops().end())
    throw std::invalid_argument("unknown modality: " + modality);
  const int k = it->second.arity;
  const int n = a.n();

  CanonicalOptions opts;
  opts.full_carrier_relation = true;  // condition (i) uses the defining relation
  const LnFrame frame = canonical_frame(a, opts);
  const auto homs = enumerate_homs(a, n);
  const int H = static_cast<int>(homs.size());

  const DistributiveLattice skel = DistributiveLattice::from_boolean_skeleton(a);
  const auto& idem = a.idempotents();
  const int B = static_cast<int>(idem.size());

  // codes over skeleton element ids; position of carrier idempotents in idem
  std::vector<int> skel_id(a.size(), -1);
  for (int i = 0; i < B; ++i) skel_id[idem[i]] = i;

  auto bump = [&](std::vector<int>& digits, int base) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
      if (++digits[i] < base) return true;
      digits[i] = 0;
    }
    return false;
  };

  for (int u = 0; u < H; ++u) {
    // the operator preimage of u's unit set, cut to the skeleton
    Filtroid nabla_pre{&skel, k, std::vector<char>(pow_u64(B, k), 0)};
    {
      std::vector<int> digits(k, 0);
      do {
        std::vector<int> args(k);
        std::vector<int> code(k);
        for (int j = 0; j < k; ++j) {
          args[j] = idem[digits[j]];
          code[j] = digits[j];
        }
        if (homs[u].values[a.apply(modality, args)] == n)
          nabla_pre.members[nabla_pre.encode(code)] = 1;
      } while (bump(digits, B));
    }
    if (!is_filtroid(nabla_pre))
      return {false, "operator preimage at world u" + std::to_string(u) +
                         " is not a filtroid"};

    std::vector<int> vs(k, 0);
    do {
      // (i) membership in the canonical relation
      bool c1 = false;
      {
        std::vector<int> tuple;
        tuple.push_back(u);
        for (int v : vs) tuple.push_back(v);
        const auto& tuples = frame.base.relations.at(modality);
        c1 = std::binary_search(tuples.begin(), tuples.end(), tuple);
      }

      // (ii) the inequality over every carrier tuple
      bool c2 = true;
      {
        std::vector<int> digits(k, 0);
        do {
          std::vector<int> args(k);
          for (int j = 0; j < k; ++j) args[j] = digits[j];
          const int lhs = homs[u].values[a.apply(modality, args)];
          int rhs = 0;
          for (int j = 0; j < k; ++j)
            rhs = std::max(rhs, homs[vs[j]].values[args[j]]);
          if (lhs > rhs) {
            c2 = false;
            break;
          }
        } while (bump(digits, a.size()));
      }

      // (iii) the summed unit sets form a prime filtroid containing the preimage
      bool c3 = true;
      {
        Filtroid sum{&skel, k, std::vector<char>(pow_u64(B, k), 0)};
        std::vector<int> digits(k, 0);
        do {
          bool inside = false;
          for (int j = 0; j < k; ++j)
            if (homs[vs[j]].values[idem[digits[j]]] == n) inside = true;
          if (inside) sum.members[sum.encode(digits)] = 1;
        } while (bump(digits, B));

        if (!sum.proper() || !is_filtroid(sum) || !is_prime(sum)) c3 = false;
        if (c3) {
          for (uint64_t c = 0; c < sum.space(); ++c)
            if (nabla_pre.members[c] && !sum.members[c]) {
              c3 = false;
              break;
            }
        }
      }

      if (c1 != c2 || c2 != c3) {
        std::string tuple = "u" + std::to_string(u) + " -> (";
        for (int v : vs) tuple += "u" + std::to_string(v) + " ";
        return {false, "conditions disagree at " + tuple + "): relation=" +
                           std::to_string(c1) + " inequality=" + std::to_string(c2) +
                           " filtroid=" + std::to_string(c3)};
      }
    } while (bump(vs, H));
  }
  return {};
}

}  // namespace lmv
