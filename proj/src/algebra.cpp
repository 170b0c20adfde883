#include "lmv/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lmv/mvcore.hpp"

namespace lmv {

namespace {

// k-digit mixed-radix counter over a fixed base; last digit fastest.
bool bump_digits(std::vector<int>& digits, int base) {
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

uint64_t pow_u64(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

FiniteMMVAlgebra::FiniteMMVAlgebra(int n, std::vector<Coordinate> coords,
                                   std::vector<std::vector<int>> carrier,
                                   std::map<std::string, ModalOp> ops)
    : n_(n), coords_(std::move(coords)), carrier_(std::move(carrier)),
      ops_(std::move(ops)) {
  if (n_ < 1) throw std::invalid_argument("grain must be positive");
  if (coords_.empty()) throw std::invalid_argument("algebra needs coordinates");
  for (const auto& c : coords_)
    if (c.grain < 1 || n_ % c.grain != 0)
      throw std::invalid_argument("coordinate grain must divide the ambient grain");

  if (carrier_.empty()) throw std::invalid_argument("empty carrier");
  // modal tables address elements by position, so the order is part of the
  // representation: sorted, duplicate-free
  if (!std::is_sorted(carrier_.begin(), carrier_.end()) ||
      std::adjacent_find(carrier_.begin(), carrier_.end()) != carrier_.end())
    throw std::invalid_argument("carrier must be sorted and duplicate-free");

  for (const auto& t : carrier_) {
    if (t.size() != coords_.size())
      throw std::invalid_argument("carrier tuple width mismatch");
    for (size_t c = 0; c < t.size(); ++c) {
      if (t[c] < 0 || t[c] > n_)
        throw std::invalid_argument("carrier value out of range");
      if (t[c] % (n_ / coords_[c].grain) != 0)
        throw std::invalid_argument("carrier value outside coordinate subchain");
    }
  }
  for (int i = 0; i < size(); ++i) index_[carrier_[i]] = i;

  one_ = index_of(std::vector<int>(coords_.size(), n_));
  zero_ = index_of(std::vector<int>(coords_.size(), 0));

  // closure under the MV operations
  for (int a = 0; a < size(); ++a) {
    op_neg(a);
    for (int b = 0; b < size(); ++b) op_imp(a, b);
  }

  for (const auto& [name, op] : ops_) {
    if (op.arity < 1) throw std::invalid_argument("modal arity must be >= 1");
    if (op.table.size() != pow_u64(size(), op.arity))
      throw std::invalid_argument("modal table size mismatch for " + name);
    for (int v : op.table)
      if (v < 0 || v >= size())
        throw std::invalid_argument("modal table entry out of range for " + name);
  }

  for (int a : idempotent_scan()) idempotents_.push_back(a);
}

std::vector<int> FiniteMMVAlgebra::idempotent_scan() const {
  std::vector<int> out;
  for (int a = 0; a < size(); ++a) {
    bool idem = true;
    for (int v : carrier_[a]) idem = idem && (v == 0 || v == n_);
    if (idem) out.push_back(a);
  }
  return out;
}

int FiniteMMVAlgebra::index_of(const std::vector<int>& tuple) const {
  auto it = index_.find(tuple);
  if (it == index_.end())
    throw std::invalid_argument("tuple is not a carrier element");
  return it->second;
}

std::vector<int> FiniteMMVAlgebra::pointwise(const std::vector<int>& a,
                                             const std::vector<int>& b,
                                             int which) const {
  std::vector<int> out(a.size());
  for (size_t c = 0; c < a.size(); ++c) {
    switch (which) {
      case 0: out[c] = chainop::imp(a[c], b[c], n_); break;
      case 1: out[c] = chainop::oplus(a[c], b[c], n_); break;
      case 2: out[c] = chainop::odot(a[c], b[c], n_); break;
      case 3: out[c] = chainop::join(a[c], b[c]); break;
      case 4: out[c] = chainop::meet(a[c], b[c]); break;
    }
  }
  return out;
}

int FiniteMMVAlgebra::op_neg(int a) const {
  std::vector<int> out(coords_.size());
  for (size_t c = 0; c < out.size(); ++c) out[c] = chainop::neg(carrier_[a][c], n_);
  return index_of(out);
}

int FiniteMMVAlgebra::op_imp(int a, int b) const {
  return index_of(pointwise(carrier_[a], carrier_[b], 0));
}
int FiniteMMVAlgebra::op_oplus(int a, int b) const {
  return index_of(pointwise(carrier_[a], carrier_[b], 1));
}
int FiniteMMVAlgebra::op_odot(int a, int b) const {
  return index_of(pointwise(carrier_[a], carrier_[b], 2));
}
int FiniteMMVAlgebra::op_join(int a, int b) const {
  return index_of(pointwise(carrier_[a], carrier_[b], 3));
}
int FiniteMMVAlgebra::op_meet(int a, int b) const {
  return index_of(pointwise(carrier_[a], carrier_[b], 4));
}

int FiniteMMVAlgebra::apply(const std::string& modality,
                            std::span<const int> args) const {
  auto it = ops_.find(modality);
  if (it == ops_.end()) throw std::invalid_argument("unknown modality: " + modality);
  const ModalOp& op = it->second;
  if (static_cast<int>(args.size()) != op.arity)
    throw std::invalid_argument("modal arity mismatch for " + modality);
  uint64_t flat = 0;
  for (int x : args) flat = flat * size() + static_cast<uint64_t>(x);
  return op.table[flat];
}

bool FiniteMMVAlgebra::is_idempotent(int a) const {
  for (int v : carrier_[a])
    if (v != 0 && v != n_) return false;
  return true;
}

int FiniteMMVAlgebra::eval_formula(const Formula& phi,
                                   const std::map<std::string, int>& assign) const {
  using K = Formula::Kind;
  const Formula core = desugar(phi);
  struct Rec {
    const FiniteMMVAlgebra& alg;
    const std::map<std::string, int>& assign;
    int go(const Formula& f) const {
      switch (f.kind()) {
        case K::Var: {
          auto it = assign.find(f.name());
          if (it == assign.end())
            throw std::invalid_argument("unassigned variable: " + f.name());
          return it->second;
        }
        case K::One:
          return alg.one();
        case K::Neg:
          return alg.op_neg(go(f.child(0)));
        case K::Imp: {
          int a = go(f.child(0));
          return alg.op_imp(a, go(f.child(1)));
        }
        case K::Modal: {
          std::vector<int> args;
          for (size_t i = 0; i < f.child_count(); ++i) args.push_back(go(f.child(i)));
          return alg.apply(f.name(), args);
        }
        default:
          throw std::logic_error("unexpected sugar after desugar");
      }
    }
  };
  return Rec{*this, assign}.go(core);
}

Signature FiniteMMVAlgebra::signature() const {
  Signature sig;
  for (const auto& [name, op] : ops_) sig.modalities[name] = op.arity;
  return sig;
}

// ---------------------------------------------------------------------------
// Complex constructions

namespace {

std::vector<std::vector<int>> product_carrier(
    const std::vector<std::vector<int>>& allowed) {
  std::vector<std::vector<int>> out;
  std::vector<size_t> digit(allowed.size(), 0);
  while (true) {
    std::vector<int> tuple(allowed.size());
    for (size_t c = 0; c < allowed.size(); ++c) tuple[c] = allowed[c][digit[c]];
    out.push_back(std::move(tuple));
    int i = static_cast<int>(allowed.size()) - 1;
    for (; i >= 0; --i) {
      if (++digit[i] < allowed[i].size()) break;
      digit[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

// Modal tables of a frame algebra: the operator value at world u is the min
// over successor tuples of the max of the argument columns.
std::map<std::string, ModalOp> frame_ops(const LFrame& frame, int n,
                                         const std::vector<std::vector<int>>& carrier) {
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < carrier.size(); ++i) index[carrier[i]] = static_cast<int>(i);

  const int W = static_cast<int>(frame.worlds.size());
  std::map<std::string, ModalOp> ops;
  for (const auto& [name, k] : frame.sig.modalities) {
    // successor tails per world, resolved once
    std::vector<std::vector<std::vector<int>>> tails(W);
    for (int u = 0; u < W; ++u) tails[u] = frame.successors(name, u);

    ModalOp op;
    op.arity = k;
    op.table.resize(pow_u64(carrier.size(), k));
    std::vector<int> args(k, 0);
    uint64_t flat = 0;
    do {
      std::vector<int> result(W);
      for (int u = 0; u < W; ++u) {
        int best = n;
        for (const auto& tail : tails[u]) {
          int inner = 0;
          for (int j = 0; j < k; ++j)
            inner = std::max(inner, carrier[args[j]][tail[j]]);
          best = std::min(best, inner);
        }
        result[u] = best;
      }
      op.table[flat++] = index.at(result);
    } while (bump_digits(args, static_cast<int>(carrier.size())));
    ops[name] = std::move(op);
  }
  return ops;
}

}  // namespace

FiniteMMVAlgebra complex_algebra(const LFrame& f, int n) {
  f.validate();
  if (n < 1) throw std::invalid_argument("grain must be positive");
  std::vector<Coordinate> coords;
  std::vector<std::vector<int>> allowed;
  std::vector<int> full;
  for (int v = 0; v <= n; ++v) full.push_back(v);
  for (const auto& w : f.worlds) {
    coords.push_back({w, n});
    allowed.push_back(full);
  }
  auto carrier = product_carrier(allowed);
  auto ops = frame_ops(f, n, carrier);
  return FiniteMMVAlgebra(n, std::move(coords), std::move(carrier), std::move(ops));
}

FiniteMMVAlgebra tight_complex_algebra(const LnFrame& f) {
  auto rep = validate_ln(f);
  if (!rep.ok)
    throw std::invalid_argument("invalid enriched frame: " + rep.clause + ": " +
                                rep.detail);
  const int n = f.n;
  std::vector<Coordinate> coords;
  std::vector<std::vector<int>> allowed;
  for (int u = 0; u < static_cast<int>(f.base.worlds.size()); ++u) {
    const int s = s_value(f, u);
    coords.push_back({f.base.worlds[u], s});
    std::vector<int> vals;
    for (int v = 0; v <= n; v += n / s) vals.push_back(v);
    allowed.push_back(std::move(vals));
  }
  auto carrier = product_carrier(allowed);
  auto ops = frame_ops(f.base, n, carrier);
  return FiniteMMVAlgebra(n, std::move(coords), std::move(carrier), std::move(ops));
}

// ---------------------------------------------------------------------------
// Axioms

AxiomReport check_mmv_axioms(const FiniteMMVAlgebra& a) {
  const int size = a.size();
  for (const auto& [name, op] : a.ops()) {
    const int k = op.arity;

    // unit scheme: forcing any position to 1 forces the operator to 1
    {
      std::vector<int> args(k, 0);
      do {
        for (int i = 0; i < k; ++i) {
          std::vector<int> probe = args;
          probe[i] = a.one();
          if (a.apply(name, probe) != a.one())
            return {false, name + " violates the unit scheme at position " +
                               std::to_string(i)};
        }
      } while (bump_digits(args, size));
    }

    // star scheme: the operator commutes with doubling by (+) and (.)
    {
      std::vector<int> args(k, 0);
      do {
        std::vector<int> dplus(k), dtimes(k);
        for (int i = 0; i < k; ++i) {
          dplus[i] = a.op_oplus(args[i], args[i]);
          dtimes[i] = a.op_odot(args[i], args[i]);
        }
        int base = a.apply(name, args);
        if (a.apply(name, dplus) != a.op_oplus(base, base))
          return {false, name + " does not commute with x(+)x"};
        if (a.apply(name, dtimes) != a.op_odot(base, base))
          return {false, name + " does not commute with x(.)x"};
      } while (bump_digits(args, size));
    }

    // implication scheme in each position, other positions arbitrary
    {
      std::vector<int> args(k, 0);
      do {
        for (int i = 0; i < k; ++i) {
          if (args[i] != 0) continue;  // position i gets substituted; scan once
          std::vector<int> probe = args;
          for (int y = 0; y < size; ++y) {
            probe[i] = y;
            const int ny = a.apply(name, probe);
            for (int z = 0; z < size; ++z) {
              probe[i] = a.op_imp(y, z);
              const int lhs = a.apply(name, probe);
              probe[i] = z;
              const int nz = a.apply(name, probe);
              if (lhs != a.op_imp(ny, nz))
                return {false, name + " violates the implication scheme"};
            }
          }
        }
      } while (bump_digits(args, size));
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Boolean skeleton

FiniteMMVAlgebra boolean_skeleton_algebra(const FiniteMMVAlgebra& a) {
  const auto& idem = a.idempotents();
  std::vector<int> newindex(a.size(), -1);
  for (size_t i = 0; i < idem.size(); ++i) newindex[idem[i]] = static_cast<int>(i);

  std::vector<Coordinate> coords;
  for (const auto& c : a.coords()) coords.push_back({c.label, 1});
  std::vector<std::vector<int>> carrier;
  for (int x : idem) carrier.push_back(a.element(x));

  std::map<std::string, ModalOp> ops;
  for (const auto& [name, op] : a.ops()) {
    ModalOp rop;
    rop.arity = op.arity;
    rop.table.resize(pow_u64(idem.size(), op.arity));
    std::vector<int> digits(op.arity, 0);
    uint64_t flat = 0;
    do {
      std::vector<int> args(op.arity);
      for (int j = 0; j < op.arity; ++j) args[j] = idem[digits[j]];
      const int res = a.apply(name, args);
      if (newindex[res] < 0)
        throw std::logic_error("skeleton not closed under " + name +
                               "; algebra is outside the variety");
      rop.table[flat++] = newindex[res];
    } while (bump_digits(digits, static_cast<int>(idem.size())));
    ops[name] = std::move(rop);
  }
  return FiniteMMVAlgebra(a.n(), std::move(coords), std::move(carrier),
                          std::move(ops));
}

// ---------------------------------------------------------------------------
// Homomorphisms through Boolean ultrafilters

int Homomorphism::image_grain(int n) const {
  int m = 1;
  for (int v : values) m = std::lcm(m, n / std::gcd(v == 0 ? n : v, n));
  return m;
}

namespace {

// Atoms of the Boolean skeleton: minimal nonzero idempotents.
std::vector<int> skeleton_atoms(const FiniteMMVAlgebra& a) {
  const auto& idem = a.idempotents();
  std::vector<int> atoms;
  for (int b : idem) {
    if (b == a.zero()) continue;
    bool minimal = true;
    for (int c : idem) {
      if (c == a.zero() || c == b) continue;
      const auto& cb = a.element(c);
      const auto& bb = a.element(b);
      bool below = true;
      for (size_t i = 0; i < cb.size(); ++i) below = below && cb[i] <= bb[i];
      if (below) {
        minimal = false;
        break;
      }
    }
    if (minimal) atoms.push_back(b);
  }
  return atoms;
}

std::vector<Homomorphism> all_homs(const FiniteMMVAlgebra& a) {
  const int n = a.n();
  std::vector<Homomorphism> out;
  for (int atom : skeleton_atoms(a)) {
    const auto& e = a.element(atom);
    Homomorphism h;
    h.values.resize(a.size());
    for (int x = 0; x < a.size(); ++x) {
      // the largest threshold i whose step image contains the atom's
      // ultrafilter is the minimum of x over the atom's support
      int v = n;
      for (size_t c = 0; c < e.size(); ++c)
        if (e[c] == n) v = std::min(v, a.element(x)[c]);
      h.values[x] = v;
    }

    // the ultrafilter recipe must return a homomorphism; anything else is a bug
    if (h.values[a.one()] != n)
      throw std::logic_error("hom recovery failed on the unit");
    for (int x = 0; x < a.size(); ++x) {
      if (h.values[a.op_neg(x)] != chainop::neg(h.values[x], n))
        throw std::logic_error("hom recovery failed on negation");
      for (int y = 0; y < a.size(); ++y)
        if (h.values[a.op_imp(x, y)] !=
            chainop::imp(h.values[x], h.values[y], n))
          throw std::logic_error("hom recovery failed on implication");
    }
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

std::vector<Homomorphism> enumerate_homs(const FiniteMMVAlgebra& a, int m) {
  if (m < 1 || a.n() % m != 0)
    throw std::invalid_argument("image grain must divide the ambient grain");
  std::vector<Homomorphism> out;
  for (auto& h : all_homs(a))
    if (m % h.image_grain(a.n()) == 0) out.push_back(std::move(h));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical structures

namespace {

struct CanonicalData {
  std::vector<Homomorphism> homs;
  LnFrame frame;
};

CanonicalData build_canonical(const FiniteMMVAlgebra& a, CanonicalOptions opts) {
  if (opts.check_axioms) {
    AxiomReport rep = check_mmv_axioms(a);
    if (!rep.ok)
      throw std::invalid_argument("algebra fails the modal axioms: " + rep.detail);
  }

  CanonicalData data;
  data.homs = all_homs(a);
  const int H = static_cast<int>(data.homs.size());
  const int n = a.n();

  LFrame base;
  base.sig = a.signature();
  for (int i = 0; i < H; ++i) base.worlds.push_back("u" + std::to_string(i));

  const std::vector<int>* domain = &a.idempotents();
  std::vector<int> full;
  if (opts.full_carrier_relation) {
    full.resize(a.size());
    std::iota(full.begin(), full.end(), 0);
    domain = &full;
  }

  for (const auto& [name, op] : a.ops()) {
    const int k = op.arity;
    auto& tuples = base.relations[name];

    // tuples over the quantification domain with operator value forced to 1
    for (int u = 0; u < H; ++u) {
      std::vector<std::vector<int>> forcing;
      std::vector<int> digits(k, 0);
      do {
        std::vector<int> args(k);
        for (int j = 0; j < k; ++j) args[j] = (*domain)[digits[j]];
        if (data.homs[u].values[a.apply(name, args)] == n) forcing.push_back(args);
      } while (bump_digits(digits, static_cast<int>(domain->size())));

      std::vector<int> vs(k, 0);
      do {
        bool related = true;
        for (const auto& args : forcing) {
          int best = 0;
          for (int j = 0; j < k; ++j)
            best = std::max(best, data.homs[vs[j]].values[args[j]]);
          if (best != n) {
            related = false;
            break;
          }
        }
        if (related) {
          std::vector<int> tuple;
          tuple.push_back(u);
          for (int v : vs) tuple.push_back(v);
          tuples.push_back(std::move(tuple));
        }
      } while (bump_digits(vs, H));
    }
    std::sort(tuples.begin(), tuples.end());
  }

  std::vector<int> s(H);
  for (int i = 0; i < H; ++i) s[i] = data.homs[i].image_grain(n);
  data.frame = enrich_by_s(base, n, s);
  return data;
}

}  // namespace

LnFrame canonical_frame(const FiniteMMVAlgebra& a, CanonicalOptions opts) {
  return build_canonical(a, opts).frame;
}

LFrame canonical_lframe(const FiniteMMVAlgebra& a, CanonicalOptions opts) {
  return underlying(canonical_frame(a, opts));
}

Model canonical_model(const FiniteMMVAlgebra& a,
                      const std::map<std::string, int>& assign,
                      CanonicalOptions opts) {
  CanonicalData data = build_canonical(a, opts);
  Model m;
  m.frame = underlying(data.frame);
  m.n = a.n();
  for (const auto& [p, idx] : assign) {
    if (idx < 0 || idx >= a.size())
      throw std::invalid_argument("assignment outside the carrier");
    m.vars.push_back(p);
  }
  m.table.resize(m.frame.worlds.size() * m.vars.size());
  for (size_t u = 0; u < m.frame.worlds.size(); ++u)
    for (size_t p = 0; p < m.vars.size(); ++p)
      m.table[u * m.vars.size() + p] = data.homs[u].values[assign.at(m.vars[p])];
  return m;
}

TruthLemmaReport truth_lemma_check(const FiniteMMVAlgebra& a,
                                   const std::map<std::string, int>& assign,
                                   std::span<const Formula> formulas,
                                   CanonicalOptions opts) {
  CanonicalData data = build_canonical(a, opts);
  const int n = a.n();
  const int H = static_cast<int>(data.homs.size());

  // successor tails of the canonical frame, per modality
  std::map<std::string, std::vector<std::vector<std::vector<int>>>> succ;
  for (const auto& [name, _] : a.ops()) {
    auto& per = succ[name];
    per.resize(H);
    for (int u = 0; u < H; ++u) per[u] = data.frame.base.successors(name, u);
  }

  // memoized pair of (algebra value, semantic value per world), keyed by node
  std::map<const void*, std::pair<int, std::vector<int>>> memo;

  struct Rec {
    const FiniteMMVAlgebra& a;
    const std::map<std::string, int>& assign;
    const CanonicalData& data;
    const std::map<std::string, std::vector<std::vector<std::vector<int>>>>& succ;
    std::map<const void*, std::pair<int, std::vector<int>>>& memo;
    int n, H;

    const std::pair<int, std::vector<int>>& go(const Formula& f) {
      auto it = memo.find(f.id());
      if (it != memo.end()) return it->second;

      std::pair<int, std::vector<int>> out;
      out.second.resize(H);
      using K = Formula::Kind;
      switch (f.kind()) {
        case K::Var: {
          auto a_it = assign.find(f.name());
          if (a_it == assign.end())
            throw std::invalid_argument("unassigned variable: " + f.name());
          out.first = a_it->second;
          for (int u = 0; u < H; ++u)
            out.second[u] = data.homs[u].values[a_it->second];
          break;
        }
        case K::One: {
          out.first = a.one();
          for (int u = 0; u < H; ++u) out.second[u] = n;
          break;
        }
        case K::Neg: {
          const auto& c = go(f.child(0));
          out.first = a.op_neg(c.first);
          for (int u = 0; u < H; ++u) out.second[u] = chainop::neg(c.second[u], n);
          break;
        }
        case K::Imp: {
          // evaluate children first; references into the memo may move
          const auto l = go(f.child(0));
          const auto r = go(f.child(1));
          out.first = a.op_imp(l.first, r.first);
          for (int u = 0; u < H; ++u)
            out.second[u] = chainop::imp(l.second[u], r.second[u], n);
          break;
        }
        case K::Modal: {
          const int k = static_cast<int>(f.child_count());
          std::vector<std::pair<int, std::vector<int>>> kids;
          for (int j = 0; j < k; ++j) kids.push_back(go(f.child(j)));
          std::vector<int> args;
          for (const auto& kid : kids) args.push_back(kid.first);
          out.first = a.apply(f.name(), args);
          const auto& per = succ.at(f.name());
          for (int u = 0; u < H; ++u) {
            int best = n;
            for (const auto& tail : per[u]) {
              int inner = 0;
              for (int j = 0; j < k; ++j)
                inner = std::max(inner, kids[j].second[tail[j]]);
              best = std::min(best, inner);
            }
            out.second[u] = best;
          }
          break;
        }
        default:
          throw std::logic_error("truth lemma expects desugared formulas");
      }
      return memo.emplace(f.id(), std::move(out)).first->second;
    }
  };

  Rec rec{a, assign, data, succ, memo, n, H};
  for (const auto& phi : formulas) {
    const Formula core = desugar(phi);
    const auto& v = rec.go(core);
    for (int u = 0; u < H; ++u) {
      const int algebraic = data.homs[u].values[v.first];
      if (v.second[u] != algebraic)
        return {false, "formula " + print(phi) + " at world u" + std::to_string(u) +
                           ": semantic " + std::to_string(v.second[u]) + "/" +
                           std::to_string(n) + " vs algebraic " +
                           std::to_string(algebraic) + "/" + std::to_string(n)};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Canonical extensions

namespace {

// index of the projection onto coordinate w among the homomorphisms
int projection_index(const FiniteMMVAlgebra& a,
                     const std::vector<Homomorphism>& homs, int w) {
  for (size_t i = 0; i < homs.size(); ++i) {
    bool match = true;
    for (int x = 0; x < a.size() && match; ++x)
      if (homs[i].values[x] != a.element(x)[w]) match = false;
    if (match) return static_cast<int>(i);
  }
  throw std::logic_error("projection is not among the homomorphisms");
}

}  // namespace

CanonicalExtensionLn canonical_extension_ln(const LnFrame& f) {
  FiniteMMVAlgebra a = tight_complex_algebra(f);
  CanonicalData data = build_canonical(a, {});
  CanonicalExtensionLn out{std::move(data.frame), {}};
  for (int w = 0; w < static_cast<int>(f.base.worlds.size()); ++w)
    out.iota.push_back(projection_index(a, data.homs, w));
  return out;
}

CanonicalExtensionL canonical_extension_l(const LFrame& f, int n) {
  FiniteMMVAlgebra a = complex_algebra(f, n);
  FiniteMMVAlgebra b = boolean_skeleton_algebra(a);
  CanonicalData data = build_canonical(b, {});
  CanonicalExtensionL out{underlying(data.frame), {}};
  for (int w = 0; w < static_cast<int>(f.worlds.size()); ++w)
    out.iota.push_back(projection_index(b, data.homs, w));
  return out;
}

ModelExtension model_extension(const Model& m) {
  m.validate();
  FiniteMMVAlgebra a = complex_algebra(m.frame, m.n);
  std::map<std::string, int> assign;
  for (size_t p = 0; p < m.vars.size(); ++p) {
    std::vector<int> column(m.frame.worlds.size());
    for (size_t u = 0; u < m.frame.worlds.size(); ++u)
      column[u] = m.value(static_cast<int>(u), static_cast<int>(p));
    assign[m.vars[p]] = a.index_of(column);
  }
  CanonicalData data = build_canonical(a, {});

  ModelExtension out;
  out.model.frame = underlying(data.frame);
  out.model.n = m.n;
  out.model.vars = m.vars;
  out.model.table.resize(out.model.frame.worlds.size() * m.vars.size());
  for (size_t u = 0; u < out.model.frame.worlds.size(); ++u)
    for (size_t p = 0; p < m.vars.size(); ++p)
      out.model.table[u * m.vars.size() + p] =
          data.homs[u].values[assign.at(m.vars[p])];
  for (int w = 0; w < static_cast<int>(m.frame.worlds.size()); ++w)
    out.iota.push_back(projection_index(a, data.homs, w));
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms between algebras, duals, products, isomorphism

bool is_mmv_hom(const FiniteMMVAlgebra& a, const FiniteMMVAlgebra& b,
                const AlgebraHom& h) {
  if (a.n() != b.n()) throw std::invalid_argument("grain mismatch");
  if (h.map.size() != static_cast<size_t>(a.size()))
    throw std::invalid_argument("homomorphism must be total");
  for (int v : h.map)
    if (v < 0 || v >= b.size())
      throw std::invalid_argument("homomorphism leaves the target carrier");

  if (h.map[a.one()] != b.one()) return false;
  for (int x = 0; x < a.size(); ++x) {
    if (h.map[a.op_neg(x)] != b.op_neg(h.map[x])) return false;
    for (int y = 0; y < a.size(); ++y)
      if (h.map[a.op_imp(x, y)] != b.op_imp(h.map[x], h.map[y])) return false;
  }

  for (const auto& [name, op] : a.ops()) {
    auto it = b.ops().find(name);
    if (it == b.ops().end() || it->second.arity != op.arity)
      throw std::invalid_argument("modal signature mismatch");
    std::vector<int> args(op.arity, 0);
    do {
      std::vector<int> mapped(op.arity);
      for (int j = 0; j < op.arity; ++j) mapped[j] = h.map[args[j]];
      if (h.map[a.apply(name, args)] != b.apply(name, mapped)) return false;
    } while (bump_digits(args, a.size()));
  }
  return true;
}

std::vector<AlgebraHom> enumerate_mmv_homs(const FiniteMMVAlgebra& a,
                                           const FiniteMMVAlgebra& b) {
  if (a.n() != b.n()) throw std::invalid_argument("grain mismatch");
  const auto homs = all_homs(a);
  const int C = static_cast<int>(b.coords().size());

  // per target coordinate, the chain homomorphisms that fit its grain
  std::vector<std::vector<int>> fits(C);
  for (int j = 0; j < C; ++j)
    for (size_t i = 0; i < homs.size(); ++i)
      if (b.coords()[j].grain % homs[i].image_grain(a.n()) == 0)
        fits[j].push_back(static_cast<int>(i));

  std::vector<AlgebraHom> out;
  std::vector<size_t> pick(C, 0);
  for (int j = 0; j < C; ++j)
    if (fits[j].empty()) return out;

  while (true) {
    AlgebraHom h;
    h.map.resize(a.size());
    bool total = true;
    for (int x = 0; x < a.size() && total; ++x) {
      std::vector<int> tuple(C);
      for (int j = 0; j < C; ++j) tuple[j] = homs[fits[j][pick[j]]].values[x];
      try {
        h.map[x] = b.index_of(tuple);
      } catch (const std::invalid_argument&) {
        total = false;
      }
    }
    if (total && is_mmv_hom(a, b, h)) out.push_back(std::move(h));

    int j = C - 1;
    for (; j >= 0; --j) {
      if (++pick[j] < fits[j].size()) break;
      pick[j] = 0;
    }
    if (j < 0) break;
  }
  return out;
}

LnFrameMap dual_morphism(const FiniteMMVAlgebra& a, const FiniteMMVAlgebra& b,
                         const AlgebraHom& h) {
  if (!is_mmv_hom(a, b, h))
    throw std::invalid_argument("map is not an MMV homomorphism");
  CanonicalData da = build_canonical(a, {});
  CanonicalData db = build_canonical(b, {});

  LnFrameMap out{db.frame, da.frame, {}};
  for (const auto& u : db.homs) {
    Homomorphism composed;
    composed.values.resize(a.size());
    for (int x = 0; x < a.size(); ++x) composed.values[x] = u.values[h.map[x]];
    int found = -1;
    for (size_t i = 0; i < da.homs.size(); ++i)
      if (da.homs[i].values == composed.values) {
        found = static_cast<int>(i);
        break;
      }
    if (found < 0) throw std::logic_error("dual image is not a canonical world");
    out.map.push_back(found);
  }
  return out;
}

FiniteMMVAlgebra product(const std::vector<FiniteMMVAlgebra>& factors) {
  if (factors.empty()) throw std::invalid_argument("product of no factors");
  const int n = factors.front().n();
  for (const auto& f : factors)
    if (f.n() != n) throw std::invalid_argument("grain mismatch in product");

  std::vector<Coordinate> coords;
  for (size_t i = 0; i < factors.size(); ++i)
    for (const auto& c : factors[i].coords())
      coords.push_back({std::to_string(i) + ":" + c.label, c.grain});

  // elements indexed by the mixed-radix tuple of factor element indices,
  // first factor most significant; the concatenated tuples come out sorted
  std::vector<uint64_t> stride(factors.size());
  uint64_t total = 1;
  for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
    stride[i] = total;
    total *= factors[i].size();
  }
  auto decompose = [&](uint64_t flat) {
    std::vector<int> idx(factors.size());
    for (size_t i = 0; i < factors.size(); ++i) {
      idx[i] = static_cast<int>(flat / stride[i]);
      flat %= stride[i];
    }
    return idx;
  };

  std::vector<std::vector<int>> carrier;
  carrier.reserve(total);
  for (uint64_t flat = 0; flat < total; ++flat) {
    std::vector<int> idx = decompose(flat);
    std::vector<int> tuple;
    for (size_t i = 0; i < factors.size(); ++i) {
      const auto& e = factors[i].element(idx[i]);
      tuple.insert(tuple.end(), e.begin(), e.end());
    }
    carrier.push_back(std::move(tuple));
  }

  std::map<std::string, ModalOp> ops;
  for (const auto& [name, op] : factors.front().ops()) {
    const int k = op.arity;
    for (const auto& f : factors) {
      auto it = f.ops().find(name);
      if (it == f.ops().end() || it->second.arity != k)
        throw std::invalid_argument("modal signature mismatch in product");
    }
    ModalOp pop;
    pop.arity = k;
    pop.table.resize(pow_u64(total, k));
    std::vector<int> args(k, 0);
    uint64_t flat = 0;
    do {
      std::vector<std::vector<int>> parts(k);
      for (int j = 0; j < k; ++j) parts[j] = decompose(args[j]);
      uint64_t result = 0;
      for (size_t i = 0; i < factors.size(); ++i) {
        std::vector<int> sub(k);
        for (int j = 0; j < k; ++j) sub[j] = parts[j][i];
        result += stride[i] * static_cast<uint64_t>(factors[i].apply(name, sub));
      }
      pop.table[flat++] = static_cast<int>(result);
    } while (bump_digits(args, static_cast<int>(total)));
    ops[name] = std::move(pop);
  }
  return FiniteMMVAlgebra(n, std::move(coords), std::move(carrier), std::move(ops));
}

std::optional<std::vector<int>> iso_check(const FiniteMMVAlgebra& a,
                                          const FiniteMMVAlgebra& b) {
  if (a.n() != b.n()) return std::nullopt;
  if (a.size() != b.size()) return std::nullopt;
  if (a.idempotents().size() != b.idempotents().size()) return std::nullopt;
  {
    std::map<std::string, int> sa, sb;
    for (const auto& [name, op] : a.ops()) sa[name] = op.arity;
    for (const auto& [name, op] : b.ops()) sb[name] = op.arity;
    if (sa != sb) return std::nullopt;
  }

  const auto ha = all_homs(a);
  const auto hb = all_homs(b);
  if (ha.size() != hb.size()) return std::nullopt;
  const int H = static_cast<int>(ha.size());

  std::vector<int> ga(H), gb(H);
  for (int i = 0; i < H; ++i) ga[i] = ha[i].image_grain(a.n());
  for (int i = 0; i < H; ++i) gb[i] = hb[i].image_grain(b.n());
  {
    auto sa = ga, sb = gb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  // value-vector lookup on the target side
  std::map<std::vector<int>, int> lookup;
  for (int y = 0; y < b.size(); ++y) {
    std::vector<int> key(H);
    for (int j = 0; j < H; ++j) key[j] = hb[j].values[y];
    if (!lookup.emplace(std::move(key), y).second)
      throw std::logic_error("homomorphisms fail to separate carrier points");
  }

  std::vector<int> sigma(H);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    bool grains_fit = true;
    for (int i = 0; i < H && grains_fit; ++i)
      if (ga[i] != gb[sigma[i]]) grains_fit = false;
    if (!grains_fit) continue;

    std::vector<int> inv(H);
    for (int i = 0; i < H; ++i) inv[sigma[i]] = i;

    std::vector<int> f(a.size(), -1);
    bool ok = true;
    for (int x = 0; x < a.size() && ok; ++x) {
      std::vector<int> key(H);
      for (int j = 0; j < H; ++j) key[j] = ha[inv[j]].values[x];
      auto it = lookup.find(key);
      if (it == lookup.end())
        ok = false;
      else
        f[x] = it->second;
    }
    if (!ok) continue;

    // matching hom values makes f an MV-embedding; only modal tables remain
    for (const auto& [name, op] : a.ops()) {
      std::vector<int> args(op.arity, 0);
      do {
        std::vector<int> mapped(op.arity);
        for (int j = 0; j < op.arity; ++j) mapped[j] = f[args[j]];
        if (f[a.apply(name, args)] != b.apply(name, mapped)) {
          ok = false;
          break;
        }
      } while (bump_digits(args, a.size()));
      if (!ok) break;
    }
    if (ok) return f;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return std::nullopt;
}

}  // namespace lmv
