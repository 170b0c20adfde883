#pragma once

// Seeded generators shared by the test suites.

#include <random>
#include <vector>

#include "lmv/frames.hpp"
#include "lmv/semantics.hpp"
#include "lmv/syntax.hpp"

namespace lmvtest {

using namespace lmv;

inline Formula random_core_formula(std::mt19937_64& rng, const Signature& sig,
                                   const std::vector<std::string>& vars,
                                   int max_depth) {
  std::uniform_int_distribution<int> kind(0, max_depth == 0 ? 2 : 5);
  switch (kind(rng)) {
    case 0:
      return Formula::var(vars[rng() % vars.size()]);
    case 1:
      return Formula::zero();
    case 2:
      return Formula::one();
    case 3:
      return Formula::neg(random_core_formula(rng, sig, vars, max_depth - 1));
    case 4:
      return Formula::imp(random_core_formula(rng, sig, vars, max_depth - 1),
                          random_core_formula(rng, sig, vars, max_depth - 1));
    default: {
      auto it = sig.modalities.begin();
      std::advance(it, rng() % sig.modalities.size());
      std::vector<Formula> args;
      for (int i = 0; i < it->second; ++i)
        args.push_back(random_core_formula(rng, sig, vars, max_depth - 1));
      return Formula::modal(it->first, std::move(args));
    }
  }
}

inline LFrame random_lframe(std::mt19937_64& rng, const Signature& sig,
                            int max_worlds) {
  LFrame f;
  f.sig = sig;
  const int W = 1 + static_cast<int>(rng() % max_worlds);
  for (int i = 0; i < W; ++i) f.worlds.push_back("w" + std::to_string(i));
  for (const auto& [name, k] : sig.modalities) {
    auto& tuples = f.relations[name];
    std::vector<int> t(k + 1, 0);
    while (true) {
      if (rng() % 2) tuples.push_back(t);
      int i = k;
      for (; i >= 0; --i) {
        if (++t[i] < W) break;
        t[i] = 0;
      }
      if (i < 0) break;
    }
  }
  return f;
}

/// Random valid enrichment: local grains drawn per world, then repaired
/// downstream along the relations so successors divide their sources.
inline LnFrame random_ln_frame(std::mt19937_64& rng, const Signature& sig,
                               int max_worlds, int n) {
  const LFrame base = random_lframe(rng, sig, max_worlds);
  const std::vector<int> divs = divisors_of(n);
  std::vector<int> s(base.worlds.size());
  for (auto& v : s) v = divs[rng() % divs.size()];
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, tuples] : base.relations)
      for (const auto& t : tuples)
        for (size_t j = 1; j < t.size(); ++j)
          if (s[t[0]] % s[t[j]] != 0) {
            s[t[j]] = std::gcd(s[t[j]], s[t[0]]);
            changed = true;
          }
  }
  return enrich_by_s(base, n, s);
}

inline Model random_model(std::mt19937_64& rng, const LFrame& frame, int n,
                          const std::vector<std::string>& vars) {
  Model m{frame, n, vars, {}};
  m.table.resize(frame.worlds.size() * vars.size());
  for (auto& v : m.table) v = static_cast<int>(rng() % (n + 1));
  return m;
}

}  // namespace lmvtest
