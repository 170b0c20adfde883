#include "doctest.h"

#include <random>

#include "lmv/frames.hpp"

using namespace lmv;

namespace {

const Signature kBox = Signature::unary_box();

LFrame two_world_edge() {
  LFrame f;
  f.sig = kBox;
  f.worlds = {"u", "v"};
  f.relations["box"] = {{0, 1}};
  return f;
}

LFrame singleton(bool reflexive) {
  LFrame f;
  f.sig = kBox;
  f.worlds = {"w"};
  f.relations["box"] = {};
  if (reflexive) f.relations["box"].push_back({0, 0});
  return f;
}

// the two-world frame with an edge into a world of lower local grain
LnFrame sfg_frame(int n, int k) {
  return enrich_by_s(two_world_edge(), n, {n, k});
}

}  // namespace

TEST_CASE("enrichment validation") {
  CHECK(validate_ln(sfg_frame(2, 1)).ok);

  // r_n must cover every world
  LnFrame bad = sfg_frame(2, 1);
  bad.r[2] = {0};
  auto rep = validate_ln(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.clause == "r_n=W");

  // divisor keys must be exact
  LnFrame missing = sfg_frame(2, 1);
  missing.r.erase(1);
  CHECK(validate_ln(missing).clause == "divisor-keys");

  // gcd law
  LnFrame gcd_bad = enrich_by_s(singleton(false), 6, {6});
  gcd_bad.r[2] = {0};
  gcd_bad.r[3] = {0};
  rep = validate_ln(gcd_bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.clause == "r_m*r_q=r_gcd");

  // successors must stay inside each r_m: with n=4, a in r_2 but its
  // successor only in r_4
  LFrame base = two_world_edge();
  base.worlds = {"a", "b"};
  LnFrame succ_bad{base, 4, {{1, {}}, {2, {0}}, {4, {0, 1}}}};
  rep = validate_ln(succ_bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.clause == "Ru-in-r_m");
}

TEST_CASE("trivial enrichment and reduct") {
  std::mt19937_64 rng(3);
  LFrameEnumerator en(kBox, 3);
  int seen = 0;
  while (auto f = en.next()) {
    if (rng() % 8 == 0 && seen < 50) {
      ++seen;
      const LnFrame t = trivial_enrichment(*f, 2);
      CHECK(validate_ln(t).ok);
      CHECK(underlying(t) == *f);
    }
  }
  const LnFrame t = trivial_enrichment(singleton(false), 2);
  CHECK(t.r.at(1).empty());
  CHECK(t.r.at(2) == std::vector<int>{0});
}

TEST_CASE("local grain values") {
  LnFrame f = sfg_frame(2, 1);
  CHECK(s_value(f, 0) == 2);  // u only in r_n
  CHECK(s_value(f, 1) == 1);  // v in every r_l
  const LnFrame g = enrich_by_s(singleton(false), 6, {1});
  CHECK(s_value(g, 0) == 1);
  // gcd through the lattice of divisors: membership in r_2 and r_3 means r_1
  LnFrame h = enrich_by_s(singleton(false), 6, {1});
  CHECK(h.in_r(2, 0));
  CHECK(h.in_r(3, 0));
  CHECK(h.in_r(1, 0));
  CHECK_THROWS_AS(s_value(f, 7), std::invalid_argument);
}

TEST_CASE("disjoint unions") {
  const LFrame a = singleton(true), b = two_world_edge();
  const LFrame u = disjoint_union({a, b});
  CHECK(u.worlds.size() == 3);
  CHECK(u.relations.at("box").size() == 2);
  const LFrame one = disjoint_union({a});
  CHECK(frame_isomorphism(one, a).has_value());

  std::mt19937_64 rng(4);
  std::vector<LnFrame> pool = all_ln_frames(kBox, 2, 2);
  for (int i = 0; i < 25; ++i) {
    const LnFrame& x = pool[rng() % pool.size()];
    const LnFrame& y = pool[rng() % pool.size()];
    const LnFrame un = disjoint_union_ln({x, y});
    CHECK(validate_ln(un).ok);
    CHECK(un.base.worlds.size() ==
          x.base.worlds.size() + y.base.worlds.size());
  }

  LnFrame odd = pool.front();
  odd.n = 3;  // grain mismatch
  CHECK_THROWS_AS(disjoint_union_ln({pool.front(), odd}), std::invalid_argument);
}

TEST_CASE("generated subframes") {
  const LFrame f = two_world_edge();
  CHECK(generated_subframe(f, {0, 1}) == f);
  const LFrame sub = generated_subframe(f, {1});
  CHECK(sub.worlds == std::vector<std::string>{"v"});
  CHECK(sub.relations.at("box").empty());

  // the closure pulls successors in
  const LFrame whole = generated_subframe(f, {0});
  CHECK(whole.worlds.size() == 2);

  const LnFrame sfg = sfg_frame(2, 1);
  const LnFrame fv = generated_subframe_ln(sfg, {1});
  CHECK(validate_ln(fv).ok);
  CHECK(fv.base.worlds == std::vector<std::string>{"v"});
  CHECK(s_value(fv, 0) == 1);
  CHECK_THROWS_AS(generated_subframe(f, {}), std::invalid_argument);
}

TEST_CASE("generated subframes: idempotent, monotone, bounded inclusion") {
  LFrameEnumerator en(kBox, 3);
  while (auto f = en.next()) {
    const int W = static_cast<int>(f->worlds.size());
    for (uint64_t mask = 1; mask < (uint64_t{1} << W); ++mask) {
      std::set<int> seeds;
      for (int u = 0; u < W; ++u)
        if ((mask >> u) & 1) seeds.insert(u);
      const LFrame sub = generated_subframe(*f, seeds);

      std::set<int> again;
      for (int u = 0; u < static_cast<int>(sub.worlds.size()); ++u) again.insert(u);
      CHECK(generated_subframe(sub, again) == sub);

      CHECK(is_bounded_morphism(sub, *f, inclusion_map(sub, *f)));

      // monotone: a larger seed set yields a superset of worlds
      std::set<int> bigger = seeds;
      bigger.insert((*seeds.begin() + 1) % W);
      const LFrame sup = generated_subframe(*f, bigger);
      for (const auto& w : sub.worlds)
        CHECK(std::find(sup.worlds.begin(), sup.worlds.end(), w) != sup.worlds.end());
    }
  }
}

TEST_CASE("bounded morphisms") {
  const LFrame f = two_world_edge();
  CHECK(is_bounded_morphism(f, f, {0, 1}));  // identity

  // collapsing the edge onto an irreflexive point is not bounded
  const LFrame pt = singleton(false);
  CHECK_FALSE(is_bounded_morphism(f, pt, {0, 0}));
  // a two-cycle collapses onto a reflexive point
  LFrame cycle = f;
  cycle.relations["box"] = {{0, 1}, {1, 0}};
  CHECK(is_bounded_morphism(cycle, singleton(true), {0, 0}));
  CHECK_FALSE(is_bounded_morphism(f, singleton(true), {0, 0}));  // v is stuck

  // the one-world map of the worked counterexample: s in r_n only, t of
  // full membership, empty relations on both sides
  const LnFrame src = enrich_by_s(singleton(false), 2, {2});
  const LnFrame dst = enrich_by_s(singleton(false), 2, {1});
  CHECK(is_ln_bounded_morphism(src, dst, {0}));
  CHECK_FALSE(is_ln_bounded_morphism(dst, src, {0}));  // r_1 not preserved
}

TEST_CASE("bounded morphisms compose") {
  std::mt19937_64 rng(5);
  const std::vector<LnFrame> pool = all_ln_frames(kBox, 2, 2);
  int found = 0;
  for (int tries = 0; tries < 4000 && found < 30; ++tries) {
    const LnFrame& a = pool[rng() % pool.size()];
    const LnFrame& b = pool[rng() % pool.size()];
    const LnFrame& c = pool[rng() % pool.size()];
    std::vector<int> fab(a.base.worlds.size()), fbc(b.base.worlds.size());
    for (auto& v : fab) v = rng() % b.base.worlds.size();
    for (auto& v : fbc) v = rng() % c.base.worlds.size();
    if (!is_ln_bounded_morphism(a, b, fab)) continue;
    if (!is_ln_bounded_morphism(b, c, fbc)) continue;
    ++found;
    std::vector<int> comp(fab.size());
    for (size_t i = 0; i < fab.size(); ++i) comp[i] = fbc[fab[i]];
    CHECK(is_ln_bounded_morphism(a, c, comp));
  }
  CHECK(found == 30);
}

TEST_CASE("frame enumeration") {
  CHECK(all_lframes(kBox, 1).size() == 2);
  std::vector<LFrame> upto2 = all_lframes(kBox, 2);
  CHECK(upto2.size() == 2 + 16);

  // each exactly once
  for (size_t i = 0; i < upto2.size(); ++i)
    for (size_t j = i + 1; j < upto2.size(); ++j) CHECK(!(upto2[i] == upto2[j]));

  for (const auto& f : all_ln_frames(kBox, 2, 2)) CHECK(validate_ln(f).ok);

  // restartable
  LFrameEnumerator en(kBox, 1);
  en.next();
  en.reset();
  int count = 0;
  while (en.next()) ++count;
  CHECK(count == 2);

  // every valid enrichment appears exactly once: 1-world frames at n=2 give
  // irreflexive {s=1, s=2} plus reflexive {s=1, s=2}
  CHECK(all_ln_frames(kBox, 1, 2).size() == 4);
}

TEST_CASE("isomorphism search and dedup") {
  LFrame a = two_world_edge();
  LFrame b = a;
  b.worlds = {"x", "y"};
  CHECK(frame_isomorphism(a, b).has_value());
  LFrame c = a;
  c.relations["box"] = {{1, 0}};
  auto iso = frame_isomorphism(a, c);
  REQUIRE(iso.has_value());
  CHECK((*iso)[0] == 1);
  CHECK(ln_frame_isomorphism(sfg_frame(2, 1), sfg_frame(2, 1)).has_value());
  CHECK_FALSE(ln_frame_isomorphism(sfg_frame(2, 1), sfg_frame(2, 2)).has_value());

  // 16 labelled two-world frames collapse to 10 up to isomorphism
  std::vector<LFrame> two;
  for (const auto& f : all_lframes(kBox, 2))
    if (f.worlds.size() == 2) two.push_back(f);
  CHECK(dedup_isomorphic(two).size() == 10);
}
