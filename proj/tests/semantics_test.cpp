#include "doctest.h"

#include <random>

#include "lmv/semantics.hpp"
#include "support.hpp"

using namespace lmv;
using lmvtest::random_core_formula;
using lmvtest::random_model;

namespace {

const Signature kBox = Signature::unary_box();

Model loop_model_half() {
  // single reflexive world, n = 2, p at 1/2
  LFrame f;
  f.sig = kBox;
  f.worlds = {"w"};
  f.relations["box"] = {{0, 0}};
  return Model{f, 2, {"p"}, {1}};
}

}  // namespace

TEST_CASE("evaluation clauses") {
  // a world with no successors makes box(0) perfectly true
  LFrame bare;
  bare.sig = kBox;
  bare.worlds = {"w"};
  bare.relations["box"] = {};
  const Model m{bare, 2, {}, {}};
  CHECK(eval(m, 0, parse("box(0)", kBox)) == 2);
  CHECK(eval(m, 0, Formula::one()) == 2);

  const Model half = loop_model_half();
  CHECK(eval(half, 0, parse("box(p \\/ ~p)", kBox)) == 1);
  CHECK(eval_tv(half, "w", parse("p", kBox)) == make_tv(1, 2));

  CHECK_THROWS_AS(eval(half, 0, parse("q", kBox)), std::invalid_argument);
  CHECK_THROWS_AS(eval(half, 5, parse("p", kBox)), std::invalid_argument);
}

TEST_CASE("truth in a model") {
  const Model half = loop_model_half();
  CHECK(is_true(half, parse("p -> p", kBox)));
  CHECK_FALSE(is_true(half, parse("box(p \\/ ~p)", kBox)));
  Model all_one = half;
  all_one.table = {2};
  CHECK(is_true(all_one, parse("p", kBox)));
}

TEST_CASE("desugaring preserves the semantics") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    const LFrame f = lmvtest::random_lframe(rng, kBox, 2);
    const Model m = random_model(rng, f, 2, {"p", "q"});
    Formula phi = random_core_formula(rng, kBox, {"p", "q"}, 3);
    phi = Formula::oplus(phi, Formula::odot(Formula::var("p"), phi));
    for (size_t u = 0; u < f.worlds.size(); ++u)
      CHECK(eval(m, static_cast<int>(u), phi) ==
            eval(m, static_cast<int>(u), desugar(phi)));
  }
}

TEST_CASE("model streams honour local grains") {
  // one world of full grain: n+1 models per variable
  const LFrame pt = []() {
    LFrame f;
    f.sig = Signature::unary_box();
    f.worlds = {"w"};
    f.relations["box"] = {};
    return f;
  }();
  CHECK(ModelStream(trivial_enrichment(pt, 3), {"p"}).count() == 4);
  // a Boolean world admits only the endpoints
  CHECK(ModelStream(enrich_by_s(pt, 2, {1}), {"p"}).count() == 2);
  CHECK(ModelStream(trivial_enrichment(pt, 2), {}).count() == 1);

  const auto models = models_based_on(enrich_by_s(pt, 2, {1}), {"p"});
  REQUIRE(models.size() == 2);
  CHECK(models[0].table == std::vector<int>{0});
  CHECK(models[1].table == std::vector<int>{2});
}

TEST_CASE("validity over all valuations") {
  LFrame loop;
  loop.sig = kBox;
  loop.worlds = {"w"};
  loop.relations["box"] = {{0, 0}};

  CHECK(valid_n(loop, 2, Formula::one()).valid);

  const Formula phi = parse("box(p \\/ ~p)", kBox);
  const Verdict v = valid_n(loop, 2, phi);
  REQUIRE_FALSE(v.valid);
  REQUIRE(v.witness.has_value());
  // first countermodel in enumeration order: p at 1/2
  CHECK(v.witness->model.table == std::vector<int>{1});
  CHECK(v.witness->world == 0);

  LFrame bare = loop;
  bare.relations["box"] = {};
  CHECK(valid_n(bare, 2, phi).valid);
  CHECK(valid_n(bare, 1, phi).valid);
  CHECK(valid_n(loop, 1, phi).valid);
}

TEST_CASE("validity over admitted valuations") {
  const Formula phi = parse("box(p \\/ ~p)", kBox);

  // every successor Boolean: valid
  LFrame edge;
  edge.sig = kBox;
  edge.worlds = {"u", "v"};
  edge.relations["box"] = {{0, 1}};
  const LnFrame sfg = enrich_by_s(edge, 2, {2, 1});
  CHECK(valid(sfg, phi).valid);

  // trivial enrichment agrees with the plain relation
  std::mt19937_64 rng(12);
  for (int i = 0; i < 40; ++i) {
    const LFrame f = lmvtest::random_lframe(rng, kBox, 2);
    const Formula psi = random_core_formula(rng, kBox, {"p"}, 2);
    CHECK(valid_n(f, 2, psi).valid == valid(trivial_enrichment(f, 2), psi).valid);
  }
}

TEST_CASE("validity on plain frames implies validity on every enrichment") {
  LFrameEnumerator en(kBox, 2);
  const auto formulas = [] {
    std::vector<Formula> out;
    const Signature sig = Signature::unary_box();
    out.push_back(parse("box(p \\/ ~p)", sig));
    out.push_back(parse("box(p) -> p", sig));
    out.push_back(parse("p -> p", sig));
    out.push_back(parse("box(0)", sig));
    return out;
  }();
  while (auto f = en.next()) {
    LnFrameEnumerator lnen(kBox, 2, 2);
    while (auto g = lnen.next()) {
      if (!(underlying(*g) == *f)) continue;
      for (const auto& phi : formulas)
        if (valid_n(*f, 2, phi).valid) CHECK(valid(*g, phi).valid);
    }
  }
}

TEST_CASE("grain embedding leaves evaluation unchanged") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 40; ++i) {
    const LFrame f = lmvtest::random_lframe(rng, kBox, 2);
    Model m = random_model(rng, f, 2, {"p"});
    Model embedded = m;
    embedded.n = 6;
    for (auto& v : embedded.table) v *= 3;  // scale numerators from 2 to 6
    const Formula phi = random_core_formula(rng, kBox, {"p"}, 3);
    for (size_t u = 0; u < f.worlds.size(); ++u)
      CHECK(eval(m, static_cast<int>(u), phi) * 3 ==
            eval(embedded, static_cast<int>(u), phi));
  }
}

TEST_CASE("budget and parallel search agree with the serial path") {
  LFrame edge;
  edge.sig = kBox;
  edge.worlds = {"u", "v"};
  edge.relations["box"] = {{0, 1}};

  CHECK_THROWS_AS(valid_n(edge, 6, parse("p -> q", kBox), Budget{10}),
                  BudgetError);

  std::mt19937_64 rng(14);
  for (int i = 0; i < 10; ++i) {
    const LFrame f = lmvtest::random_lframe(rng, kBox, 2);
    const Formula phi = random_core_formula(rng, kBox, {"p", "q"}, 3);
    const Verdict serial = valid_n(f, 3, phi);
    const Verdict par = valid_n(f, 3, phi, {}, 4);
    CHECK(serial.valid == par.valid);
    if (!serial.valid)
      CHECK(serial.witness->model.table == par.witness->model.table);
  }
}
