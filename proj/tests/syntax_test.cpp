#include "doctest.h"

#include <random>

#include "lmv/syntax.hpp"

using namespace lmv;

namespace {

const Signature kBox = Signature::unary_box();

// seeded generator over the full grammar, sugar included
Formula random_formula(std::mt19937_64& rng, const Signature& sig,
                       const std::vector<std::string>& vars, int max_depth) {
  std::uniform_int_distribution<int> kind(0, max_depth == 0 ? 2 : 11);
  switch (kind(rng)) {
    case 0:
      return Formula::var(vars[rng() % vars.size()]);
    case 1:
      return Formula::zero();
    case 2:
      return Formula::one();
    case 3:
      return Formula::neg(random_formula(rng, sig, vars, max_depth - 1));
    case 4:
      return Formula::imp(random_formula(rng, sig, vars, max_depth - 1),
                          random_formula(rng, sig, vars, max_depth - 1));
    case 5: {
      const auto& [name, k] = *sig.modalities.begin();
      std::vector<Formula> args;
      for (int i = 0; i < k; ++i)
        args.push_back(random_formula(rng, sig, vars, max_depth - 1));
      return Formula::modal(name, std::move(args));
    }
    case 6:
      return Formula::oplus(random_formula(rng, sig, vars, max_depth - 1),
                            random_formula(rng, sig, vars, max_depth - 1));
    case 7:
      return Formula::odot(random_formula(rng, sig, vars, max_depth - 1),
                           random_formula(rng, sig, vars, max_depth - 1));
    case 8:
      return Formula::join(random_formula(rng, sig, vars, max_depth - 1),
                           random_formula(rng, sig, vars, max_depth - 1));
    case 9:
      return Formula::meet(random_formula(rng, sig, vars, max_depth - 1),
                           random_formula(rng, sig, vars, max_depth - 1));
    case 10:
      return Formula::ktimes(1 + static_cast<int>(rng() % 3),
                             random_formula(rng, sig, vars, max_depth - 1));
    default:
      return Formula::kpower(1 + static_cast<int>(rng() % 3),
                             random_formula(rng, sig, vars, max_depth - 1));
  }
}

}  // namespace

TEST_CASE("parsing the worked examples") {
  const Formula f = parse("box(p \\/ ~p)", kBox);
  CHECK(f == Formula::modal("box", {Formula::join(Formula::var("p"),
                                                  Formula::neg(Formula::var("p")))}));
  CHECK(parse("1", kBox) == Formula::one());
  CHECK(parse("p -> (q -> p)", kBox) ==
        Formula::imp(Formula::var("p"),
                     Formula::imp(Formula::var("q"), Formula::var("p"))));
  // implication is right-associative
  CHECK(parse("p -> q -> p", kBox) == parse("p -> (q -> p)", kBox));
}

TEST_CASE("precedence and unary binding") {
  CHECK(parse("p (.) q (+) r", kBox) ==
        Formula::oplus(Formula::odot(Formula::var("p"), Formula::var("q")),
                       Formula::var("r")));
  CHECK(parse("p (+) q /\\ r", kBox) ==
        Formula::meet(Formula::oplus(Formula::var("p"), Formula::var("q")),
                      Formula::var("r")));
  CHECK(parse("p /\\ q \\/ r", kBox) ==
        Formula::join(Formula::meet(Formula::var("p"), Formula::var("q")),
                      Formula::var("r")));
  CHECK(parse("~p^2", kBox) ==
        Formula::neg(Formula::kpower(2, Formula::var("p"))));
  CHECK(parse("(~p)^2", kBox) ==
        Formula::kpower(2, Formula::neg(Formula::var("p"))));
  CHECK(parse("2.p (+) q", kBox) ==
        Formula::oplus(Formula::ktimes(2, Formula::var("p")), Formula::var("q")));
  CHECK(parse("2.~p", kBox) == Formula::ktimes(2, Formula::neg(Formula::var("p"))));
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse("p ->", kBox), ParseError);
  CHECK_THROWS_AS(parse("box(p", kBox), ParseError);
  CHECK_THROWS_AS(parse("box(p, q)", kBox), ParseError);  // arity mismatch
  CHECK_THROWS_AS(parse("box p", kBox), ParseError);
  CHECK_THROWS_AS(parse("2", kBox), ParseError);
  CHECK_THROWS_AS(parse("p $ q", kBox), ParseError);
  try {
    parse("p -> $", kBox);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position == 5);
  }
}

TEST_CASE("printing round-trips") {
  CHECK(print(parse("p (+) q", kBox)) == "p (+) q");
  CHECK(print(parse("box(p \\/ ~p)", kBox)) == "box(p \\/ ~p)");
  CHECK(print(parse("(p -> q) -> r", kBox)) == "(p -> q) -> r");
  CHECK(print(parse("p -> q -> r", kBox)) == "p -> q -> r");

  std::mt19937_64 rng(0);
  const std::vector<std::string> vars = {"p", "q"};
  for (int i = 0; i < 200; ++i) {
    const Formula f = random_formula(rng, kBox, vars, 5);
    CHECK(parse(print(f), kBox) == f);
  }
}

TEST_CASE("variables and subformulas") {
  const Formula f = parse("box(p -> q)", kBox);
  CHECK(variables(f) == std::vector<std::string>{"p", "q"});
  CHECK(variables(Formula::one()).empty());
  CHECK(subformulas(f).size() == 4);  // box(p->q), p->q, p, q
  CHECK(depth(f) == 2);
  CHECK(depth(Formula::var("p")) == 0);
}

TEST_CASE("desugaring reaches the core grammar") {
  std::mt19937_64 rng(1);
  const std::vector<std::string> vars = {"p", "q"};
  for (int i = 0; i < 100; ++i) {
    const Formula f = random_formula(rng, kBox, vars, 4);
    const Formula core = desugar(f);
    for (const Formula& g : subformulas(core)) {
      const auto k = g.kind();
      CHECK((k == Formula::Kind::Var || k == Formula::Kind::One ||
             k == Formula::Kind::Neg || k == Formula::Kind::Imp ||
             k == Formula::Kind::Modal));
    }
  }
  CHECK(desugar(Formula::ktimes(0, Formula::var("p"))) ==
        Formula::neg(Formula::one()));
  CHECK(desugar(Formula::kpower(0, Formula::var("p"))) == Formula::one());
}

TEST_CASE("variable-power translation") {
  CHECK(tr_n(Formula::var("p"), 2) == Formula::kpower(2, Formula::var("p")));
  CHECK(tr_n(Formula::one(), 5) == Formula::one());
  const Formula f = parse("box(p -> q)", kBox);
  CHECK(tr_n(f, 3) == parse("box(p^3 -> q^3)", kBox));
  CHECK_THROWS_AS(tr_n(f, 0), std::invalid_argument);
}

TEST_CASE("power fragment membership") {
  CHECK(is_pform(parse("p (.) p", kBox), 2));
  CHECK_FALSE(is_pform(parse("p", kBox), 2));
  CHECK(is_pform(parse("p", kBox), 1));
  for (int m = 1; m <= 4; ++m) CHECK(is_pform(Formula::zero(), m));
  CHECK(is_pform(Formula::one(), 3));
  // association of the power does not matter
  CHECK(is_pform(parse("p (.) (p (.) p)", kBox), 3));
  CHECK(is_pform(parse("(p (.) p) (.) p", kBox), 3));
  CHECK_FALSE(is_pform(parse("p (.) q", kBox), 2));
  CHECK_FALSE(is_pform(parse("p (.) p (.) p", kBox), 2));

  std::mt19937_64 rng(2);
  const std::vector<std::string> vars = {"p", "q"};
  for (int m : {1, 2, 3})
    for (int i = 0; i < 60; ++i) {
      const Formula f = random_formula(rng, kBox, vars, 3);
      CHECK(is_pform(tr_n(f, m), m));
    }
}

TEST_CASE("signatures validate") {
  Signature zero_arity;
  zero_arity.modalities["box"] = 0;
  CHECK_THROWS_AS(zero_arity.validate(), std::invalid_argument);
  Signature unnamed;
  unnamed.modalities[""] = 1;
  CHECK_THROWS_AS(unnamed.validate(), std::invalid_argument);
  Signature odd_name;
  odd_name.modalities["2bad"] = 1;
  CHECK_THROWS_AS(odd_name.validate(), std::invalid_argument);
  const Signature nabla{{{"nabla", 2}}};
  CHECK(parse("nabla(p, q)", nabla) ==
        Formula::modal("nabla", {Formula::var("p"), Formula::var("q")}));
  CHECK(print(parse("nabla(p, q)", nabla)) == "nabla(p, q)");
}
