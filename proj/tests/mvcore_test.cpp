#include "doctest.h"

#include <numeric>

#include "lmv/mvcore.hpp"

using namespace lmv;

namespace {

// independent oracle: the step function tau is promised to realize
int step_oracle(int a, int i, int n) { return a >= i ? n : 0; }

// independent oracle: membership in the m-subchain of the n-chain
int membership_oracle(int a, int m, int n) { return a % (n / m) == 0 ? n : 0; }

}  // namespace

TEST_CASE("chain connectives") {
  CHECK(neg(make_tv(0, 2)) == make_tv(2, 2));           // neg(0) = 1
  CHECK(neg(make_tv(1, 2)) == make_tv(1, 2));           // fixed point at 1/2
  CHECK(neg(make_tv(1, 3)) == make_tv(2, 3));           // neg(1/3) = 2/3
  CHECK(imp(make_tv(2, 2), make_tv(0, 2)) == make_tv(0, 2));
  CHECK(imp(make_tv(1, 2), make_tv(1, 2)) == make_tv(2, 2));
  CHECK(imp(make_tv(2, 3), make_tv(1, 3)) == make_tv(2, 3));
  CHECK(oplus(make_tv(1, 2), make_tv(1, 2)) == make_tv(2, 2));
  CHECK(odot(make_tv(1, 2), make_tv(1, 2)) == make_tv(0, 2));
  CHECK(meet(make_tv(1, 3), make_tv(2, 3)) == make_tv(1, 3));
}

TEST_CASE("mixed grains are rejected, embedding is explicit") {
  CHECK_THROWS_AS(imp(make_tv(1, 2), make_tv(1, 3)), std::invalid_argument);
  CHECK_THROWS_AS(oplus(make_tv(0, 2), make_tv(0, 4)), std::invalid_argument);
  CHECK(embed(make_tv(1, 2), 6) == make_tv(3, 6));
  CHECK_THROWS_AS(embed(make_tv(1, 2), 3), std::invalid_argument);
  CHECK_THROWS_AS(make_tv(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_tv(-1, 2), std::invalid_argument);
}

TEST_CASE("derived connectives agree with their abbreviations") {
  for (int n = 1; n <= 6; ++n)
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        const TruthValue x{a, n}, y{b, n};
        CHECK(oplus(x, y) == imp(neg(x), y));
        CHECK(odot(x, y) == neg(oplus(neg(x), neg(y))));
        CHECK(join(x, y) == oplus(odot(y, neg(x)), x));
        CHECK(meet(x, y) == odot(oplus(y, neg(x)), x));
      }
}

TEST_CASE("doubling is idempotent exactly at the endpoints") {
  for (int n = 1; n <= 6; ++n)
    for (int a = 0; a <= n; ++a) {
      const TruthValue x{a, n};
      CHECK((oplus(x, x) == x) == (a == 0 || a == n));
    }
}

TEST_CASE("tau terms realize the step functions") {
  // frozen profiles from the worked cases
  CHECK(term_profile(tau_term(2, 1), 2) == std::vector<int>{0, 2, 2});
  CHECK(term_profile(tau_term(2, 2), 2) == std::vector<int>{0, 0, 2});
  CHECK(term_profile(tau_term(1, 1), 1) == std::vector<int>{0, 1});
  CHECK(tau_term(1, 1).kind() == UnaryMVTerm::Kind::Var);
  CHECK(eval_unary_term(tau_term(3, 2), make_tv(1, 3)) == make_tv(0, 3));

  for (int n = 1; n <= 6; ++n)
    for (int i = 1; i <= n; ++i) {
      const UnaryMVTerm t = tau_term(n, i);
      CHECK(t.is_doubling_composition());
      for (int a = 0; a <= n; ++a)
        CHECK(t.eval(TruthValue{a, n}).num == step_oracle(a, i, n));
    }
  CHECK_THROWS_AS(tau_term(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(tau_term(2, 3), std::invalid_argument);
}

TEST_CASE("membership terms indicate the subchain") {
  CHECK(term_profile(membership_term(2, 1), 2) == std::vector<int>{2, 0, 2});
  CHECK(term_profile(membership_term(6, 3), 6) ==
        std::vector<int>{6, 0, 6, 0, 6, 0, 6});
  for (int a = 0; a <= 4; ++a)
    CHECK(membership_term(4, 4).eval(TruthValue{a, 4}).num == 4);

  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= n; ++m) {
      if (n % m != 0) {
        CHECK_THROWS_AS(membership_term(n, m), std::invalid_argument);
        continue;
      }
      const UnaryMVTerm t = membership_term(n, m);
      for (int a = 0; a <= n; ++a) {
        const int got = t.eval(TruthValue{a, n}).num;
        CHECK(got == membership_oracle(a, m, n));
        CHECK((got == 0 || got == n));  // always two-valued
      }
    }
}

TEST_CASE("term evaluation and serialization") {
  const UnaryMVTerm x = UnaryMVTerm::var();
  CHECK(eval_unary_term(UnaryMVTerm::oplus(x, x), make_tv(1, 2)) == make_tv(2, 2));
  CHECK(eval_unary_term(UnaryMVTerm::neg(x), make_tv(0, 1)) == make_tv(1, 1));
  CHECK(UnaryMVTerm::oplus(x, x).to_string() == "(x (+) x)");
  CHECK(UnaryMVTerm::neg(x).to_string() == "~x");
  CHECK(UnaryMVTerm::imp(UnaryMVTerm::zero(), UnaryMVTerm::one()).to_string() ==
        "(0 -> 1)");
  CHECK(UnaryMVTerm::meet(x, UnaryMVTerm::join(x, x)).to_string() ==
        "(x /\\ (x \\/ x))");
  CHECK(tau_term(2, 1).to_string() == "(x (+) x)");
  // a doubling stack must share both operands; a mere equal pair is not one
  CHECK_FALSE(UnaryMVTerm::oplus(x, UnaryMVTerm::neg(UnaryMVTerm::neg(x)))
                  .is_doubling_composition());
}
