#include <doctest.h>

#include "hors/error.hpp"
#include "hors/syntax.hpp"
#include "hors/term.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace hors;
using namespace hors::testing;

namespace {

const Context kYZ({"y", "z"});

Term parse(const std::string& text, const Context& ctx = kYZ) { return parse_term(text, test_signature(), ctx); }

}  // namespace

TEST_CASE("parse_term builds nameless terms") {
  Context y({"y"});
  Term t = parse_term("\\f. f @ (y @ f)", {}, y);
  Term expected = Term::abs(Term::app(Term::bound_var(0), Term::app(Term::free_var("y"), Term::bound_var(0))));
  CHECK(t == expected);
  CHECK(t.hint() == "f");

  CHECK(parse_term("\\x.\\y. x", {}, {}) == Term::abs(Term::abs(Term::bound_var(1))));
  CHECK(parse_term("\\x y. x", {}, {}) == Term::abs(Term::abs(Term::bound_var(1))));
}

TEST_CASE("parse_term reports resolution and syntax errors") {
  CHECK_THROWS_WITH_AS(parse_term("s(x, \\z. z)", {}, Context({"x"})), doctest::Contains("unknown identifier"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse("s(y)"), doctest::Contains("arity"), ParseError);
  CHECK_THROWS_AS(parse("\\x. "), ParseError);
  CHECK_THROWS_AS(parse("(y @ z"), ParseError);
  CHECK_THROWS_WITH_AS(parse("y @\n  q"), doctest::Contains("2:3"), ParseError);
  CHECK_THROWS_AS(parse("y(z)"), ParseError);
}

TEST_CASE("identifier resolution prefers binders, then context, then symbols") {
  Signature sig;
  sig.add("y", 0);
  CHECK_THROWS_AS(Context({"y", "y"}), InvariantError);
  Term bound = parse_term("\\y. y", sig, Context({"z"}));
  CHECK(bound == Term::abs(Term::bound_var(0)));
  Term sym = parse_term("y", sig, Context({"z"}));
  CHECK(sym == Term::op("y", {}));
  Term var = parse_term("z", sig, Context({"z"}));
  CHECK(var == Term::free_var("z"));
}

TEST_CASE("print_term uses fresh names and hints") {
  CHECK(print_term(Term::abs(Term::bound_var(0)), {}) == "\\x0. x0");
  CHECK(print_term(Term::abs(Term::app(Term::bound_var(0), Term::free_var("y"))), Context({"y"})) == "\\x0. x0 @ y");
  // x0 is taken by the context.
  CHECK(print_term(Term::abs(Term::bound_var(0)), Context({"x0"})) == "\\x1. x1");
  CHECK(print_term(parse("\\f. f @ (y @ f)"), kYZ) == "\\f. f @ (y @ f)");
  CHECK(print_term(parse("s(o(y), c)"), kYZ, test_signature()) == "s(o(y), c)");
  CHECK(print_term(Term::bottom(), {}) == "_|_");
  // A hint that would capture is replaced.
  CHECK(print_term(parse("\\y. y @ z"), Context({"y", "z"})) == "\\x0. x0 @ z");
  CHECK(print_term(parse("\\x. \\x. x @ (\\q. x)"), kYZ) != "");
}

TEST_CASE("print then parse is the identity up to alpha") {
  Rng rng(11);
  Signature sig = test_signature();
  for (int i = 0; i < 200; ++i) {
    Term t = random_term(rng, sig, kYZ, 30, 0, i % 4 == 0);
    std::string text = print_term(t, kYZ, sig);
    Term back = parse_term(text, sig, kYZ);
    INFO(text);
    CHECK(alpha_eq_finite(t, kYZ, back, kYZ));
  }
}

TEST_CASE("alpha_eq_finite agrees with a named alpha checker") {
  Rng rng(12);
  Signature sig = test_signature();
  std::vector<std::string> ctx = {"y", "z"};
  int agreed = 0;
  int equal = 0;
  for (int i = 0; i < 200; ++i) {
    NamedTerm a = random_named(rng, sig, ctx, 14);
    NamedTerm b = (i % 2 == 0) ? random_alpha_variant(rng, a) : random_named(rng, sig, ctx, 14);
    if (i % 6 == 1) b = a;  // includes shadowed binders verbatim
    bool expected = named_alpha_equal(a, b);
    bool got = alpha_eq_finite(parse(to_text(a)), kYZ, parse(to_text(b)), kYZ);
    INFO(to_text(a), " vs ", to_text(b));
    CHECK(got == expected);
    agreed += got == expected;
    equal += expected;
  }
  CHECK(agreed == 200);
  CHECK(equal >= 100);
  CHECK(parse("\\x. x") == parse("\\z. z"));
  CHECK_FALSE(parse("\\x.\\y. x") == parse("\\x.\\y. y"));
  CHECK_THROWS_AS(alpha_eq_finite(parse("y"), kYZ, parse("y"), Context({"y"})), InvariantError);
}

TEST_CASE("alpha equality is an equivalence and a congruence") {
  Rng rng(13);
  Signature sig = test_signature();
  for (int i = 0; i < 100; ++i) {
    Term t = random_term(rng, sig, kYZ, 12);
    Term u = parse(print_term(t, kYZ, sig));
    Term v = parse(print_term(u, kYZ, sig));
    CHECK(t == t);
    CHECK((t == u) == (u == t));
    CHECK(((t == u) && (u == v)) <= (t == v));
    CHECK(Term::abs(t, "p") == Term::abs(u, "q"));
    CHECK(Term::app(t, u) == Term::app(u, v));
    CHECK(Term::op("s", {t, v}) == Term::op("s", {u, t}));
  }
}

TEST_CASE("rename relabels free variables only") {
  Context y({"y"});
  Context xy({"x", "y"});
  Term t = parse_term("\\x. x @ y", {}, y);
  Term r = rename(t, y, {{"y", "x"}}, xy);
  CHECK(r == Term::abs(Term::app(Term::bound_var(0), Term::free_var("x"))));
  CHECK_THROWS_AS(rename(t, y, {}, xy), InvariantError);
  CHECK_THROWS_AS(rename(t, y, {{"y", "w"}}, xy), InvariantError);
}

TEST_CASE("rename satisfies the functor laws") {
  Rng rng(14);
  Signature sig = test_signature();
  Context a({"y", "z"});
  Context b({"u", "v", "w"});
  Context c({"p", "q"});
  for (int i = 0; i < 200; ++i) {
    Term t = random_term(rng, sig, a, 30);
    Renaming id{{"y", "y"}, {"z", "z"}};
    CHECK(rename(t, a, id, a) == t);
    Renaming g1 = random_renaming(rng, a, b);
    Renaming g2 = random_renaming(rng, b, c);
    Renaming composed;
    for (const auto& [x, v] : g1) composed[x] = g2.at(v);
    CHECK(rename(t, a, composed, c) == rename(rename(t, a, g1, b), b, g2, c));
  }
}

TEST_CASE("substitute follows the worked composite example") {
  Signature sig;
  sig.add("star", 2);
  sig.add("o", 1);
  Term t = Term::abs(Term::op("star", {Term::bound_var(0), Term::op("star", {Term::free_var("y"), Term::free_var("z")})}),
                     "x");
  Context yz({"y", "z"});
  Context zp({"z'"});
  Substitution sigma{
      {"y", Term::app(Term::abs(Term::op("o", {Term::bound_var(0)}), "x"), Term::free_var("z'"))},
      {"z", Term::app(Term::free_var("z'"), Term::op("o", {Term::op("o", {Term::free_var("z'")})}))},
  };
  Term got = substitute(t, yz, sigma);
  Term expected = Term::abs(
      Term::op("star", {Term::bound_var(0), Term::op("star", {sigma.at("y"), sigma.at("z")})}));
  CHECK(got == expected);
  check_term(got, sig, zp);
  CHECK_THROWS_AS(substitute(t, yz, {{"y", Term::free_var("z'")}}), InvariantError);
}

TEST_CASE("substitute satisfies the monoid laws") {
  Rng rng(15);
  Signature sig = test_signature();
  Context a({"y", "z"});
  Context b({"u", "v"});
  Context c({"w"});
  for (int i = 0; i < 200; ++i) {
    Term t = random_term(rng, sig, a, 30);
    Substitution unit{{"y", Term::free_var("y")}, {"z", Term::free_var("z")}};
    CHECK(substitute(t, a, unit) == t);
    Substitution s1 = random_substitution(rng, sig, a, b, 8);
    Substitution s2 = random_substitution(rng, sig, b, c, 8);
    // Right unit: substituting into a variable.
    CHECK(substitute(Term::free_var("y"), a, s1) == s1.at("y"));
    Substitution composed;
    for (const auto& [x, u] : s1) composed[x] = substitute(u, b, s2);
    CHECK(substitute(substitute(t, a, s1), b, s2) == substitute(t, a, composed));
    // Naturality in the codomain.
    Renaming g = random_renaming(rng, b, c);
    Substitution renamed;
    for (const auto& [x, u] : s1) renamed[x] = rename(u, b, g, c);
    CHECK(rename(substitute(t, a, s1), b, g, c) == substitute(t, a, renamed));
    // Free variables of the result come from the substituted terms.
    std::set<std::string> allowed;
    for (const auto& x : free_vars(t)) {
      auto fv = free_vars(s1.at(x));
      allowed.insert(fv.begin(), fv.end());
    }
    for (const auto& x : free_vars(substitute(t, a, s1))) CHECK(allowed.count(x) == 1);
  }
}

TEST_CASE("cut") {
  Context y({"y"});
  Term t = parse_term("\\x. x @ y", {}, y);
  CHECK(cut(t, 0) == Term::bottom());
  CHECK(cut(t, 1) == Term::abs(Term::bottom()));
  CHECK(cut(t, 3) == t);
  Rng rng(16);
  Signature sig = test_signature();
  for (int i = 0; i < 200; ++i) {
    Term u = random_term(rng, sig, kYZ, 30);
    std::size_t k = rng() % 10;
    CHECK(depth(cut(u, k)) <= k);
    CHECK(cut(cut(u, k + 1), k) == cut(u, k));
    CHECK(cut(u, depth(u) + 1) == u);
  }
}

TEST_CASE("equal cuts up to depth+1 imply alpha equality") {
  Rng rng(17);
  Signature sig = test_signature();
  for (int i = 0; i < 200; ++i) {
    Term t = random_term(rng, sig, kYZ, 10);
    Term u = (i % 2) ? random_term(rng, sig, kYZ, 10) : parse(print_term(t, kYZ, sig));
    bool all_cuts = true;
    for (std::size_t k = 0; k <= depth(t) + 1; ++k) all_cuts = all_cuts && cut(t, k) == cut(u, k);
    if (all_cuts) CHECK(alpha_eq_finite(t, kYZ, u, kYZ));
  }
}

TEST_CASE("free_vars") {
  CHECK(free_vars(parse("\\x. x")).empty());
  Context yy({"y", "y'"});
  CHECK(free_vars(parse_term("\\x. y @ x", {}, yy)) == std::set<std::string>{"y"});
}
