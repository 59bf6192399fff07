#include <doctest.h>

#include "resolvex/error.hpp"
#include "support.hpp"

using namespace rxtest;

TEST_CASE("rational text form") {
  CHECK(to_string(parse_rational("2/4")) == "1/2");
  CHECK(to_string(parse_rational("3")) == "3/1");
  CHECK(to_string(parse_rational("-0")) == "0/1");
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
  CHECK(rationalize(0.3333333333, 100) == Rational(1, 3));
  CHECK(rationalize(0.6, 1000) == Rational(3, 5));
}

TEST_CASE("parse and serialize round trip") {
  for (auto name : {"fig1a", "fig1b", "ufa-dag", "fnfa4", "pump2", "infamb"}) {
    Nfa a = fixture(name);
    Nfa b = parse_nfa(serialize(a));
    CHECK(b.states() == a.states());
    CHECK(b.alphabet() == a.alphabet());
    CHECK(b.transitions() == a.transitions());
    CHECK(b.accepting() == a.accepting());
    CHECK(serialize(b) == serialize(a));
  }
}

TEST_CASE("parse errors carry a kind") {
  auto kind_of = [](const char* text) {
    try {
      parse_automaton(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Parameter;
  };
  CHECK(kind_of("nfa x\nalphabet a\nstate p init\ntrans p b p\nend\n") == ErrorKind::UnknownSymbol);
  CHECK(kind_of("nfa x\nalphabet a\nstate p init\ntrans p a r\nend\n") == ErrorKind::UnknownState);
  CHECK(kind_of("nfa x\nalphabet a\nstate p init\nstate p\nend\n") == ErrorKind::DuplicateState);
  CHECK(kind_of("nfa x\nalphabet a\nstate p init\n") == ErrorKind::Syntax);
  CHECK(kind_of("pfa x\nalphabet a\nstate p init accept\nstate q\ntrans p a p 1/2\ntrans p a q 1/3\nend\n") ==
        ErrorKind::NotStochastic);
}

TEST_CASE("pfa blocks keep weights") {
  auto pa = parse_automaton("pfa x\nalphabet a\nstate p init accept\nstate q\ntrans p a p 1/2\ntrans p a q 1/2\nend\n");
  REQUIRE(pa.is_pfa());
  CHECK(pa.pfa().is_simple());
  CHECK(eval_exact(pa.pfa(), {0, 0}) == Rational(1, 4));
}

TEST_CASE("acceptance and run counts agree with enumeration") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 60; ++it) {
    Nfa a = random_nfa(rng, 4, 2, 0.3);
    for (const auto& w : words_upto(2, 5)) {
      long long r = oracle_runs(a, w);
      REQUIRE(accepts(a, w) == (r > 0));
      REQUIRE(count_accepting_runs(a, w) == r);
      REQUIRE(static_cast<long long>(accepting_runs(a, w).size()) == r);
    }
  }
}

TEST_CASE("trim keeps the language and is trim") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 60; ++it) {
    Nfa a = random_nfa(rng, 5, 2, 0.2);
    Nfa t = trim(a);
    CHECK(is_trim(t));
    for (const auto& w : words_upto(2, 5)) REQUIRE(accepts(a, w) == accepts(t, w));
  }
}

TEST_CASE("word syntax") {
  Nfa a = fixture("fig1a");
  CHECK(format_word(a, parse_word(a, "ab")) == "ab");
  CHECK(parse_word(a, "eps").empty());
  CHECK(parse_word(a, format_word(a, {})).empty());
  CHECK_THROWS_AS(parse_word(a, "az"), Error);
}

TEST_CASE("language relations against enumeration") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 80; ++it) {
    Nfa a = random_nfa(rng, 3, 2, 0.35, 0.5);
    Nfa b = random_nfa(rng, 3, 2, 0.35, 0.5);
    auto ws = words_upto(2, 7);
    bool empty = true, universal = true, incl = true, eq = true;
    for (const auto& w : ws) {
      bool x = oracle_accepts(a, w), y = oracle_accepts(b, w);
      empty = empty && !x;
      universal = universal && x;
      incl = incl && (!y || x);
      eq = eq && x == y;
    }
    auto e = language_relation(a, nullptr, LanguageMode::Empty);
    auto u = language_relation(a, nullptr, LanguageMode::Universal);
    auto i = language_relation(a, &b, LanguageMode::Includes);
    auto q = language_relation(a, &b, LanguageMode::Equivalent);
    // Enumeration is bounded: a short difference refutes, a long one only shows up as a counterexample.
    if (e.holds) CHECK(empty);
    if (u.holds) CHECK(universal);
    if (i.holds) CHECK(incl);
    if (q.holds) CHECK(eq);
    if (!q.holds) CHECK(accepts(a, *q.counterexample) != accepts(b, *q.counterexample));
    if (!u.holds) CHECK(!accepts(a, *u.counterexample));
    if (!e.holds) CHECK(accepts(a, *e.counterexample));
    if (!i.holds) CHECK((accepts(b, *i.counterexample) && !accepts(a, *i.counterexample)));
  }
}

TEST_CASE("universality counterexample is shortest") {
  Nfa a = fixture("fig1b");
  auto u = language_relation(a, nullptr, LanguageMode::Universal);
  REQUIRE(!u.holds);
  CHECK(u.counterexample->empty());
}

TEST_CASE("dropping a choice changes the language") {
  Nfa a = fixture("fig1a");
  Nfa r = apply_support(a, parse_support(a, "-q0.a.q"));
  auto q = language_relation(r, &a, LanguageMode::Equivalent);
  REQUIRE(!q.holds);
  CHECK(format_word(a, *q.counterexample) == "ac");
}

TEST_CASE("supports preserve language and cover groups") {
  std::mt19937_64 rng(14);
  for (int it = 0; it < 40; ++it) {
    Nfa a = trim(random_nfa(rng, 4, 2, 0.3));
    auto sups = enumerate_supports(a);
    REQUIRE(!sups.empty());
    CHECK(sups.front() == full_support(a));
    for (const auto& s : sups) {
      CHECK(covers_all_groups(a, s));
      Nfa r = apply_support(a, s);
      for (const auto& w : words_upto(a.num_symbols(), 5)) REQUIRE(accepts(r, w) == accepts(a, w));
      CHECK(parse_support(a, format_support(a, s)) == s);
    }
  }
}

TEST_CASE("fnfa4 language-preserving supports") {
  Nfa a = fixture("fnfa4");
  auto sups = enumerate_supports(a);
  std::vector<std::string> names;
  for (const auto& s : sups) names.push_back(format_support(a, s));
  CHECK(names == std::vector<std::string>{"full", "-s.a.q2", "-q6.a.qf", "-s.a.q2,-q6.a.qf"});
}

TEST_CASE("ambiguity of fixtures") {
  auto k = [](const char* n) { return classify_ambiguity(trim(fixture(n))); };
  CHECK(k("fig1a").kind == AmbiguityClass::Unambiguous);
  CHECK(k("fig1b").kind == AmbiguityClass::Unambiguous);
  CHECK(k("ufa-dag").kind == AmbiguityClass::Unambiguous);
  auto f4 = k("fnfa4");
  CHECK(f4.kind == AmbiguityClass::Finite);
  CHECK(f4.degree == 4);
  CHECK(oracle_runs(fixture("fnfa4"), *f4.witness) == 4);
  auto p2 = k("pump2");
  CHECK(p2.kind == AmbiguityClass::Finite);
  CHECK(p2.degree == 2);
  CHECK(k("infamb").kind == AmbiguityClass::Infinite);
  CHECK_THROWS_AS(classify_ambiguity(trim(fixture("fnfa4")), 3), Error);
}

TEST_CASE("ambiguity degree matches bounded enumeration") {
  std::mt19937_64 rng(15);
  for (int it = 0; it < 60; ++it) {
    Nfa a = trim(random_nfa(rng, 4, 2, 0.25));
    if (a.num_transitions() == 0) continue;
    AmbiguityClass c;
    try {
      c = classify_ambiguity(a, 16);
    } catch (const Error&) {
      continue;
    }
    long long best = 0;
    for (const auto& w : words_upto(a.num_symbols(), 8)) best = std::max(best, oracle_runs(a, w));
    if (c.kind == AmbiguityClass::Infinite) {
      CHECK(is_infinitely_ambiguous(a));
    } else {
      CHECK(best <= c.degree);
      if (c.kind == AmbiguityClass::Finite) {
        REQUIRE(c.witness);
        CHECK(oracle_runs(a, *c.witness) == c.degree);
      }
      CHECK(is_unambiguous(a) == (c.degree <= 1));
    }
  }
}

TEST_CASE("infinite ambiguity grows") {
  Nfa a = fixture("infamb");
  CHECK(oracle_runs(a, Word(6, 0)) == 64);
  CHECK(word_with_runs(a, 5).has_value());
}
