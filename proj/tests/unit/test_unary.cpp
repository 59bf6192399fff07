#include <doctest.h>

#include "resolvex/error.hpp"
#include "resolvex/fnfa.hpp"
#include "resolvex/gens.hpp"
#include "resolvex/unary.hpp"
#include "support.hpp"

using namespace rxtest;

TEST_CASE("graph period") {
  CHECK(graph_period({{1}, {2}, {0}}) == 3);
  CHECK(graph_period({{1}, {0, 2}, {3}, {4}, {2}}) == 6);
  CHECK(graph_period({{0}}) == 1);
  CHECK(graph_period({{1}, {}}) == 1);
  CHECK_THROWS_AS(graph_period({{1}, {2}, {3}, {4}, {0}}, 4), Error);
}

TEST_CASE("rotation chain alternates") {
  auto c = parse_chain("matrix 2\n0 1\n1 0\n");
  auto r = markov_limits(c);
  CHECK(r.period == 2);
  CHECK(r.limits[0] == std::vector<Rational>{1, 0});
  CHECK(r.limits[1] == std::vector<Rational>{0, 1});
}

TEST_CASE("absorbing chain") {
  auto c = parse_chain("matrix 2\n1/2 1/2\n0 1\n");
  auto r = markov_limits(c);
  CHECK(r.period == 1);
  CHECK(r.limits[0] == std::vector<Rational>{0, 1});
  CHECK(r.transient == std::vector<int>{0});
}

TEST_CASE("chain parsing errors") {
  CHECK_THROWS_AS(parse_chain("matrix 2\n1/2 1/3\n0 1\n"), Error);
  CHECK_THROWS_AS(parse_chain("matrix 2\n1 0\n"), Error);
}

TEST_CASE("chain from a single-letter pfa") {
  auto pa = parse_automaton("pfa u\nalphabet a\nstate p init accept\nstate q\ntrans p a p 1/2\ntrans p a q 1/2\nend\n");
  auto c = chain_from_pfa(pa.pfa());
  CHECK(c.p.size() == 3);  // q has no outgoing mass, so a sink is added
  auto r = markov_limits(c);
  CHECK(r.limits[0].back() == 1);
}

TEST_CASE("exact limits match power iteration on random chains") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 40; ++it) {
    int d = std::uniform_int_distribution<int>(1, 5)(rng);
    MarkovChain c;
    c.p.assign(d, std::vector<Rational>(d, 0));
    std::bernoulli_distribution e(0.4);
    for (int i = 0; i < d; ++i) {
      std::vector<int> cols;
      for (int j = 0; j < d; ++j)
        if (e(rng)) cols.push_back(j);
      if (cols.empty()) cols.push_back(std::uniform_int_distribution<int>(0, d - 1)(rng));
      for (int j : cols) c.p[i][j] = Rational(1, static_cast<long long>(cols.size()));
    }
    c.init.assign(d, 0);
    c.init[0] = 1;
    for (int i = 0; i < d; ++i) c.names.push_back("m" + std::to_string(i));
    auto r = markov_limits(c);
    std::vector<std::vector<double>> pd(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) pd[i][j] = to_double(c.p[i][j]);
    std::vector<double> v0(d, 0.0);
    v0[0] = 1;
    auto g = limit_support_by_graph(c, r.period);
    for (long long k = 0; k < r.period; ++k) {
      auto v = power_row(pd, v0, k + 400 * r.period);
      for (int q = 0; q < d; ++q) {
        CHECK(std::abs(v[q] - to_double(r.limits[k][q])) < 1e-9);
        CHECK(g[k][q] == (r.limits[k][q] != 0));
      }
    }
  }
}

TEST_CASE("unary hardness instances") {
  auto uni = gen_unary_hardness(parse_cycles("2:*;3:*"));
  CHECK(classify_ambiguity(uni).degree == 3);
  auto ru = unary_check_pr(uni);
  CHECK(ru.resolvable);
  CHECK(fnfa_check_pr(uni).resolvable == Verdict::Yes);

  auto non = gen_unary_hardness(parse_cycles("2:0"));
  auto rn = unary_check_pr(non);
  CHECK(!rn.resolvable);
  REQUIRE(!rn.supports.empty());
  CHECK(rn.supports[0].failing_residues == std::vector<long long>{1});
  CHECK(fnfa_check_pr(non).resolvable == Verdict::No);
  CHECK_THROWS_AS(parse_cycles("x:1"), Error);
  CHECK_THROWS_AS(gen_unary_hardness(parse_cycles("2:5")), Error);
}

TEST_CASE("accepted length profile") {
  auto a = gen_unary_hardness(parse_cycles("2:0"));
  auto p = accepted_length_profile(a, full_support(a));
  CHECK(p.period % 2 == 0);
  for (long long k = 0; k < p.period; ++k) CHECK(p.infinite[k]);
}

TEST_CASE("unary verdicts agree with the general path") {
  std::mt19937_64 rng(42);
  int n = 0;
  for (int it = 0; it < 200 && n < 30; ++it) {
    Nfa a = trim(random_nfa(rng, 4, 1, 0.35));
    if (a.num_transitions() == 0) continue;
    AmbiguityClass c;
    try {
      c = classify_ambiguity(a, 8);
    } catch (const Error&) {
      continue;
    }
    if (c.kind == AmbiguityClass::Infinite) continue;
    ++n;
    auto u = unary_check_pr(a);
    auto f = fnfa_check_pr(a);
    REQUIRE(f.resolvable != Verdict::Unknown);
    CHECK(u.resolvable == (f.resolvable == Verdict::Yes));
  }
  CHECK(n > 5);
}
