#include <doctest.h>

#include "resolvex/error.hpp"
#include "resolvex/fnfa.hpp"
#include "resolvex/runaut.hpp"
#include "resolvex/ufa.hpp"
#include "support.hpp"

using namespace rxtest;

namespace {

const char* kFnfa4Witness = "x0=ab y1=b x1=ab y2=b x2=ac; Q1={q1,q3} p1=q1 R1={qf} Q2={q4,q6} p2=q6 R2={qf}";

Word pumped(const BadWordWitness& w, int j) {
  Word out = w.x[0];
  for (int i = 0; i < w.loops(); ++i) {
    for (int r = 0; r < j; ++r) out.insert(out.end(), w.y[i].begin(), w.y[i].end());
    out.insert(out.end(), w.x[i + 1].begin(), w.x[i + 1].end());
  }
  return out;
}

}  // namespace

TEST_CASE("exact evaluation agrees with run sums") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 40; ++it) {
    Nfa a = trim(random_nfa(rng, 4, 2, 0.3));
    if (a.num_transitions() == 0) continue;
    Resolver r = random_resolver(rng, a, full_support(a));
    validate_resolver(r);
    for (const auto& w : words_upto(a.num_symbols(), 5)) {
      Rational p = eval_exact(r, w);
      REQUIRE(p == oracle_prob(a, r.weights, w));
      REQUIRE(p == eval_runs(r, w));
      REQUIRE(p >= 0);
      REQUIRE(p <= 1);
    }
  }
}

TEST_CASE("resolver text round trip and validation") {
  Nfa a = fixture("fig1a");
  Resolver r = uniform_resolver(a, full_support(a));
  Resolver back = parse_resolver(a, serialize_resolver(r));
  CHECK(back.weights == r.weights);
  CHECK(support_of(back) == full_support(a));
  r.weights[0] = Rational(2, 3);
  CHECK_THROWS_AS(validate_resolver(r), Error);
}

TEST_CASE("monte carlo brackets the exact value") {
  Nfa a = fixture("fig1a");
  Resolver r = uniform_resolver(a, full_support(a));
  auto mc = eval_monte_carlo(r, parse_word(a, "ab"), 20000, 7);
  CHECK(std::abs(mc.estimate - 0.5) <= 4 * mc.half_width);
  auto again = eval_monte_carlo(r, parse_word(a, "ab"), 20000, 7);
  CHECK(again.estimate == mc.estimate);
}

TEST_CASE("b(w) by dynamic programming matches run enumeration") {
  std::mt19937_64 rng(22);
  for (int it = 0; it < 40; ++it) {
    Nfa a = trim(random_nfa(rng, 4, 2, 0.3));
    for (const auto& s : enumerate_supports(a, 3))
      for (const auto& w : words_upto(a.num_symbols(), 5))
        REQUIRE(min_nondet_count(a, s, w) == min_nondet_count_runs(a, s, w));
  }
}

TEST_CASE("nice run tracks every accepting run") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 40; ++it) {
    Nfa a = random_fnfa(rng, 4, 2, 3);
    int k = classify_ambiguity(a).degree;
    Support s = full_support(a);
    for (const auto& w : words_upto(a.num_symbols(), 5)) {
      auto nr = nice_run(a, s, w, k);
      REQUIRE(nr.has_value() == accepts(a, w));
      if (!nr) continue;
      CHECK(nr->distinct == oracle_runs(a, w));
      CHECK(nr->runs.size() == static_cast<size_t>(k));
      CHECK(nr->states.size() == w.size() + 1);
    }
  }
}

TEST_CASE("run automaton of fig1b") {
  Nfa a = trim(fixture("fig1b"));
  RunAutomaton g = build_run_automaton(a, full_support(a), 1);
  CHECK(g.k == 1);
  auto lasso = gamma_lasso_search(g);
  REQUIRE(lasso);
  CHECK(accepts(a, *lasso));
}

TEST_CASE("fnfa4 decomposition verifies on both named supports") {
  Nfa a = fixture("fnfa4");
  BadWordWitness w = parse_witness(a, kFnfa4Witness);
  CHECK(format_word(a, w.word()) == "abbabbac");
  CHECK(verify_bad_word(a, full_support(a), w).ok);
  CHECK(verify_bad_word(a, parse_support(a, "-s.a.q2"), w).ok);
  CHECK(parse_witness(a, format_witness(a, w)).word() == w.word());
  for (int j = 1; j <= 4; ++j) CHECK(oracle_runs(a, pumped(w, j)) == 4);
}

TEST_CASE("tampered witnesses are rejected") {
  Nfa a = fixture("fnfa4");
  BadWordWitness w = parse_witness(a, kFnfa4Witness);
  w.pivots[1] = a.find_state("q4");
  auto c = verify_bad_word(a, full_support(a), w);
  CHECK(!c.ok);
  CHECK(!c.diagnostics.empty());
  BadWordWitness v = parse_witness(a, kFnfa4Witness);
  v.r_sets[0] = StateSet(a.num_states());
  CHECK(!verify_bad_word(a, full_support(a), v).ok);
}

TEST_CASE("fnfa verdicts on fixtures") {
  auto f4 = fnfa_check_pr(fixture("fnfa4"));
  CHECK(f4.resolvable == Verdict::No);
  CHECK(f4.degree == 4);
  for (const auto& s : f4.supports) {
    CHECK(s.bad == Verdict::Yes);
    CHECK(verify_bad_word(trim(fixture("fnfa4")), s.support, *s.witness).ok);
  }
  auto p2 = fnfa_check_pr(fixture("pump2"));
  CHECK(p2.resolvable == Verdict::Yes);
  CHECK(p2.resolver.has_value());
  CHECK_THROWS_AS(fnfa_check_pr(fixture("infamb")), Error);
}

TEST_CASE("bad words pump with b strictly increasing") {
  std::mt19937_64 rng(24);
  int seen = 0;
  for (int it = 0; it < 80 && seen < 15; ++it) {
    Nfa a = random_fnfa(rng, 4, 2, 3);
    for (const auto& s : enumerate_supports(a, 4)) {
      auto res = fnfa_find_bad_word(a, s);
      if (!res.witness) continue;
      ++seen;
      const auto& w = *res.witness;
      REQUIRE(verify_bad_word(a, s, w).ok);
      Nfa as = apply_support(a, s);
      long long runs = oracle_runs(as, w.word());
      std::optional<int> prev;
      for (int j = 1; j <= 4; ++j) {
        Word wj = pumped(w, j);
        CHECK(oracle_runs(as, wj) == runs);
        auto b = min_nondet_count(a, s, wj);
        REQUIRE(b);
        if (prev) CHECK(*b > *prev);
        prev = b;
      }
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("ufa verdicts and values") {
  auto f1a = ufa_check_pr(fixture("fig1a"));
  CHECK(f1a.resolvable);
  Nfa b = fixture("fig1b");
  auto f1b = ufa_check_pr(b);
  REQUIRE(!f1b.resolvable);
  CHECK(ufa_witness_valid(trim(b), *f1b.witness));
  CHECK(format_ufa_witness(trim(b), *f1b.witness) == "x=eps y=b z=b pivot=q0");
  CHECK(!ufa_scc_deterministic(b));
  CHECK_THROWS_AS(ufa_check_pr(fixture("pump2")), Error);

  auto dag = ufa_lambda_star(fixture("ufa-dag"));
  CHECK(dag.lambda_star == Rational(1, 3));
  CHECK(dag.lambda_star_letter == Rational(1, 3));
  const auto& root = dag.nodes[dag.root];
  CHECK(root.g == 3);
  CHECK(dag.automaton.alphabet()[root.f] == "b");
  CHECK(ufa_lambda_star(fixture("fig1a")).lambda_star == Rational(1, 2));
  CHECK_THROWS_AS(ufa_lambda_star(b), Error);
}

TEST_CASE("synthesized ufa resolver attains lambda star") {
  for (auto name : {"fig1a", "ufa-dag"}) {
    Nfa a = trim(fixture(name));
    auto rep = ufa_lambda_star(a);
    Resolver r = ufa_synthesize(a);
    validate_resolver(r);
    Rational lo = 2;
    for (const auto& w : words_upto(a.num_symbols(), 8))
      if (accepts(a, w)) lo = std::min(lo, eval_exact(r, w));
    CHECK(lo == rep.lambda_star);
  }
}

TEST_CASE("scc determinism agrees with the witness search") {
  std::mt19937_64 rng(25);
  int n = 0;
  for (int it = 0; it < 400 && n < 60; ++it) {
    Nfa a = trim(random_nfa(rng, 5, 2, 0.25));
    if (a.num_transitions() == 0 || !is_unambiguous(a)) continue;
    ++n;
    auto pr = ufa_check_pr(a);
    CHECK(pr.resolvable == ufa_scc_deterministic(a));
    if (!pr.resolvable) CHECK(ufa_witness_valid(a, *pr.witness));
  }
  CHECK(n > 10);
}
