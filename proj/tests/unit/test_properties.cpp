#include <doctest.h>

#include "resolvex/fnfa.hpp"
#include "resolvex/gens.hpp"
#include "resolvex/lambda.hpp"
#include "resolvex/runaut.hpp"
#include "resolvex/ufa.hpp"
#include "resolvex/unary.hpp"
#include "support.hpp"

using namespace rxtest;

namespace {

const char* kFixtures[] = {"fig1a", "fig1b", "ufa-dag", "fnfa4", "pump2"};

Rational rpow(Rational b, int e) {
  Rational r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Run sum built from accepting_runs rather than the forward product.
Rational run_sum(const Pfa& p, const Word& w) {
  Rational s = 0;
  for (const auto& run : accepting_runs(p.host, w)) {
    Rational q = 1;
    for (int t : run.transitions) q *= p.weights[t];
    s += q;
  }
  return s;
}

Word pumped(const BadWordWitness& w, int j) {
  Word out = w.x[0];
  for (int i = 0; i < w.loops(); ++i) {
    for (int r = 0; r < j; ++r) out.insert(out.end(), w.y[i].begin(), w.y[i].end());
    out.insert(out.end(), w.x[i + 1].begin(), w.x[i + 1].end());
  }
  return out;
}

long long loops_on(const Nfa& a, int q, const Word& y) {
  std::function<long long(int, size_t)> go = [&](int p, size_t i) -> long long {
    if (i == y.size()) return p == q ? 1 : 0;
    long long s = 0;
    for (int t : a.out(p, y[i])) s += go(a.transition(t).dst, i + 1);
    return s;
  };
  return go(q, 0);
}

}  // namespace

TEST_CASE("trim is idempotent and keeps the language up to 2|Q|") {
  std::mt19937_64 rng(51);
  for (int it = 0; it < 60; ++it) {
    Nfa a = random_nfa(rng, 5, 2, 0.2);
    Nfa t = trim(a);
    CHECK(serialize(trim(t)) == serialize(t));
    for (const auto& w : words_upto(2, 2 * a.num_states()))
      REQUIRE(!accepting_runs(a, w, 1).empty() == !accepting_runs(t, w, 1).empty());
  }
}

TEST_CASE("runs chain and condensation is acyclic") {
  std::mt19937_64 rng(52);
  for (int it = 0; it < 40; ++it) {
    Nfa a = random_nfa(rng, 5, 2, 0.25);
    for (const auto& w : words_upto(2, 4))
      for (const auto& r : accepting_runs(a, w)) {
        int q = a.initial();
        REQUIRE(r.transitions.size() == w.size());
        for (size_t i = 0; i < w.size(); ++i) {
          const auto& t = a.transition(r.transitions[i]);
          REQUIRE(t.src == q);
          REQUIRE(t.sym == w[i]);
          q = t.dst;
        }
        REQUIRE(a.is_accepting(q));
      }
    auto scc = scc_decompose(a);
    // Components come sinks first, so every condensation edge points to a smaller id.
    for (size_t c = 0; c < scc.components.size(); ++c) {
      for (int d : scc.succ[c]) CHECK(d < static_cast<int>(c));
      CHECK(scc.bottom[c] == scc.succ[c].empty());
    }
  }
}

TEST_CASE("support enumeration is exact for small hosts") {
  std::mt19937_64 rng(53);
  int done = 0;
  for (int it = 0; it < 200 && done < 25; ++it) {
    Nfa a = trim(random_nfa(rng, 4, 2, 0.3));
    const int n = a.num_transitions();
    if (n == 0 || n > 12) continue;
    ++done;
    auto sups = enumerate_supports(a);
    std::set<std::vector<bool>> yielded;
    for (const auto& s : sups) yielded.insert(s.keep);
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      Support s{std::vector<bool>(n)};
      for (int t = 0; t < n; ++t) s.keep[t] = (mask >> t) & 1u;
      if (!covers_all_groups(a, s)) continue;
      Nfa r = apply_support(a, s);
      bool eq = language_relation(r, &a, LanguageMode::Equivalent).holds;
      CHECK(eq == (yielded.count(s.keep) > 0));
    }
  }
  CHECK(done > 5);
}

TEST_CASE("mutual inclusion is equivalence") {
  std::mt19937_64 rng(54);
  for (int it = 0; it < 100; ++it) {
    Nfa a = random_nfa(rng, 3, 2, 0.4, 0.5);
    Nfa b = random_nfa(rng, 3, 2, 0.4, 0.5);
    bool ab = language_relation(a, &b, LanguageMode::Includes).holds;
    bool ba = language_relation(b, &a, LanguageMode::Includes).holds;
    CHECK((ab && ba) == language_relation(a, &b, LanguageMode::Equivalent).holds);
  }
}

TEST_CASE("finite degree witnesses are short and never exceeded") {
  std::mt19937_64 rng(55);
  for (int it = 0; it < 40; ++it) {
    Nfa a = random_fnfa(rng, 4, 2, 3);
    auto c = classify_ambiguity(a);
    if (c.kind != AmbiguityClass::Finite) continue;
    double bound = std::pow(a.num_states(), c.degree + 1);
    CHECK(static_cast<double>(c.witness->size()) <= bound);
    for (const auto& w : words_upto(a.num_symbols(), 2 * a.num_states())) REQUIRE(oracle_runs(a, w) <= c.degree);
  }
}

TEST_CASE("exact evaluation equals run sums on fixtures up to length 8") {
  std::mt19937_64 rng(56);
  for (auto name : kFixtures) {
    Nfa a = trim(fixture(name));
    Resolver r = random_resolver(rng, a, full_support(a));
    for (const auto& w : words_upto(a.num_symbols(), a.num_symbols() > 2 ? 6 : 8))
      REQUIRE(eval_exact(r, w) == run_sum(r, w));
  }
}

TEST_CASE("probability sits between the b(w) bounds") {
  std::mt19937_64 rng(57);
  for (auto name : kFixtures) {
    Nfa a = trim(fixture(name));
    int k = classify_ambiguity(a).degree;
    for (const auto& s : enumerate_supports(a)) {
      Resolver r = random_resolver(rng, a, s);
      Rational lo = 1, hi = 0;
      for (int t = 0; t < a.num_transitions(); ++t) {
        if (r.weights[t] == 0) continue;
        lo = std::min(lo, r.weights[t]);
        bool nd = false;
        for (int u : a.out(a.transition(t).src, a.transition(t).sym)) nd = nd || (u != t && s.keep[u]);
        if (nd) hi = std::max(hi, r.weights[t]);
      }
      for (const auto& w : words_upto(a.num_symbols(), 6)) {
        auto b = min_nondet_count(a, s, w);
        if (!b) continue;
        Rational p = eval_exact(r, w);
        CHECK(p >= rpow(lo, *b));
        if (*b > 0) CHECK(p <= Rational(k) * rpow(hi, *b));
      }
    }
  }
}

TEST_CASE("monte carlo within five half-widths") {
  std::mt19937_64 rng(58);
  for (auto name : {"pump2", "fnfa4"}) {
    Nfa a = trim(fixture(name));
    Resolver r = random_resolver(rng, a, full_support(a));
    for (const auto& w : words_upto(a.num_symbols(), 4)) {
      if (!accepts(a, w)) continue;
      auto mc = eval_monte_carlo(r, w, 4000, 99);
      CHECK(std::abs(mc.estimate - to_double(eval_exact(r, w))) <= 5 * mc.half_width + 1e-12);
    }
  }
}

TEST_CASE("nice runs follow run automaton edges") {
  for (auto name : kFixtures) {
    Nfa a = trim(fixture(name));
    int k = classify_ambiguity(a).degree;
    for (const auto& s : enumerate_supports(a)) {
      RunAutomaton g = build_run_automaton(a, s, k);
      for (const auto& w : words_upto(a.num_symbols(), 5)) {
        auto nr = nice_run(a, s, w, k);
        if (!nr) continue;
        auto again = nice_run(a, s, w, k);
        CHECK(again->runs == nr->runs);
        int cur = g.find(nr->states[0]);
        REQUIRE(cur == g.initial);
        for (size_t i = 0; i < w.size(); ++i) {
          int nxt = g.find(nr->states[i + 1]);
          REQUIRE(nxt >= 0);
          bool edge = false;
          for (int e : g.out[cur]) edge = edge || (g.edges[e].sym == w[i] && g.edges[e].to == nxt);
          REQUIRE(edge);
          cur = nxt;
        }
        CHECK(g.final[cur]);
      }
    }
  }
}

TEST_CASE("pumping loops and loop uniqueness on fixtures") {
  for (auto name : {"fnfa4", "pump2", "fig1b"}) {
    Nfa a = trim(fixture(name));
    for (const auto& s : enumerate_supports(a)) {
      auto res = fnfa_find_bad_word(a, s);
      if (!res.witness) continue;
      const auto& w = *res.witness;
      Nfa as = apply_support(a, s);
      long long m = oracle_runs(as, w.word());
      for (int j = 2; j <= 4; ++j) CHECK(oracle_runs(as, pumped(w, j)) == m);
      for (int i = 0; i < w.loops(); ++i)
        for (int q : w.q_sets[i].elements()) CHECK(loops_on(as, q, w.y[i]) == 1);
    }
  }
}

TEST_CASE("scc determinism agrees with check-pr on 500 random unambiguous automata") {
  std::mt19937_64 rng(59);
  int n = 0;
  while (n < 500) {
    Nfa a = trim(random_nfa(rng, std::uniform_int_distribution<int>(2, 6)(rng), 2, 0.2));
    if (a.num_transitions() == 0 || !is_unambiguous(a)) continue;
    ++n;
    REQUIRE(ufa_check_pr(a).resolvable == ufa_scc_deterministic(a));
  }
}

TEST_CASE("synthesized resolvers never fall below lambda star") {
  std::mt19937_64 rng(60);
  int n = 0;
  while (n < 60) {
    Nfa a = trim(random_nfa(rng, std::uniform_int_distribution<int>(2, 5)(rng), 2, 0.25));
    if (!has_choice(a) || !is_unambiguous(a) || !ufa_check_pr(a).resolvable) continue;
    ++n;
    Rational star = ufa_lambda_star(a).lambda_star;
    Resolver r = ufa_synthesize(a);
    for (const auto& w : words_upto(a.num_symbols(), 7))
      if (accepts(a, w)) REQUIRE(eval_exact(r, w) >= star);
  }
}

TEST_CASE("certified results hold exactly and on words up to length 10") {
  for (auto name : {"fig1a", "ufa-dag", "pump2"}) {
    Nfa a = trim(fixture(name));
    auto m = maximize_lambda(a);
    REQUIRE(m.status == MaximizeStatus::Certified);
    auto c = build_constraints(a, *m.support);
    std::vector<Rational> x(c.vars.transitions.size());
    for (size_t v = 0; v < x.size(); ++v) x[v] = m.resolver->weights[c.vars.transitions[v]];
    for (const auto& w : c.words) CHECK(w.z.eval(x) >= m.lambda_best);
    for (const auto& w : words_upto(a.num_symbols(), a.num_symbols() > 2 ? 7 : 10))
      if (accepts(a, w)) REQUIRE(eval_exact(*m.resolver, w) >= m.lambda_best);
    for (Rational l : std::vector<Rational>{m.lambda_best, Rational(m.lambda_best / 2), Rational(1, 100)})
      CHECK(check_lambda_resolvable(a, l).verdict == Verdict::Yes);
  }
}

TEST_CASE("diminishing family tends to its z value") {
  std::mt19937_64 rng(61);
  Nfa a = trim(fixture("fig1b"));
  auto pw = enumerate_primitive_words(a, full_support(a));
  REQUIRE(pw.words[0].z.is_zero());
  const int b = a.find_symbol("b");
  Resolver fair = random_resolver(rng, a, full_support(a), 2);
  CHECK(to_double(eval_exact(fair, Word(40, b))) < 1e-6);
  for (int r = 0; r < 5; ++r) {
    Resolver res = random_resolver(rng, a, full_support(a));
    Rational prev = 2;
    for (int j = 1; j <= 40; ++j) {
      Rational p = eval_exact(res, Word(j, b));
      CHECK(p < prev);
      prev = p;
    }
  }
  Nfa p = trim(fixture("pump2"));
  auto pp = enumerate_primitive_words(p, full_support(p));
  auto c = build_constraints(p, full_support(p));
  Resolver res = random_resolver(rng, p, full_support(p), 2);
  std::vector<Rational> x(c.vars.transitions.size());
  for (size_t v = 0; v < x.size(); ++v) x[v] = res.weights[c.vars.transitions[v]];
  int checked = 0;
  for (const auto& w : pp.words) {
    if (w.bad_set == 0 || w.z.is_zero()) continue;
    Word big = w.word;
    big.insert(big.begin() + 1, 40, p.find_symbol("b"));
    if (!accepts(p, big)) continue;
    ++checked;
    CHECK(std::abs(to_double(eval_exact(res, big)) - to_double(w.z.eval(x))) < 1e-6);
  }
  CHECK(checked > 0);
}

TEST_CASE("stationary and absorption data satisfy their linear systems") {
  std::mt19937_64 rng(62);
  for (int it = 0; it < 40; ++it) {
    int d = std::uniform_int_distribution<int>(1, 6)(rng);
    MarkovChain c;
    c.p.assign(d, std::vector<Rational>(d, 0));
    std::bernoulli_distribution e(0.35);
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
    Matrix b(d, std::vector<Rational>(d, 0));
    for (int i = 0; i < d; ++i) b[i][i] = 1;
    for (long long s = 0; s < r.period; ++s) {
      Matrix nb(d, std::vector<Rational>(d, 0));
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
          if (b[i][k] != 0)
            for (int j = 0; j < d; ++j) nb[i][j] += b[i][k] * c.p[k][j];
      b = std::move(nb);
    }
    for (size_t ci = 0; ci < r.classes.size(); ++ci) {
      const auto& pi = r.stationary[ci];
      Rational total = 0;
      for (int j = 0; j < d; ++j) {
        Rational v = 0;
        for (int i = 0; i < d; ++i) v += pi[i] * b[i][j];
        CHECK(v == pi[j]);
        total += pi[j];
      }
      CHECK(total == 1);
    }
    std::vector<int> pos(d, -1);
    for (size_t i = 0; i < r.transient.size(); ++i) pos[r.transient[i]] = static_cast<int>(i);
    for (size_t i = 0; i < r.transient.size(); ++i)
      for (size_t ci = 0; ci < r.classes.size(); ++ci) {
        Rational rhs = 0;
        for (int j = 0; j < d; ++j) {
          if (r.class_of[j] == static_cast<int>(ci)) rhs += b[r.transient[i]][j];
          else if (pos[j] >= 0) rhs += b[r.transient[i]][j] * r.absorption[pos[j]][ci];
        }
        CHECK(rhs == r.absorption[i][ci]);
      }
  }
}

TEST_CASE("non-resolvable unary families fall below 1e-3") {
  std::mt19937_64 rng(63);
  for (auto spec : {"2:0", "3:0,1"}) {
    Nfa a = gen_unary_hardness(parse_cycles(spec));
    auto rep = unary_check_pr(a);
    REQUIRE(!rep.resolvable);
    for (const auto& sr : rep.supports) {
      long long k = sr.failing_residues.front();
      for (int t = 0; t < 5; ++t) {
        Resolver res = random_resolver(rng, a, sr.support, 20);
        Rational best = 1;
        for (long long n = k; n <= 200; n += sr.period) {
          Word w(n, 0);
          if (accepts(apply_support(a, sr.support), w)) best = std::min(best, eval_exact(res, w));
        }
        CHECK(to_double(best) < 1e-3);
      }
    }
  }
}

TEST_CASE("pspace hardness output is universal") {
  std::mt19937_64 rng(64);
  for (int it = 0; it < 20; ++it) {
    std::vector<Nfa> dfas;
    int count = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < count; ++i) {
      int n = std::uniform_int_distribution<int>(1, 3)(rng);
      std::vector<std::string> st;
      std::vector<bool> acc;
      std::vector<Transition> tr;
      for (int q = 0; q < n; ++q) {
        st.push_back("p" + std::to_string(q));
        acc.push_back(std::bernoulli_distribution(0.5)(rng));
        for (int x = 0; x < 2; ++x) tr.push_back({q, x, std::uniform_int_distribution<int>(0, n - 1)(rng)});
      }
      dfas.emplace_back("d", std::vector<std::string>{"a", "b"}, st, 0, acc, tr);
    }
    Nfa g = gen_pspace_hardness(dfas);
    CHECK(language_relation(g, nullptr, LanguageMode::Universal).holds);
  }
}
