#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "resolvex/ambiguity.hpp"
#include "resolvex/error.hpp"
#include "resolvex/langops.hpp"
#include "resolvex/nfa.hpp"
#include "resolvex/pfa.hpp"
#include "resolvex/rational.hpp"

#ifndef RESOLVEX_FIXTURES
#define RESOLVEX_FIXTURES "fixtures"
#endif

namespace rxtest {

using namespace resolvex;

inline std::string fixture_path(const std::string& name) { return std::string(RESOLVEX_FIXTURES) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Nfa fixture(const std::string& name) { return parse_nfa(read_text(fixture_path(name + ".nfa"))); }

// Each (q, a, q') is present independently with probability `density`.
inline Nfa random_nfa(std::mt19937_64& rng, int n, int letters, double density, double accept_p = 0.35) {
  std::bernoulli_distribution edge(density), acc(accept_p);
  std::vector<std::string> alphabet, states;
  for (int x = 0; x < letters; ++x) alphabet.push_back(std::string(1, static_cast<char>('a' + x)));
  std::vector<bool> accepting;
  for (int q = 0; q < n; ++q) {
    states.push_back("s" + std::to_string(q));
    accepting.push_back(acc(rng));
  }
  if (std::none_of(accepting.begin(), accepting.end(), [](bool b) { return b; }))
    accepting[std::uniform_int_distribution<int>(0, n - 1)(rng)] = true;
  std::vector<Transition> trans;
  for (int q = 0; q < n; ++q)
    for (int x = 0; x < letters; ++x)
      for (int r = 0; r < n; ++r)
        if (edge(rng)) trans.push_back({q, x, r});
  return Nfa("rnd", alphabet, states, 0, accepting, trans);
}

inline bool has_choice(const Nfa& a) {
  for (int t = 0; t < a.num_transitions(); ++t)
    if (a.nondeterministic(t)) return true;
  return false;
}

// Trim, finitely ambiguous with degree in [1, max_degree], at least one transition.
inline Nfa random_fnfa(std::mt19937_64& rng, int max_states, int max_letters, int max_degree) {
  std::uniform_int_distribution<int> ns(2, max_states), ls(1, max_letters);
  std::uniform_real_distribution<double> dens(0.12, 0.35);
  for (;;) {
    Nfa a = trim(random_nfa(rng, ns(rng), ls(rng), dens(rng)));
    if (a.num_transitions() == 0) continue;
    try {
      auto c = classify_ambiguity(a, max_degree);
      if (c.kind != AmbiguityClass::Infinite) return a;
    } catch (const Error&) {
    }
  }
}

// Independent run counter: plain depth-first enumeration.
inline long long oracle_runs(const Nfa& a, const Word& w) {
  std::function<long long(int, size_t)> go = [&](int q, size_t i) -> long long {
    if (i == w.size()) return a.is_accepting(q) ? 1 : 0;
    long long s = 0;
    for (const auto& t : a.transitions())
      if (t.src == q && t.sym == w[i]) s += go(t.dst, i + 1);
    return s;
  };
  return go(a.initial(), 0);
}

// Independent acceptance probability: sum over runs of weight products.
inline Rational oracle_prob(const Nfa& a, const std::vector<Rational>& wt, const Word& w) {
  std::function<Rational(int, size_t)> go = [&](int q, size_t i) -> Rational {
    if (i == w.size()) return a.is_accepting(q) ? Rational(1) : Rational(0);
    Rational s = 0;
    for (int t = 0; t < a.num_transitions(); ++t) {
      const auto& tr = a.transition(t);
      if (tr.src == q && tr.sym == w[i] && wt[t] != 0) s += wt[t] * go(tr.dst, i + 1);
    }
    return s;
  };
  return go(a.initial(), 0);
}

inline std::vector<Word> words_upto(int letters, int max_len) {
  std::vector<Word> out;
  for_each_word(letters, max_len, [&](const Word& w) { out.push_back(w); });
  return out;
}

inline bool oracle_accepts(const Nfa& a, const Word& w) { return oracle_runs(a, w) > 0; }

// Random resolver over support s with weights that are multiples of 1/den, all positive.
inline Resolver random_resolver(std::mt19937_64& rng, const Nfa& a, const Support& s, int den = 12) {
  std::vector<Rational> w(a.num_transitions(), Rational(0));
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x) {
      std::vector<int> g;
      for (int t : a.out(q, x))
        if (s.keep[t]) g.push_back(t);
      if (g.empty()) continue;
      std::vector<int> parts(g.size(), 1);
      int rest = den - static_cast<int>(g.size());
      std::uniform_int_distribution<int> pick(0, static_cast<int>(g.size()) - 1);
      for (int i = 0; i < rest; ++i) ++parts[pick(rng)];
      for (size_t i = 0; i < g.size(); ++i) w[g[i]] = Rational(parts[i], den);
    }
  return Resolver{a, w};
}

// Dense double power iteration: row vector init * P^n.
inline std::vector<double> power_row(const std::vector<std::vector<double>>& p, std::vector<double> v, long long n) {
  const size_t d = v.size();
  for (long long s = 0; s < n; ++s) {
    std::vector<double> nv(d, 0.0);
    for (size_t i = 0; i < d; ++i)
      if (v[i] != 0)
        for (size_t j = 0; j < d; ++j) nv[j] += v[i] * p[i][j];
    v = std::move(nv);
  }
  return v;
}

}  // namespace rxtest
