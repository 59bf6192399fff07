#include "resolvex/pfa.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "resolvex/error.hpp"

namespace resolvex {

void validate_resolver(const Resolver& r) {
  const Nfa& a = r.host;
  if (static_cast<int>(r.weights.size()) != a.num_transitions())
    throw Error(ErrorKind::Parameter, "weight vector does not match host transitions");
  for (int q = 0; q < a.num_states(); ++q)
    for (int s = 0; s < a.num_symbols(); ++s) {
      if (a.out(q, s).empty()) continue;
      Rational sum = 0;
      for (int t : a.out(q, s)) {
        if (r.weights[t] < 0 || r.weights[t] > 1)
          throw Error(ErrorKind::NotStochastic, "weight outside [0,1] on " + format_transition(a, t));
        sum += r.weights[t];
      }
      if (sum != 1)
        throw Error(ErrorKind::NotStochastic, "weights of (" + a.states()[q] + ", " +
                                                  a.alphabet()[s] + ") sum to " + to_string(sum));
    }
}

Support support_of(const Resolver& r) {
  Support s;
  for (const auto& w : r.weights) s.keep.push_back(w > 0);
  return s;
}

Resolver uniform_resolver(const Nfa& a, const Support& s) {
  Resolver r{a, std::vector<Rational>(a.num_transitions(), 0)};
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x) {
      int k = 0;
      for (int t : a.out(q, x)) k += s.keep[t];
      for (int t : a.out(q, x))
        if (s.keep[t]) r.weights[t] = Rational(1, k);
    }
  return r;
}

Rational eval_exact(const Pfa& p, const Word& w) {
  const Nfa& a = p.host;
  std::vector<Rational> cur(a.num_states(), 0), nxt;
  cur[a.initial()] = 1;
  for (int x : w) {
    nxt.assign(a.num_states(), 0);
    for (int q = 0; q < a.num_states(); ++q) {
      if (cur[q] == 0) continue;
      for (int t : a.out(q, x))
        if (p.weights[t] != 0) nxt[a.transition(t).dst] += cur[q] * p.weights[t];
    }
    cur.swap(nxt);
  }
  Rational total = 0;
  for (int q = 0; q < a.num_states(); ++q)
    if (a.is_accepting(q)) total += cur[q];
  return total;
}

Rational eval_runs(const Pfa& p, const Word& w) {
  Rational total = 0;
  for (const auto& run : accepting_runs(p.host, w)) {
    Rational prod = 1;
    for (int t : run.transitions) prod *= p.weights[t];
    total += prod;
  }
  return total;
}

MonteCarloEstimate eval_monte_carlo(const Pfa& p, const Word& w, uint64_t samples, uint64_t seed) {
  if (samples == 0) throw Error(ErrorKind::Parameter, "samples must be positive");
  const Nfa& a = p.host;
  std::vector<double> wd(p.weights.size());
  for (size_t i = 0; i < wd.size(); ++i) wd[i] = to_double(p.weights[i]);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  uint64_t hits = 0;
  for (uint64_t s = 0; s < samples; ++s) {
    int q = a.initial();
    bool alive = true;
    for (int x : w) {
      const auto& out = a.out(q, x);
      if (out.empty()) {
        alive = false;
        break;
      }
      double u = unit(rng), acc = 0;
      int pick = -1;
      for (int t : out) {
        if (wd[t] <= 0) continue;
        acc += wd[t];
        pick = t;
        if (u < acc) break;
      }
      if (pick < 0) {
        alive = false;
        break;
      }
      q = a.transition(pick).dst;
    }
    if (alive && a.is_accepting(q)) ++hits;
  }
  MonteCarloEstimate e;
  e.samples = samples;
  e.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  e.half_width = 1.96 * std::sqrt(e.estimate * (1 - e.estimate) / static_cast<double>(samples));
  return e;
}

namespace {

std::vector<bool> nondet_in_support(const Nfa& a, const Support& s) {
  std::vector<bool> nd(a.num_transitions(), false);
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x) {
      int k = 0;
      for (int t : a.out(q, x)) k += s.keep[t];
      if (k >= 2)
        for (int t : a.out(q, x)) nd[t] = s.keep[t];
    }
  return nd;
}

}  // namespace

std::optional<int> min_nondet_count(const Nfa& a, const Support& s, const Word& w) {
  const auto nd = nondet_in_support(a, s);
  constexpr int inf = std::numeric_limits<int>::max();
  std::vector<int> cur(a.num_states(), inf), nxt;
  cur[a.initial()] = 0;
  for (int x : w) {
    nxt.assign(a.num_states(), inf);
    for (int q = 0; q < a.num_states(); ++q) {
      if (cur[q] == inf) continue;
      for (int t : a.out(q, x)) {
        if (!s.keep[t]) continue;
        int d = a.transition(t).dst;
        nxt[d] = std::min(nxt[d], cur[q] + (nd[t] ? 1 : 0));
      }
    }
    cur.swap(nxt);
  }
  int best = inf;
  for (int q = 0; q < a.num_states(); ++q)
    if (a.is_accepting(q)) best = std::min(best, cur[q]);
  if (best == inf) return std::nullopt;
  return best;
}

std::optional<int> min_nondet_count_runs(const Nfa& a, const Support& s, const Word& w) {
  const auto nd = nondet_in_support(a, s);
  std::vector<int> kept;
  Nfa sub = restrict_transitions(a, s.keep, &kept);
  std::optional<int> best;
  for (const auto& run : accepting_runs(sub, w)) {
    int c = 0;
    for (int t : run.transitions) c += nd[kept[t]];
    if (!best || c < *best) best = c;
  }
  return best;
}

Resolver parse_resolver(const Nfa& host, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  bool header = false, done = false;
  Resolver r{host, std::vector<Rational>(host.num_transitions(), 0)};
  std::vector<bool> given(host.num_transitions(), false);
  auto fail = [&](ErrorKind k, const std::string& m) {
    throw Error(k, "line " + std::to_string(lineno) + ": " + m);
  };
  while (!done && std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!header) {
      if (tok.size() != 3 || tok[0] != "resolver" || tok[1] != "for")
        fail(ErrorKind::Syntax, "expected 'resolver for <nfa-name>'");
      if (tok[2] != host.name())
        fail(ErrorKind::Parameter, "resolver targets '" + tok[2] + "', not '" + host.name() + "'");
      header = true;
    } else if (tok[0] == "resolve") {
      if (tok.size() != 5) fail(ErrorKind::Syntax, "expected 'resolve <src> <sym> <dst> <p/q>'");
      int src = host.find_state(tok[1]), sym = host.find_symbol(tok[2]), dst = host.find_state(tok[3]);
      if (src < 0) fail(ErrorKind::UnknownState, "unknown state '" + tok[1] + "'");
      if (sym < 0) fail(ErrorKind::UnknownSymbol, "unknown symbol '" + tok[2] + "'");
      if (dst < 0) fail(ErrorKind::UnknownState, "unknown state '" + tok[3] + "'");
      int t = host.find_transition(src, sym, dst);
      if (t < 0) fail(ErrorKind::Syntax, "no host transition " + tok[1] + " " + tok[2] + " " + tok[3]);
      if (given[t]) fail(ErrorKind::Syntax, "transition resolved twice");
      given[t] = true;
      try {
        r.weights[t] = parse_rational(tok[4]);
      } catch (const Error& e) {
        fail(ErrorKind::Syntax, e.what());
      }
      if (r.weights[t] <= 0 || r.weights[t] > 1) fail(ErrorKind::NotStochastic, "weight outside (0,1]");
    } else if (tok[0] == "end") {
      done = true;
    } else {
      fail(ErrorKind::Syntax, "unknown directive '" + tok[0] + "'");
    }
  }
  if (!header) throw Error(ErrorKind::Syntax, "empty resolver");
  if (!done) throw Error(ErrorKind::Syntax, "resolver missing 'end'");
  validate_resolver(r);
  return r;
}

std::string serialize_resolver(const Resolver& r) {
  std::ostringstream os;
  const Nfa& a = r.host;
  os << "resolver for " << a.name() << '\n';
  for (int t = 0; t < a.num_transitions(); ++t) {
    if (r.weights[t] == 0) continue;
    const auto& tr = a.transition(t);
    os << "resolve " << a.states()[tr.src] << ' ' << a.alphabet()[tr.sym] << ' '
       << a.states()[tr.dst] << ' ' << to_string(r.weights[t]) << '\n';
  }
  os << "end\n";
  return os.str();
}

}  // namespace resolvex
