#include "resolvex/ufa.hpp"

#include <deque>
#include <sstream>

#include "resolvex/ambiguity.hpp"
#include "resolvex/error.hpp"

namespace resolvex {

namespace {

// Shortest word from `from` into `targets` (BFS, symbols in order).
std::optional<Word> shortest_path(const Nfa& a, int from, const StateSet& targets) {
  std::vector<int> prev(a.num_states(), -2), sym(a.num_states(), -1);
  std::deque<int> queue{from};
  prev[from] = -1;
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    if (targets.test(q)) {
      Word w;
      for (int v = q; prev[v] >= 0; v = prev[v]) w.push_back(sym[v]);
      return Word(w.rbegin(), w.rend());
    }
    for (int x = 0; x < a.num_symbols(); ++x)
      for (int t : a.out(q, x)) {
        int d = a.transition(t).dst;
        if (prev[d] == -2) {
          prev[d] = q;
          sym[d] = x;
          queue.push_back(d);
        }
      }
  }
  return std::nullopt;
}

StateSet single(const Nfa& a, int q) {
  StateSet s(a.num_states());
  s.set(q);
  return s;
}

}  // namespace

UfaPrResult ufa_check_pr(const Nfa& in) {
  Nfa a = trim(in);
  if (!is_unambiguous(a)) throw Error(ErrorKind::NotUnambiguous, "'" + a.name() + "' is ambiguous");
  UfaPrResult r;
  for (int t = 0; t < a.num_transitions(); ++t) {
    const auto& tr = a.transition(t);
    if (a.width(tr.src, tr.sym) < 2) continue;
    auto back = shortest_path(a, tr.dst, single(a, tr.src));
    if (!back) continue;
    int alt = -1;
    for (int u : a.out(tr.src, tr.sym))
      if (u != t) {
        alt = a.transition(u).dst;
        break;
      }
    UfaBadWitness w;
    w.pivot = tr.src;
    w.x = *shortest_path(a, a.initial(), single(a, tr.src));
    w.y = {tr.sym};
    w.y.insert(w.y.end(), back->begin(), back->end());
    w.z = {tr.sym};
    auto tail = shortest_path(a, alt, a.accepting_set());
    w.z.insert(w.z.end(), tail->begin(), tail->end());
    r.resolvable = false;
    r.witness = std::move(w);
    return r;
  }
  return r;
}

bool ufa_scc_deterministic(const Nfa& in) {
  Nfa a = trim(in);
  auto scc = scc_decompose(a);
  for (const auto& tr : a.transitions())
    if (scc.comp_of[tr.src] == scc.comp_of[tr.dst] && a.width(tr.src, tr.sym) >= 2) return false;
  return true;
}

bool ufa_witness_valid(const Nfa& in, const UfaBadWitness& w) {
  Nfa a = trim(in);
  if (w.pivot < 0 || w.pivot >= a.num_states() || w.y.empty() || w.z.empty()) return false;
  if (w.y[0] != w.z[0]) return false;
  if (!reach_after(a, w.x).test(w.pivot)) return false;
  StateSet s = single(a, w.pivot);
  for (int x : w.y) s = post(a, s, x);
  if (!s.test(w.pivot)) return false;
  s = single(a, w.pivot);
  for (int x : w.z) s = post(a, s, x);
  if (!s.intersects(a.accepting_set())) return false;
  return a.width(w.pivot, w.y[0]) >= 2;
}

std::string format_ufa_witness(const Nfa& in, const UfaBadWitness& w) {
  Nfa a = trim(in);
  auto word = [&](const Word& v) { return v.empty() ? std::string("eps") : format_word(a, v); };
  return "x=" + word(w.x) + " y=" + word(w.y) + " z=" + word(w.z) + " pivot=" + a.states()[w.pivot];
}

UfaBadWitness parse_ufa_witness(const Nfa& in, std::string_view text) {
  Nfa a = trim(in);
  UfaBadWitness w;
  std::istringstream is{std::string(text)};
  std::string tok;
  bool seen[4] = {false, false, false, false};
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Syntax, "witness: expected key=value, got '" + tok + "'");
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "x") w.x = parse_word(a, val), seen[0] = true;
    else if (key == "y") w.y = parse_word(a, val), seen[1] = true;
    else if (key == "z") w.z = parse_word(a, val), seen[2] = true;
    else if (key == "pivot") {
      w.pivot = a.find_state(val);
      if (w.pivot < 0) throw Error(ErrorKind::UnknownState, "witness: unknown state '" + val + "'");
      seen[3] = true;
    } else {
      throw Error(ErrorKind::Syntax, "witness: unknown key '" + key + "'");
    }
  }
  for (bool b : seen)
    if (!b) throw Error(ErrorKind::Syntax, "witness needs x, y, z and pivot");
  return w;
}

LambdaStarReport ufa_lambda_star(const Nfa& in) {
  Nfa a = trim(in);
  auto pr = ufa_check_pr(a);
  if (!pr.resolvable)
    throw Error(ErrorKind::NotPositivelyResolvable, "'" + a.name() + "' is not positively resolvable");
  auto scc = scc_decompose(a);
  LambdaStarReport rep;
  rep.automaton = a;
  const int c = static_cast<int>(scc.components.size());
  rep.nodes.resize(c);
  // components come sinks first, so successors are finished before their predecessors
  for (int i = 0; i < c; ++i) {
    LambdaStarNode& node = rep.nodes[i];
    node.states = scc.components[i];
    long long best = 1;
    for (int q : node.states)
      for (int x = 0; x < a.num_symbols(); ++x) {
        long long sum = 0;
        bool leaves = false;
        for (int t : a.out(q, x)) {
          int d = scc.comp_of[a.transition(t).dst];
          if (d == i) continue;
          leaves = true;
          sum += rep.nodes[d].g;
        }
        if (leaves && sum > best) {
          best = sum;
          node.f = x;
          node.f_state = q;
        }
      }
    node.g = best;
    long long merged = 0;
    bool any = false;
    for (int x = 0; x < a.num_symbols(); ++x) {
      long long sum = 0;
      bool leaves = false;
      for (int q : node.states)
        for (int t : a.out(q, x)) {
          int d = scc.comp_of[a.transition(t).dst];
          if (d == i) continue;
          leaves = true;
          sum += rep.nodes[d].g_letter;
        }
      if (leaves) {
        any = true;
        merged = std::max(merged, sum);
      }
    }
    node.g_letter = any ? merged : 1;
  }
  rep.root = scc.comp_of[a.initial()];
  rep.lambda_star = Rational(1, rep.nodes[rep.root].g);
  rep.lambda_star_letter = Rational(1, rep.nodes[rep.root].g_letter);
  if (rep.lambda_star != rep.lambda_star_letter)
    rep.warnings.push_back("letter-merged recursion gives " + to_string(rep.lambda_star_letter) +
                           ", per-state recursion gives " + to_string(rep.lambda_star));
  return rep;
}

Resolver ufa_synthesize(const Nfa& in) {
  auto rep = ufa_lambda_star(in);
  const Nfa& a = rep.automaton;
  std::vector<int> comp(a.num_states());
  for (size_t i = 0; i < rep.nodes.size(); ++i)
    for (int q : rep.nodes[i].states) comp[q] = static_cast<int>(i);
  Resolver r{a, std::vector<Rational>(a.num_transitions(), 0)};
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x) {
      const auto& out = a.out(q, x);
      if (out.size() == 1) {
        r.weights[out[0]] = 1;
        continue;
      }
      long long total = 0;
      for (int t : out) total += rep.nodes[comp[a.transition(t).dst]].g;
      for (int t : out) r.weights[t] = Rational(rep.nodes[comp[a.transition(t).dst]].g, total);
    }
  return r;
}

}  // namespace resolvex
