#include "resolvex/runaut.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "resolvex/error.hpp"

namespace resolvex {

std::string gamma_key(const GammaState& g) {
  std::string key;
  key.reserve(g.tuple.size() * 2 + 16);
  for (int q : g.tuple) {
    key += std::to_string(q);
    key += ',';
  }
  key += '|';
  key += std::to_string(g.cuts);
  key += '|';
  for (int q : g.rejected.elements()) {
    key += std::to_string(q);
    key += ',';
  }
  return key;
}

int RunAutomaton::find(const GammaState& g) const {
  auto it = index_.find(gamma_key(g));
  return it == index_.end() ? -1 : it->second;
}

namespace {

struct Segment {
  int lo, hi;  // components [lo, hi)
};

std::vector<Segment> segments(const GammaState& g) {
  std::vector<Segment> out;
  const int k = static_cast<int>(g.tuple.size());
  int lo = 0;
  for (int j = 0; j < k; ++j)
    if (j == k - 1 || ((g.cuts >> j) & 1u)) {
      out.push_back({lo, j + 1});
      lo = j + 1;
    }
  return out;
}

struct Builder {
  const Nfa& a;
  const Support& s;
  int k;
  std::vector<std::vector<std::vector<int>>> sout;  // kept transitions per (q, sym)

  Builder(const Nfa& host, const Support& sup, int kk) : a(host), s(sup), k(kk) {
    sout.assign(a.num_states(), std::vector<std::vector<int>>(a.num_symbols()));
    for (int q = 0; q < a.num_states(); ++q)
      for (int x = 0; x < a.num_symbols(); ++x)
        for (int t : a.out(q, x))
          if (s.keep[t]) sout[q][x].push_back(t);
  }

  StateSet post_s(const StateSet& from, int x) const {
    StateSet r(a.num_states());
    for (int q : from.elements())
      for (int t : sout[q][x]) r.set(a.transition(t).dst);
    return r;
  }

  template <class F>
  void successors(const GammaState& g, int x, F emit) const {
    StateSet tset(a.num_states());
    for (int q : g.tuple) tset.set(q);
    StateSet reach = tset;
    reach |= g.rejected;
    const StateSet reach2 = post_s(reach, x);
    const StateSet blocked = post_s(g.rejected, x);
    const std::vector<int> options = post_s(tset, x).minus(blocked).elements();
    if (options.size() > 24) throw Error(ErrorKind::StateBudgetExceeded, "too many successor choices");
    const auto segs = segments(g);
    for (uint32_t m = 1; m < (1u << options.size()); ++m) {
      StateSet chosen(a.num_states());
      for (size_t i = 0; i < options.size(); ++i)
        if ((m >> i) & 1u) chosen.set(options[i]);
      // targets per segment: all successors of its state inside `chosen`, ascending
      std::vector<std::vector<int>> targets(segs.size());
      bool ok = true;
      for (size_t i = 0; i < segs.size() && ok; ++i) {
        int p = g.tuple[segs[i].lo];
        for (int t : sout[p][x])
          if (chosen.test(a.transition(t).dst)) targets[i].push_back(t);
        int size = segs[i].hi - segs[i].lo;
        ok = !targets[i].empty() && static_cast<int>(targets[i].size()) <= size;
      }
      if (!ok) continue;
      GammaState n;
      n.tuple.assign(k, -1);
      n.rejected = reach2.minus(chosen);
      std::vector<int> moves(k, -1);
      // every segment picks a composition of its size over its targets
      std::function<void(size_t)> rec = [&](size_t i) {
        if (i == segs.size()) {
          emit(n, moves);
          return;
        }
        const int size = segs[i].hi - segs[i].lo;
        const int parts = static_cast<int>(targets[i].size());
        std::vector<int> comp(parts, 1);
        std::function<void(int, int)> dist = [&](int j, int left) {
          if (j == parts - 1) {
            comp[j] = 1 + left;
            int pos = segs[i].lo;
            uint32_t saved = n.cuts;
            for (int b = 0; b < parts; ++b) {
              for (int c = 0; c < comp[b]; ++c) {
                moves[pos] = targets[i][b];
                n.tuple[pos] = a.transition(targets[i][b]).dst;
                ++pos;
              }
              if (pos < k) n.cuts |= 1u << (pos - 1);
            }
            rec(i + 1);
            n.cuts = saved;
            return;
          }
          for (int c = 0; c <= left; ++c) {
            comp[j] = 1 + c;
            dist(j + 1, left - c);
          }
        };
        dist(0, size - parts);
      };
      n.cuts = 0;
      rec(0);
    }
  }
};

bool is_final(const Nfa& a, const GammaState& g) {
  for (int q : g.tuple)
    if (!a.is_accepting(q)) return false;
  return !g.rejected.intersects(a.accepting_set());
}

}  // namespace

RunAutomaton build_run_automaton(const Nfa& a, const Support& s, int k, size_t budget) {
  if (k < 1 || k > 32) throw Error(ErrorKind::Parameter, "run automaton needs 1 <= k <= 32");
  Builder b(a, s, k);
  std::vector<GammaState> nodes;
  std::vector<GammaEdge> edges;
  std::unordered_map<std::string, int> index;
  std::deque<int> queue;
  auto intern = [&](const GammaState& g) {
    auto key = gamma_key(g);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (nodes.size() >= budget)
      throw Error(ErrorKind::StateBudgetExceeded,
                  "run automaton exceeds " + std::to_string(budget) + " states");
    int id = static_cast<int>(nodes.size());
    index.emplace(std::move(key), id);
    nodes.push_back(g);
    queue.push_back(id);
    return id;
  };
  GammaState init;
  init.tuple.assign(k, a.initial());
  init.rejected = StateSet(a.num_states());
  intern(init);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    for (int x = 0; x < a.num_symbols(); ++x) {
      const GammaState cur = nodes[id];
      b.successors(cur, x, [&](const GammaState& n, const std::vector<int>& moves) {
        int to = intern(n);
        edges.push_back({id, x, to, moves});
      });
    }
  }
  // trim to nodes between the initial node and a final node
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<int>> rev(n);
  for (const auto& e : edges) rev[e.to].push_back(e.from);
  std::vector<char> co(n, 0);
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (is_final(a, nodes[v])) {
      co[v] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : rev[v])
      if (!co[u]) {
        co[u] = 1;
        stack.push_back(u);
      }
  }
  RunAutomaton g;
  g.host = a;
  g.support = s;
  g.k = k;
  g.explored = nodes.size();
  std::vector<int> remap(n, -1);
  for (int v = 0; v < n; ++v)
    if (co[v] || v == 0) {
      remap[v] = static_cast<int>(g.nodes.size());
      g.index_.emplace(gamma_key(nodes[v]), remap[v]);
      g.nodes.push_back(nodes[v]);
      g.final.push_back(is_final(a, nodes[v]));
    }
  g.out.assign(g.nodes.size(), {});
  for (auto& e : edges)
    if (remap[e.from] >= 0 && remap[e.to] >= 0 && co[e.to]) {
      e.from = remap[e.from];
      e.to = remap[e.to];
      g.out[e.from].push_back(static_cast<int>(g.edges.size()));
      g.edges.push_back(std::move(e));
    }
  g.nondet_.assign(a.num_transitions(), false);
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x)
      if (b.sout[q][x].size() >= 2)
        for (int t : b.sout[q][x]) g.nondet_[t] = true;
  std::vector<std::vector<int>> adj(g.nodes.size());
  for (const auto& e : g.edges) adj[e.from].push_back(e.to);
  auto scc = scc_graph(adj);
  g.scc_of = scc.comp_of;
  std::vector<uint32_t> mask(scc.components.size(), 0);
  for (const auto& e : g.edges)
    if (scc.comp_of[e.from] == scc.comp_of[e.to])
      for (int j = 0; j < k; ++j)
        if (g.nondet_[e.moves[j]]) mask[scc.comp_of[e.from]] |= 1u << j;
  g.diminishable.resize(g.nodes.size());
  for (size_t v = 0; v < g.nodes.size(); ++v) g.diminishable[v] = mask[scc.comp_of[v]];
  return g;
}

uint32_t diminishable_components(const RunAutomaton& g, int node) { return g.diminishable[node]; }

std::optional<NiceRun> nice_run(const Nfa& a, const Support& s, const Word& w, int k) {
  std::vector<int> kept;
  Nfa sub = restrict_transitions(a, s.keep, &kept);
  auto runs = accepting_runs(sub, w);
  if (runs.empty()) return std::nullopt;
  const int m = static_cast<int>(runs.size());
  if (m > k)
    throw Error(ErrorKind::Parameter, "word has " + std::to_string(m) + " accepting runs, more than k = " +
                                          std::to_string(k));
  NiceRun r;
  r.word = w;
  r.distinct = m;
  std::vector<std::vector<int>> seq;
  for (int j = 0; j < k; ++j) {
    const Run& src = runs[std::max(0, j - (k - m))];
    Run host_run;
    for (int t : src.transitions) host_run.transitions.push_back(kept[t]);
    seq.push_back(run_states(a, host_run));
    r.runs.push_back(std::move(host_run));
  }
  const size_t n = w.size();
  std::vector<StateSet> co(n + 1, StateSet(a.num_states()));
  co[n] = a.accepting_set();
  for (size_t i = n; i-- > 0;)
    for (int q = 0; q < sub.num_states(); ++q)
      for (int t : sub.out(q, w[i]))
        if (co[i + 1].test(sub.transition(t).dst)) co[i].set(q);
  StateSet reach(a.num_states());
  reach.set(a.initial());
  for (size_t i = 0; i <= n; ++i) {
    if (i > 0) reach = post(sub, reach, w[i - 1]);
    GammaState g;
    for (int j = 0; j < k; ++j) g.tuple.push_back(seq[j][i]);
    for (int j = 0; j + 1 < k; ++j)
      if (!std::equal(seq[j].begin(), seq[j].begin() + i + 1, seq[j + 1].begin())) g.cuts |= 1u << j;
    g.rejected = reach.minus(co[i]);
    r.states.push_back(std::move(g));
  }
  return r;
}

uint32_t bad_components(const RunAutomaton& g, const NiceRun& r) {
  uint32_t mask = 0;
  for (const auto& st : r.states) {
    int id = g.find(st);
    if (id < 0) throw Error(ErrorKind::Parameter, "nice run leaves the run automaton");
    mask |= g.diminishable[id];
  }
  return mask;
}

std::optional<Word> gamma_lasso_search(const RunAutomaton& g) {
  const uint32_t full = g.k == 32 ? ~0u : ((1u << g.k) - 1);
  std::unordered_map<uint64_t, std::pair<uint64_t, int>> parent;
  std::deque<uint64_t> queue;
  auto key = [](int node, uint32_t mask) { return (static_cast<uint64_t>(node) << 32) | mask; };
  uint64_t start = key(g.initial, g.diminishable[g.initial]);
  parent[start] = {start, -1};
  queue.push_back(start);
  while (!queue.empty()) {
    uint64_t cur = queue.front();
    queue.pop_front();
    int node = static_cast<int>(cur >> 32);
    uint32_t mask = static_cast<uint32_t>(cur);
    if (g.final[node] && mask == full) {
      Word w;
      for (uint64_t v = cur; v != start; v = parent[v].first) w.push_back(parent[v].second);
      return Word(w.rbegin(), w.rend());
    }
    for (int e : g.out[node]) {
      const auto& edge = g.edges[e];
      uint64_t nk = key(edge.to, mask | g.diminishable[edge.to]);
      if (parent.emplace(nk, std::make_pair(cur, edge.sym)).second) queue.push_back(nk);
    }
  }
  return std::nullopt;
}

std::string format_gamma_state(const Nfa& a, const GammaState& g) {
  std::string s = "((";
  for (size_t j = 0; j < g.tuple.size(); ++j) {
    if (j) s += ',';
    s += a.states()[g.tuple[j]];
    if (j + 1 < g.tuple.size() && ((g.cuts >> j) & 1u)) s += '|';
  }
  return s + ")," + format_set(a, g.rejected) + ")";
}

std::string gamma_to_dot(const RunAutomaton& g) {
  std::ostringstream os;
  os << "digraph gamma {\n  rankdir=LR;\n  node [shape=box];\n";
  for (size_t v = 0; v < g.nodes.size(); ++v) {
    os << "  n" << v << " [label=\"" << format_gamma_state(g.host, g.nodes[v]) << "\"";
    if (g.final[v]) os << ", peripheries=2";
    if (g.diminishable[v]) os << ", style=filled, fillcolor=\"#f4d6d6\"";
    os << "];\n";
  }
  os << "  __start [shape=point];\n  __start -> n" << g.initial << ";\n";
  for (const auto& e : g.edges)
    os << "  n" << e.from << " -> n" << e.to << " [label=\"" << g.host.alphabet()[e.sym] << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace resolvex
