#include "resolvex/ambiguity.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "resolvex/error.hpp"

namespace resolvex {

const char* ambiguity_kind_name(AmbiguityClass::Kind k) {
  switch (k) {
    case AmbiguityClass::Unambiguous: return "Unambiguous";
    case AmbiguityClass::Finite: return "Finite";
    case AmbiguityClass::Infinite: return "Infinite";
  }
  return "?";
}

namespace {

// Tuples of states driven by a common word; nodes are encoded as vectors.
std::vector<std::vector<int>> tuple_successors(const Nfa& a, const std::vector<int>& t, int sym) {
  std::vector<std::vector<int>> out{{}};
  for (int q : t) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out)
      for (int tr : a.out(q, sym)) {
        auto v = prefix;
        v.push_back(a.transition(tr).dst);
        next.push_back(std::move(v));
      }
    out.swap(next);
    if (out.empty()) break;
  }
  return out;
}

bool tuple_reaches(const Nfa& a, const std::vector<int>& from, const std::vector<int>& to) {
  std::set<std::vector<int>> seen{from};
  std::vector<std::vector<int>> stack{from};
  while (!stack.empty()) {
    auto t = stack.back();
    stack.pop_back();
    for (int s = 0; s < a.num_symbols(); ++s)
      for (auto& n : tuple_successors(a, t, s)) {
        if (n == to) return true;
        if (seen.insert(n).second) stack.push_back(std::move(n));
      }
  }
  return false;
}

}  // namespace

bool is_unambiguous(const Nfa& in) {
  Nfa a = trim(in);
  const int n = a.num_states();
  // self-product: a reachable pair p != q that can still reach F x F
  std::vector<std::vector<int>> pred(n * n);
  std::vector<char> seen(n * n, 0);
  std::vector<int> stack{a.initial() * n + a.initial()};
  seen[stack.back()] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    int p = v / n, q = v % n;
    for (int s = 0; s < a.num_symbols(); ++s)
      for (int t1 : a.out(p, s))
        for (int t2 : a.out(q, s)) {
          int w = a.transition(t1).dst * n + a.transition(t2).dst;
          pred[w].push_back(v);
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
  }
  std::vector<char> co(n * n, 0);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (seen[p * n + q] && a.is_accepting(p) && a.is_accepting(q)) {
        co[p * n + q] = 1;
        stack.push_back(p * n + q);
      }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : pred[v])
      if (!co[u]) {
        co[u] = 1;
        stack.push_back(u);
      }
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q && seen[p * n + q] && co[p * n + q]) return false;
  return true;
}

bool is_infinitely_ambiguous(const Nfa& in) {
  Nfa a = trim(in);
  const int n = a.num_states();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q && tuple_reaches(a, {p, p, q}, {p, q, q})) return true;
  return false;
}

std::optional<Word> word_with_runs(const Nfa& in, int m) {
  Nfa a = trim(in);
  // node: sorted multiset of (state, class size); classes are run groups sharing a prefix
  using Node = std::vector<std::pair<int, int>>;
  std::map<Node, std::pair<int, int>> parent;  // node -> (parent id, symbol)
  std::vector<Node> nodes;
  std::map<Node, int> index;
  std::deque<int> queue;
  auto push = [&](Node nd, int from, int sym) {
    std::sort(nd.begin(), nd.end());
    if (index.count(nd)) return;
    int id = static_cast<int>(nodes.size());
    index[nd] = id;
    nodes.push_back(nd);
    parent[nd] = {from, sym};
    queue.push_back(id);
  };
  push({{a.initial(), m}}, -1, -1);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    const Node cur = nodes[id];
    bool done = true;
    for (auto [q, c] : cur) done = done && c == 1 && a.is_accepting(q);
    if (done) {
      Word w;
      for (int v = id;;) {
        auto [from, sym] = parent[nodes[v]];
        if (from < 0) break;
        w.push_back(sym);
        v = from;
      }
      return Word(w.rbegin(), w.rend());
    }
    for (int s = 0; s < a.num_symbols(); ++s) {
      // distribute each class over a subset of its successors, every chosen successor nonempty
      std::vector<Node> partial{{}};
      for (auto [q, c] : cur) {
        const auto& out = a.out(q, s);
        std::vector<Node> next;
        const int w = static_cast<int>(out.size());
        std::vector<int> parts(w, 0);
        std::function<void(int, int)> rec = [&](int i, int left) {
          if (i == w) {
            if (left) return;
            for (const auto& pre : partial) {
              Node nd = pre;
              for (int j = 0; j < w; ++j)
                if (parts[j]) nd.push_back({a.transition(out[j]).dst, parts[j]});
              next.push_back(std::move(nd));
            }
            return;
          }
          for (int k = 0; k <= left; ++k) {
            parts[i] = k;
            rec(i + 1, left - k);
          }
          parts[i] = 0;
        };
        rec(0, c);
        partial.swap(next);
        if (partial.empty()) break;
      }
      for (auto& nd : partial) push(std::move(nd), id, s);
    }
  }
  return std::nullopt;
}

AmbiguityClass classify_ambiguity(const Nfa& in, int degree_cap) {
  Nfa a = trim(in);
  AmbiguityClass c;
  if (is_unambiguous(a)) {
    c.kind = AmbiguityClass::Unambiguous;
    c.degree = 1;
    return c;
  }
  if (is_infinitely_ambiguous(a)) {
    c.kind = AmbiguityClass::Infinite;
    c.degree = 0;
    return c;
  }
  c.kind = AmbiguityClass::Finite;
  c.witness = word_with_runs(a, 2);
  int m = 2;
  while (true) {
    auto w = word_with_runs(a, m + 1);
    if (!w) break;
    ++m;
    c.witness = std::move(w);
    if (m > degree_cap)
      throw Error(ErrorKind::DegreeCapExceeded,
                  "ambiguity degree exceeds cap " + std::to_string(degree_cap));
  }
  c.degree = m;
  return c;
}

}  // namespace resolvex
