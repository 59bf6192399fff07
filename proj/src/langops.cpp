#include "resolvex/langops.hpp"

#include <deque>
#include <unordered_map>

#include "resolvex/error.hpp"

namespace resolvex {

namespace {

struct PairKey {
  StateSet x, y;
  bool operator==(const PairKey& o) const { return x == o.x && y == o.y; }
};

struct PairKeyHash {
  size_t operator()(const PairKey& k) const { return k.x.hash() * 31 + k.y.hash(); }
};

StateSet initial_set(const Nfa& a) {
  StateSet s(a.num_states());
  s.set(a.initial());
  return s;
}

// Shortest word (BFS, symbols in order) reaching a pair where `bad` holds.
template <class Bad>
std::optional<Word> search_pairs(const Nfa& a, const Nfa& b, Bad bad) {
  const StateSet fa = a.accepting_set(), fb = b.accepting_set();
  std::vector<PairKey> nodes;
  std::vector<std::pair<int, int>> parent;  // (node, symbol)
  std::unordered_map<PairKey, int, PairKeyHash> index;
  std::deque<int> queue;
  auto push = [&](PairKey k, int from, int sym) {
    auto [it, fresh] = index.emplace(k, static_cast<int>(nodes.size()));
    if (!fresh) return -1;
    nodes.push_back(std::move(k));
    parent.emplace_back(from, sym);
    queue.push_back(it->second);
    return it->second;
  };
  push({initial_set(a), initial_set(b)}, -1, -1);
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    const PairKey cur = nodes[id];
    if (bad(cur.x.intersects(fa), cur.y.intersects(fb))) {
      Word w;
      for (int v = id; parent[v].first >= 0; v = parent[v].first) w.push_back(parent[v].second);
      return Word(w.rbegin(), w.rend());
    }
    for (int s = 0; s < a.num_symbols(); ++s) push({post(a, cur.x, s), post(b, cur.y, s)}, id, s);
  }
  return std::nullopt;
}

void require_same_alphabet(const Nfa& a, const Nfa& b) {
  if (a.alphabet() != b.alphabet())
    throw Error(ErrorKind::AlphabetMismatch,
                "alphabets of '" + a.name() + "' and '" + b.name() + "' differ");
}

}  // namespace

LanguageVerdict language_relation(const Nfa& a, const Nfa* b, LanguageMode mode) {
  LanguageVerdict v;
  std::optional<Word> w;
  switch (mode) {
    case LanguageMode::Empty:
      w = search_pairs(a, a, [](bool x, bool) { return x; });
      break;
    case LanguageMode::Universal:
      w = search_pairs(a, a, [](bool x, bool) { return !x; });
      break;
    case LanguageMode::Includes:
    case LanguageMode::Equivalent:
      if (!b) throw Error(ErrorKind::Parameter, "second automaton required");
      require_same_alphabet(a, *b);
      if (mode == LanguageMode::Includes)
        w = search_pairs(a, *b, [](bool x, bool y) { return y && !x; });
      else
        w = search_pairs(a, *b, [](bool x, bool y) { return x != y; });
      break;
  }
  v.holds = !w.has_value();
  v.counterexample = std::move(w);
  return v;
}

std::optional<LanguageMode> parse_language_mode(std::string_view s) {
  if (s == "empty") return LanguageMode::Empty;
  if (s == "universal") return LanguageMode::Universal;
  if (s == "includes") return LanguageMode::Includes;
  if (s == "equivalent") return LanguageMode::Equivalent;
  return std::nullopt;
}

int Support::size() const {
  int n = 0;
  for (bool k : keep) n += k;
  return n;
}

Support full_support(const Nfa& a) { return Support{std::vector<bool>(a.num_transitions(), true)}; }

Nfa apply_support(const Nfa& a, const Support& s) { return restrict_transitions(a, s.keep); }

bool covers_all_groups(const Nfa& a, const Support& s) {
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x) {
      const auto& out = a.out(q, x);
      if (out.empty()) continue;
      bool any = false;
      for (int t : out) any = any || s.keep[t];
      if (!any) return false;
    }
  return true;
}

bool preserves_language(const Nfa& a, const Support& s) {
  Nfa sub = apply_support(a, s);
  return language_relation(sub, &a, LanguageMode::Includes).holds;
}

std::vector<Support> enumerate_supports(const Nfa& a, size_t limit) {
  std::vector<std::vector<int>> groups;
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x)
      if (a.width(q, x) >= 2) groups.push_back(a.out(q, x));
  // digit i runs over nonempty masks of group i, full mask first
  std::vector<uint32_t> mask(groups.size());
  for (size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].size() > 20) throw Error(ErrorKind::Parameter, "nondeterministic width too large");
    mask[i] = (1u << groups[i].size()) - 1;
  }
  std::vector<Support> out;
  while (out.size() < limit) {
    Support s = full_support(a);
    for (size_t i = 0; i < groups.size(); ++i)
      for (size_t j = 0; j < groups[i].size(); ++j) s.keep[groups[i][j]] = (mask[i] >> j) & 1u;
    if (preserves_language(a, s)) out.push_back(std::move(s));
    size_t i = 0;
    while (i < groups.size() && mask[i] == 1) {
      mask[i] = (1u << groups[i].size()) - 1;
      ++i;
    }
    if (i == groups.size()) break;
    --mask[i];
  }
  return out;
}

std::string format_transition(const Nfa& a, int t) {
  const auto& tr = a.transition(t);
  return a.states()[tr.src] + "." + a.alphabet()[tr.sym] + "." + a.states()[tr.dst];
}

Support parse_support(const Nfa& a, std::string_view spec) {
  Support s = full_support(a);
  if (spec.empty() || spec == "full") return s;
  size_t start = 0;
  while (start <= spec.size()) {
    size_t comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = spec.substr(start, comma - start);
    if (!item.empty() && item[0] == '-') item.remove_prefix(1);
    bool found = false;
    for (int t = 0; t < a.num_transitions() && !found; ++t)
      if (format_transition(a, t) == item) {
        s.keep[t] = false;
        found = true;
      }
    if (!found) throw Error(ErrorKind::Parameter, "no transition '" + std::string(item) + "'");
    start = comma + 1;
  }
  if (!covers_all_groups(a, s))
    throw Error(ErrorKind::Parameter, "support leaves a (state, letter) pair without transitions");
  return s;
}

std::string format_support(const Nfa& a, const Support& s) {
  std::string out;
  for (int t = 0; t < a.num_transitions(); ++t)
    if (!s.keep[t]) out += (out.empty() ? "-" : ",-") + format_transition(a, t);
  return out.empty() ? "full" : out;
}

}  // namespace resolvex
