#include "resolvex/nfa.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "resolvex/error.hpp"

namespace resolvex {

// ---- StateSet ----

bool StateSet::empty() const {
  for (auto w : w_)
    if (w) return false;
  return true;
}

int StateSet::count() const {
  int c = 0;
  for (auto w : w_) c += __builtin_popcountll(w);
  return c;
}

std::vector<int> StateSet::elements() const {
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (test(i)) out.push_back(i);
  return out;
}

bool StateSet::intersects(const StateSet& o) const {
  for (size_t i = 0; i < w_.size(); ++i)
    if (w_[i] & o.w_[i]) return true;
  return false;
}

bool StateSet::subset_of(const StateSet& o) const {
  for (size_t i = 0; i < w_.size(); ++i)
    if (w_[i] & ~o.w_[i]) return false;
  return true;
}

StateSet& StateSet::operator|=(const StateSet& o) {
  for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  return *this;
}

StateSet& StateSet::operator&=(const StateSet& o) {
  for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

StateSet StateSet::minus(const StateSet& o) const {
  StateSet r = *this;
  for (size_t i = 0; i < w_.size(); ++i) r.w_[i] &= ~o.w_[i];
  return r;
}

size_t StateSet::hash() const {
  size_t h = 1469598103934665603ull;
  for (auto w : w_) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

// ---- Nfa ----

Nfa::Nfa(std::string name, std::vector<std::string> alphabet, std::vector<std::string> states,
         int initial, std::vector<bool> accepting, std::vector<Transition> transitions)
    : name_(std::move(name)),
      alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      initial_(initial),
      accepting_(std::move(accepting)),
      trans_(std::move(transitions)) {
  const int n = num_states(), m = num_symbols();
  if (n == 0) throw Error(ErrorKind::Parameter, "automaton has no states");
  if (initial_ < 0 || initial_ >= n) throw Error(ErrorKind::Parameter, "initial state out of range");
  if (static_cast<int>(accepting_.size()) != n)
    throw Error(ErrorKind::Parameter, "accepting flags do not match state count");
  {
    std::vector<std::string> sorted = alphabet_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorKind::Parameter, "duplicate alphabet symbol");
    sorted = states_;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw Error(ErrorKind::DuplicateState, "duplicate state '" + *dup + "'");
  }
  out_.assign(static_cast<size_t>(n) * m, {});
  for (int i = 0; i < num_transitions(); ++i) {
    const auto& t = trans_[i];
    if (t.src < 0 || t.src >= n || t.dst < 0 || t.dst >= n || t.sym < 0 || t.sym >= m)
      throw Error(ErrorKind::Parameter, "transition index out of range");
    out_[t.src * m + t.sym].push_back(i);
  }
  for (auto& v : out_) {
    std::sort(v.begin(), v.end(), [&](int x, int y) { return trans_[x].dst < trans_[y].dst; });
    for (size_t j = 1; j < v.size(); ++j)
      if (trans_[v[j]].dst == trans_[v[j - 1]].dst) {
        const auto& t = trans_[v[j]];
        throw Error(ErrorKind::Syntax, "duplicate transition " + states_[t.src] + " " +
                                           alphabet_[t.sym] + " " + states_[t.dst]);
      }
  }
}

StateSet Nfa::accepting_set() const {
  StateSet s(num_states());
  for (int q = 0; q < num_states(); ++q)
    if (accepting_[q]) s.set(q);
  return s;
}

bool Nfa::is_deterministic() const {
  for (const auto& v : out_)
    if (v.size() > 1) return false;
  return true;
}

int Nfa::find_symbol(std::string_view s) const {
  for (int i = 0; i < num_symbols(); ++i)
    if (alphabet_[i] == s) return i;
  return -1;
}

int Nfa::find_state(std::string_view s) const {
  for (int i = 0; i < num_states(); ++i)
    if (states_[i] == s) return i;
  return -1;
}

int Nfa::find_transition(int src, int sym, int dst) const {
  for (int t : out(src, sym))
    if (trans_[t].dst == dst) return t;
  return -1;
}

bool Pfa::is_simple() const {
  for (const auto& w : weights)
    if (w != 0 && w != 1 && w != Rational(1, 2)) return false;
  return true;
}

Pfa ParsedAutomaton::pfa() const {
  if (!weights) throw Error(ErrorKind::Parameter, "automaton '" + nfa.name() + "' is not a pfa");
  return Pfa{nfa, *weights};
}

// ---- parsing ----

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> toks;
  std::istringstream in{std::string(line)};
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

[[noreturn]] void fail(ErrorKind k, int line, const std::string& msg) {
  throw Error(k, "line " + std::to_string(line) + ": " + msg);
}

}  // namespace

ParsedAutomaton parse_automaton(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  bool have_header = false, is_pfa = false, done = false, have_alphabet = false;
  std::string name;
  std::vector<std::string> alphabet, states;
  std::vector<bool> accepting;
  int initial = -1;
  std::vector<Transition> trans;
  std::vector<Rational> weights;
  std::vector<int> trans_line;
  std::unordered_map<std::string, int> state_ix, sym_ix;

  while (!done && std::getline(in, raw)) {
    ++lineno;
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (!have_header) {
      if ((kw != "nfa" && kw != "pfa") || tok.size() != 2)
        fail(ErrorKind::Syntax, lineno, "expected 'nfa <name>' or 'pfa <name>'");
      is_pfa = kw == "pfa";
      name = tok[1];
      have_header = true;
    } else if (kw == "alphabet") {
      if (have_alphabet) fail(ErrorKind::Syntax, lineno, "alphabet declared twice");
      if (!states.empty()) fail(ErrorKind::Syntax, lineno, "alphabet must precede states");
      have_alphabet = true;
      for (size_t i = 1; i < tok.size(); ++i) {
        if (sym_ix.count(tok[i])) fail(ErrorKind::Syntax, lineno, "duplicate symbol '" + tok[i] + "'");
        sym_ix[tok[i]] = static_cast<int>(alphabet.size());
        alphabet.push_back(tok[i]);
      }
    } else if (kw == "state") {
      if (tok.size() < 2) fail(ErrorKind::Syntax, lineno, "expected 'state <name> [init] [accept]'");
      if (state_ix.count(tok[1])) fail(ErrorKind::DuplicateState, lineno, "duplicate state '" + tok[1] + "'");
      int id = static_cast<int>(states.size());
      state_ix[tok[1]] = id;
      states.push_back(tok[1]);
      bool acc = false;
      for (size_t i = 2; i < tok.size(); ++i) {
        if (tok[i] == "init") {
          if (initial >= 0) fail(ErrorKind::Syntax, lineno, "second initial state '" + tok[1] + "'");
          initial = id;
        } else if (tok[i] == "accept") {
          acc = true;
        } else {
          fail(ErrorKind::Syntax, lineno, "unknown state flag '" + tok[i] + "'");
        }
      }
      accepting.push_back(acc);
    } else if (kw == "trans") {
      size_t want = is_pfa ? 5 : 4;
      if (tok.size() != want)
        fail(ErrorKind::Syntax, lineno,
             is_pfa ? "expected 'trans <src> <sym> <dst> <p/q>'" : "expected 'trans <src> <sym> <dst>'");
      auto s = state_ix.find(tok[1]);
      if (s == state_ix.end()) fail(ErrorKind::UnknownState, lineno, "unknown state '" + tok[1] + "'");
      auto a = sym_ix.find(tok[2]);
      if (a == sym_ix.end()) fail(ErrorKind::UnknownSymbol, lineno, "unknown symbol '" + tok[2] + "'");
      auto d = state_ix.find(tok[3]);
      if (d == state_ix.end()) fail(ErrorKind::UnknownState, lineno, "unknown state '" + tok[3] + "'");
      Transition t{s->second, a->second, d->second};
      for (const auto& o : trans)
        if (o == t) fail(ErrorKind::Syntax, lineno, "duplicate transition");
      trans.push_back(t);
      trans_line.push_back(lineno);
      if (is_pfa) {
        Rational p;
        try {
          p = parse_rational(tok[4]);
        } catch (const Error& e) {
          fail(ErrorKind::Syntax, lineno, e.what());
        }
        if (p <= 0 || p > 1) fail(ErrorKind::NotStochastic, lineno, "probability outside (0,1]");
        weights.push_back(p);
      }
    } else if (kw == "end") {
      if (tok.size() != 1) fail(ErrorKind::Syntax, lineno, "unexpected tokens after 'end'");
      done = true;
    } else {
      fail(ErrorKind::Syntax, lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!have_header) fail(ErrorKind::Syntax, lineno, "empty input");
  if (!done) fail(ErrorKind::Syntax, lineno, "missing 'end'");
  if (states.empty()) fail(ErrorKind::Syntax, lineno, "no states declared");
  if (initial < 0) fail(ErrorKind::Syntax, lineno, "no initial state");

  ParsedAutomaton out{Nfa(name, alphabet, states, initial, accepting, trans), std::nullopt};
  if (is_pfa) {
    const Nfa& a = out.nfa;
    for (int q = 0; q < a.num_states(); ++q)
      for (int s = 0; s < a.num_symbols(); ++s) {
        if (a.out(q, s).empty()) continue;
        Rational sum = 0;
        for (int t : a.out(q, s)) sum += weights[t];
        if (sum != 1)
          fail(ErrorKind::NotStochastic, trans_line[a.out(q, s).front()],
               "row (" + a.states()[q] + ", " + a.alphabet()[s] + ") sums to " + to_string(sum));
      }
    out.weights = std::move(weights);
  }
  return out;
}

Nfa parse_nfa(std::string_view text) { return parse_automaton(text).nfa; }

namespace {

void serialize_body(std::ostringstream& os, const Nfa& a, const std::vector<Rational>* w) {
  os << "alphabet";
  for (const auto& s : a.alphabet()) os << ' ' << s;
  os << '\n';
  for (int q = 0; q < a.num_states(); ++q) {
    os << "state " << a.states()[q];
    if (q == a.initial()) os << " init";
    if (a.is_accepting(q)) os << " accept";
    os << '\n';
  }
  for (int i = 0; i < a.num_transitions(); ++i) {
    const auto& t = a.transition(i);
    os << "trans " << a.states()[t.src] << ' ' << a.alphabet()[t.sym] << ' ' << a.states()[t.dst];
    if (w) os << ' ' << to_string((*w)[i]);
    os << '\n';
  }
  os << "end\n";
}

}  // namespace

std::string serialize(const Nfa& a) {
  std::ostringstream os;
  os << "nfa " << a.name() << '\n';
  serialize_body(os, a, nullptr);
  return os.str();
}

std::string serialize(const Pfa& p) {
  std::ostringstream os;
  os << "pfa " << p.host.name() << '\n';
  serialize_body(os, p.host, &p.weights);
  return os.str();
}

// ---- structure ----

StateSet post(const Nfa& a, const StateSet& s, int sym) {
  StateSet r(a.num_states());
  for (int q : s.elements())
    for (int t : a.out(q, sym)) r.set(a.transition(t).dst);
  return r;
}

StateSet reachable_states(const Nfa& a) {
  StateSet seen(a.num_states());
  std::vector<int> stack{a.initial()};
  seen.set(a.initial());
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int s = 0; s < a.num_symbols(); ++s)
      for (int t : a.out(q, s)) {
        int d = a.transition(t).dst;
        if (!seen.test(d)) {
          seen.set(d);
          stack.push_back(d);
        }
      }
  }
  return seen;
}

StateSet coreachable_states(const Nfa& a) {
  std::vector<std::vector<int>> pred(a.num_states());
  for (const auto& t : a.transitions()) pred[t.dst].push_back(t.src);
  StateSet seen(a.num_states());
  std::vector<int> stack;
  for (int q = 0; q < a.num_states(); ++q)
    if (a.is_accepting(q)) {
      seen.set(q);
      stack.push_back(q);
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : pred[q])
      if (!seen.test(p)) {
        seen.set(p);
        stack.push_back(p);
      }
  }
  return seen;
}

Nfa trim(const Nfa& a, std::vector<int>* kept) {
  StateSet useful = reachable_states(a);
  useful &= coreachable_states(a);
  useful.set(a.initial());
  std::vector<int> newix(a.num_states(), -1), old;
  for (int q = 0; q < a.num_states(); ++q)
    if (useful.test(q)) {
      newix[q] = static_cast<int>(old.size());
      old.push_back(q);
    }
  std::vector<std::string> states;
  std::vector<bool> acc;
  for (int q : old) {
    states.push_back(a.states()[q]);
    acc.push_back(a.is_accepting(q));
  }
  std::vector<Transition> trans;
  StateSet live = reachable_states(a);
  live &= coreachable_states(a);
  for (const auto& t : a.transitions())
    if (live.test(t.src) && live.test(t.dst)) trans.push_back({newix[t.src], t.sym, newix[t.dst]});
  if (kept) *kept = old;
  return Nfa(a.name(), a.alphabet(), states, newix[a.initial()], acc, trans);
}

bool is_trim(const Nfa& a) {
  StateSet useful = reachable_states(a);
  useful &= coreachable_states(a);
  if (useful.count() == a.num_states()) return true;
  // an automaton with empty language trims to its lone initial state
  return a.num_states() == 1 && a.num_transitions() == 0;
}

Nfa restrict_transitions(const Nfa& a, const std::vector<bool>& keep, std::vector<int>* kept) {
  std::vector<Transition> trans;
  std::vector<int> old;
  for (int i = 0; i < a.num_transitions(); ++i)
    if (keep[i]) {
      trans.push_back(a.transition(i));
      old.push_back(i);
    }
  if (kept) *kept = old;
  return Nfa(a.name(), a.alphabet(), a.states(), a.initial(), a.accepting(), trans);
}

SccDecomposition scc_graph(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  SccDecomposition d;
  d.comp_of.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on(n, false);
  int counter = 0;
  struct Frame { int v; size_t next; };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        int w = adj[f.v][f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        if (low[v] == index[v]) {
          int id = static_cast<int>(d.components.size());
          d.components.emplace_back();
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on[w] = false;
            d.comp_of[w] = id;
            d.components.back().push_back(w);
          } while (w != v);
          std::sort(d.components.back().begin(), d.components.back().end());
        }
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  const int c = static_cast<int>(d.components.size());
  d.succ.assign(c, {});
  d.cyclic.assign(c, false);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v]) {
      if (d.comp_of[v] == d.comp_of[w])
        d.cyclic[d.comp_of[v]] = true;
      else
        d.succ[d.comp_of[v]].push_back(d.comp_of[w]);
    }
  d.bottom.assign(c, false);
  for (int i = 0; i < c; ++i) {
    auto& s = d.succ[i];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    d.bottom[i] = s.empty();
  }
  return d;
}

SccDecomposition scc_decompose(const Nfa& a) {
  std::vector<std::vector<int>> adj(a.num_states());
  for (const auto& t : a.transitions()) adj[t.src].push_back(t.dst);
  return scc_graph(adj);
}

StateSet reach_after(const Nfa& a, const Word& w) {
  StateSet s(a.num_states());
  s.set(a.initial());
  for (int x : w) s = post(a, s, x);
  return s;
}

bool accepts(const Nfa& a, const Word& w) { return reach_after(a, w).intersects(a.accepting_set()); }

std::vector<Run> accepting_runs(const Nfa& a, const Word& w, size_t limit) {
  const size_t n = w.size();
  // co[i] = states from which w[i..] is accepted
  std::vector<StateSet> co(n + 1, StateSet(a.num_states()));
  co[n] = a.accepting_set();
  for (size_t i = n; i-- > 0;)
    for (int q = 0; q < a.num_states(); ++q)
      for (int t : a.out(q, w[i]))
        if (co[i + 1].test(a.transition(t).dst)) {
          co[i].set(q);
          break;
        }
  std::vector<Run> runs;
  if (!co[0].test(a.initial())) return runs;
  std::vector<int> path;
  std::function<void(int, size_t)> dfs = [&](int q, size_t i) {
    if (runs.size() >= limit) return;
    if (i == n) {
      runs.push_back(Run{path});
      return;
    }
    for (int t : a.out(q, w[i])) {
      int d = a.transition(t).dst;
      if (!co[i + 1].test(d)) continue;
      path.push_back(t);
      dfs(d, i + 1);
      path.pop_back();
    }
  };
  dfs(a.initial(), 0);
  return runs;
}

BigInt count_accepting_runs(const Nfa& a, const Word& w) {
  std::vector<BigInt> cur(a.num_states(), 0), nxt;
  cur[a.initial()] = 1;
  for (int x : w) {
    nxt.assign(a.num_states(), 0);
    for (int q = 0; q < a.num_states(); ++q) {
      if (cur[q] == 0) continue;
      for (int t : a.out(q, x)) nxt[a.transition(t).dst] += cur[q];
    }
    cur.swap(nxt);
  }
  BigInt total = 0;
  for (int q = 0; q < a.num_states(); ++q)
    if (a.is_accepting(q)) total += cur[q];
  return total;
}

std::vector<int> run_states(const Nfa& a, const Run& r) {
  std::vector<int> s{a.initial()};
  for (int t : r.transitions) s.push_back(a.transition(t).dst);
  return s;
}

// ---- words ----

namespace {

bool single_char_alphabet(const Nfa& a) {
  for (const auto& s : a.alphabet())
    if (s.size() != 1) return false;
  return true;
}

}  // namespace

Word parse_word(const Nfa& a, std::string_view text) {
  Word w;
  if (text.empty() || text == "eps") return w;
  auto lookup = [&](std::string_view sym) {
    int i = a.find_symbol(sym);
    if (i < 0) throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + std::string(sym) + "' in word");
    return i;
  };
  if (text.find(',') != std::string_view::npos || !single_char_alphabet(a)) {
    size_t start = 0;
    while (start <= text.size()) {
      size_t comma = text.find(',', start);
      if (comma == std::string_view::npos) comma = text.size();
      w.push_back(lookup(text.substr(start, comma - start)));
      start = comma + 1;
    }
    return w;
  }
  for (size_t i = 0; i < text.size(); ++i) w.push_back(lookup(text.substr(i, 1)));
  return w;
}

std::string format_word(const Nfa& a, const Word& w) {
  std::string out;
  bool single = single_char_alphabet(a);
  for (size_t i = 0; i < w.size(); ++i) {
    if (!single && i) out += ',';
    out += a.alphabet()[w[i]];
  }
  return out;
}

std::string format_set(const Nfa& a, const StateSet& s) {
  std::string out = "{";
  bool first = true;
  for (int q : s.elements()) {
    if (!first) out += ',';
    out += a.states()[q];
    first = false;
  }
  return out + "}";
}

std::string to_dot(const Nfa& a, const std::vector<Rational>* weights) {
  std::ostringstream os;
  os << "digraph \"" << a.name() << "\" {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (int q = 0; q < a.num_states(); ++q)
    os << "  s" << q << " [label=\"" << a.states()[q] << "\", shape="
       << (a.is_accepting(q) ? "doublecircle" : "circle") << "];\n";
  os << "  __start -> s" << a.initial() << ";\n";
  for (int i = 0; i < a.num_transitions(); ++i) {
    const auto& t = a.transition(i);
    os << "  s" << t.src << " -> s" << t.dst << " [label=\"" << a.alphabet()[t.sym];
    if (weights) os << ": " << to_string((*weights)[i]);
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

void for_each_word(int num_symbols, int max_len, const std::function<void(const Word&)>& f) {
  Word w;
  for (int len = 0; len <= max_len; ++len) {
    w.assign(len, 0);
    while (true) {
      f(w);
      int i = len - 1;
      while (i >= 0 && w[i] == num_symbols - 1) w[i--] = 0;
      if (i < 0) break;
      ++w[i];
    }
    if (num_symbols == 0) break;
  }
}

}  // namespace resolvex
