#include "resolvex/fnfa.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <map>
#include <sstream>
#include <unordered_map>

#include "resolvex/ambiguity.hpp"
#include "resolvex/error.hpp"

namespace resolvex {

Word BadWordWitness::word() const {
  Word w;
  for (size_t i = 0; i < x.size(); ++i) {
    if (i > 0) w.insert(w.end(), y[i - 1].begin(), y[i - 1].end());
    w.insert(w.end(), x[i].begin(), x[i].end());
  }
  return w;
}

size_t BadWordWitness::y_start(int i) const {
  size_t pos = 0;
  for (int j = 0; j <= i; ++j) pos += x[j].size();
  for (int j = 0; j < i; ++j) pos += y[j].size();
  return pos;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

BadWordCheck verify_bad_word(const Nfa& a, const Support& s, const BadWordWitness& bw) {
  BadWordCheck res;
  auto& diag = res.diagnostics;
  const int l = bw.loops();
  if (l == 0) diag.push_back("structure: no y-block");
  if (static_cast<int>(bw.x.size()) != l + 1 || static_cast<int>(bw.q_sets.size()) != l ||
      static_cast<int>(bw.pivots.size()) != l || static_cast<int>(bw.r_sets.size()) != l)
    diag.push_back("structure: block and set counts disagree");
  for (const auto& y : bw.y)
    if (y.empty()) diag.push_back("structure: empty y-block");
  if (!diag.empty()) return res;

  std::vector<int> kept;
  Nfa sub = restrict_transitions(a, s.keep, &kept);
  std::vector<bool> nd(a.num_transitions(), false);
  for (int q = 0; q < sub.num_states(); ++q)
    for (int x = 0; x < sub.num_symbols(); ++x)
      if (sub.width(q, x) >= 2)
        for (int t : sub.out(q, x)) nd[kept[t]] = true;

  for (int i = 0; i < l; ++i)
    for (int q : bw.q_sets[i].elements()) {
      StateSet from(a.num_states());
      from.set(q);
      for (int x : bw.y[i]) from = post(sub, from, x);
      if (!from.test(q))
        diag.push_back("condition 3: y" + std::to_string(i + 1) + " does not loop " + a.states()[q]);
    }

  const Word w = bw.word();
  const size_t n = w.size();
  auto runs = accepting_runs(sub, w);
  if (runs.empty()) {
    diag.push_back("structure: word is rejected by the support automaton");
    return res;
  }
  if (l > static_cast<int>(runs.size())) diag.push_back("structure: more y-blocks than accepting runs");
  std::vector<std::vector<int>> seq;
  for (const auto& r : runs) seq.push_back(run_states(sub, r));

  std::vector<StateSet> reach(n + 1, StateSet(a.num_states())), co(n + 1, StateSet(a.num_states()));
  reach[0].set(a.initial());
  for (size_t i = 0; i < n; ++i) reach[i + 1] = post(sub, reach[i], w[i]);
  co[n] = a.accepting_set();
  for (size_t i = n; i-- > 0;)
    for (int q = 0; q < sub.num_states(); ++q)
      for (int t : sub.out(q, w[i]))
        if (co[i + 1].test(sub.transition(t).dst)) co[i].set(q);

  for (int i = 0; i < l; ++i) {
    const size_t st = bw.y_start(i), en = st + bw.y[i].size();
    const std::string tag = std::to_string(i + 1);
    StateSet live = reach[st];
    live &= co[st];
    if (!(live == bw.q_sets[i]))
      diag.push_back("condition 1: Q" + tag + " should be " + format_set(a, live));
    if (bw.pivots[i] < 0 || bw.pivots[i] >= a.num_states() || !bw.q_sets[i].test(bw.pivots[i]))
      diag.push_back("condition 1: pivot p" + tag + " not in Q" + tag);
    for (size_t r = 0; r < runs.size(); ++r) {
      if (seq[r][en] != seq[r][st]) {
        diag.push_back("condition 3: run " + std::to_string(r + 1) + " leaves " +
                       a.states()[seq[r][st]] + " over y" + tag);
        continue;
      }
      if (seq[r][st] == bw.pivots[i]) {
        bool any = false;
        for (size_t j = st; j < en; ++j) any = any || nd[kept[runs[r].transitions[j]]];
        if (!any)
          diag.push_back("condition 3: loop of run " + std::to_string(r + 1) + " at p" + tag +
                         " is deterministic");
      }
    }
    StateSet dead1 = reach[st].minus(co[st]), dead2 = reach[en].minus(co[en]);
    if (!(dead1 == bw.r_sets[i]))
      diag.push_back("condition 4: R" + tag + " should be " + format_set(a, dead1) + " before y" + tag);
    if (!(dead2 == bw.r_sets[i]))
      diag.push_back("condition 4: R" + tag + " should be " + format_set(a, dead2) + " after y" + tag);
  }
  for (size_t r = 0; r < runs.size(); ++r) {
    bool covered = false;
    for (int i = 0; i < l && !covered; ++i) {
      size_t en = bw.y_start(i) + bw.y[i].size();
      covered = seq[r][en] == bw.pivots[i];
    }
    if (!covered) diag.push_back("condition 2: run " + std::to_string(r + 1) + " meets no pivot");
  }
  std::sort(diag.begin(), diag.end());
  diag.erase(std::unique(diag.begin(), diag.end()), diag.end());
  res.ok = diag.empty();
  return res;
}

namespace {

std::string word_text(const Nfa& a, const Word& w) { return w.empty() ? "eps" : format_word(a, w); }

}  // namespace

std::string format_witness(const Nfa& a, const BadWordWitness& w) {
  std::ostringstream os;
  for (int i = 0; i <= w.loops(); ++i) {
    if (i > 0) os << " y" << i << '=' << word_text(a, w.y[i - 1]) << ' ';
    os << 'x' << i << '=' << word_text(a, w.x[i]);
  }
  os << ';';
  for (int i = 0; i < w.loops(); ++i)
    os << " Q" << i + 1 << '=' << format_set(a, w.q_sets[i]) << " p" << i + 1 << '='
       << a.states()[w.pivots[i]] << " R" << i + 1 << '=' << format_set(a, w.r_sets[i]);
  return os.str();
}

BadWordWitness parse_witness(const Nfa& a, std::string_view text) {
  std::map<std::string, std::string> fields;
  std::istringstream in{std::string(text)};
  for (std::string tok; in >> tok;) {
    while (!tok.empty() && tok.back() == ';') tok.pop_back();
    if (tok.empty()) continue;
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Syntax, "bad witness field '" + tok + "'");
    fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto set_of = [&](const std::string& v) {
    if (v.size() < 2 || v.front() != '{' || v.back() != '}')
      throw Error(ErrorKind::Syntax, "bad state set '" + v + "'");
    StateSet s(a.num_states());
    std::string body = v.substr(1, v.size() - 2);
    std::istringstream parts(body);
    for (std::string name; std::getline(parts, name, ',');) {
      int q = a.find_state(name);
      if (q < 0) throw Error(ErrorKind::UnknownState, "unknown state '" + name + "'");
      s.set(q);
    }
    return s;
  };
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorKind::Syntax, "witness lacks " + key);
    return it->second;
  };
  BadWordWitness w;
  w.x.push_back(parse_word(a, need("x0")));
  for (int i = 1; fields.count("y" + std::to_string(i)); ++i) {
    const std::string t = std::to_string(i);
    w.y.push_back(parse_word(a, fields["y" + t]));
    w.x.push_back(parse_word(a, need("x" + t)));
    w.q_sets.push_back(set_of(need("Q" + t)));
    int p = a.find_state(need("p" + t));
    if (p < 0) throw Error(ErrorKind::UnknownState, "unknown pivot '" + need("p" + t) + "'");
    w.pivots.push_back(p);
    w.r_sets.push_back(set_of(need("R" + t)));
  }
  return w;
}

namespace {

struct AbsState {
  bool looping = false;
  StateSet A, G, R;
  // looping data
  StateSet L, R0;
  int pivot = -1;
  bool flag = false;
  std::vector<int> f;  // image of the i-th element of L

  std::string key() const {
    std::string k = looping ? "L" : "B";
    auto put = [&](const StateSet& s) {
      for (int q : s.elements()) k += std::to_string(q) + ",";
      k += '/';
    };
    put(A);
    put(G);
    put(R);
    if (looping) {
      put(L);
      put(R0);
      k += std::to_string(pivot) + (flag ? "!" : ".");
      for (int v : f) k += std::to_string(v) + ",";
    }
    return k;
  }
};

constexpr int kEnter = -2;
constexpr int kExit = -3;

struct Search {
  const Nfa& a;
  std::vector<std::vector<std::vector<int>>> sout;
  std::vector<bool> nd_pair;  // (q * nsym + x) has >= 2 kept transitions
  StateSet acc;

  Search(const Nfa& host, const Support& s) : a(host), acc(host.accepting_set()) {
    sout.assign(a.num_states(), std::vector<std::vector<int>>(a.num_symbols()));
    nd_pair.assign(a.num_states() * a.num_symbols(), false);
    for (int q = 0; q < a.num_states(); ++q)
      for (int x = 0; x < a.num_symbols(); ++x) {
        for (int t : a.out(q, x))
          if (s.keep[t]) sout[q][x].push_back(a.transition(t).dst);
        nd_pair[q * a.num_symbols() + x] = sout[q][x].size() >= 2;
      }
  }

  StateSet post_s(const StateSet& from, int x) const {
    StateSet r(a.num_states());
    for (int q : from.elements())
      for (int d : sout[q][x]) r.set(d);
    return r;
  }

  template <class F>
  void successors(const AbsState& st, F emit) const {
    const int nsym = a.num_symbols();
    for (int x = 0; x < nsym; ++x) {
      StateSet both = st.A;
      both |= st.R;
      const StateSet all = post_s(both, x);
      const std::vector<int> options = post_s(st.A, x).minus(post_s(st.R, x)).elements();
      if (options.empty()) continue;
      if (options.size() > 24) throw Error(ErrorKind::StateBudgetExceeded, "too many successor choices");
      const auto aelems = st.A.elements();
      for (uint32_t m = 1; m < (1u << options.size()); ++m) {
        StateSet next(a.num_states());
        for (size_t i = 0; i < options.size(); ++i)
          if ((m >> i) & 1u) next.set(options[i]);
        bool ok = true;
        std::vector<int> image(a.num_states(), -1);
        for (int p : aelems) {
          int hits = 0;
          for (int d : sout[p][x])
            if (next.test(d)) {
              ++hits;
              image[p] = d;
            }
          ok = ok && hits >= 1 && (!st.looping || hits == 1);
        }
        if (!ok) continue;
        AbsState n;
        n.looping = st.looping;
        n.A = next;
        n.R = all.minus(next);
        n.G = post_s(st.G, x);
        n.G &= next;
        if (st.looping) {
          if (next.count() != st.A.count()) continue;  // merges
          n.L = st.L;
          n.R0 = st.R0;
          n.pivot = st.pivot;
          const auto lelems = st.L.elements();
          int pos = static_cast<int>(std::find(lelems.begin(), lelems.end(), st.pivot) - lelems.begin());
          n.flag = st.flag || nd_pair[st.f[pos] * nsym + x];
          n.f.resize(st.f.size());
          for (size_t i = 0; i < st.f.size(); ++i) n.f[i] = image[st.f[i]];
        }
        emit(n, x);
      }
    }
    if (!st.looping) {
      for (int p : st.G.elements()) {
        AbsState n = st;
        n.looping = true;
        n.L = st.A;
        n.R0 = st.R;
        n.pivot = p;
        n.flag = false;
        n.f = st.A.elements();
        emit(n, kEnter);
      }
    } else if (st.flag && st.R == st.R0 && st.A == st.L && st.f == st.L.elements()) {
      AbsState n;
      n.A = st.A;
      n.G = st.G;
      n.G.reset(st.pivot);
      n.R = st.R;
      emit(n, kExit);
    }
  }

  bool accepting(const AbsState& st) const {
    return !st.looping && !st.A.empty() && st.A.subset_of(acc) && st.G.empty() && !st.R.intersects(acc);
  }
};

}  // namespace

BadWordSearch fnfa_find_bad_word(const Nfa& a, const Support& s, size_t length_cap, size_t budget) {
  Search search(a, s);
  BadWordSearch out;
  std::vector<AbsState> nodes;
  std::vector<std::pair<int, int>> parent;
  std::vector<size_t> depth;
  std::unordered_map<std::string, int> index;
  std::deque<int> queue;
  auto intern = [&](AbsState st, int from, int label) {
    auto key = st.key();
    if (index.count(key)) return;
    if (nodes.size() >= budget) {
      out.truncated = true;
      return;
    }
    int id = static_cast<int>(nodes.size());
    index.emplace(std::move(key), id);
    nodes.push_back(std::move(st));
    parent.emplace_back(from, label);
    depth.push_back(from < 0 ? 0 : depth[from] + 1);
    queue.push_back(id);
  };
  AbsState init;
  init.A = StateSet(a.num_states());
  init.A.set(a.initial());
  init.G = init.A;
  init.R = StateSet(a.num_states());
  intern(init, -1, 0);
  int goal = -1;
  while (!queue.empty() && goal < 0) {
    int id = queue.front();
    queue.pop_front();
    if (search.accepting(nodes[id])) {
      goal = id;
      break;
    }
    if (length_cap && depth[id] >= length_cap) {
      out.truncated = true;
      continue;
    }
    const AbsState cur = nodes[id];
    search.successors(cur, [&](AbsState n, int label) { intern(std::move(n), id, label); });
  }
  out.explored = nodes.size();
  if (goal < 0) return out;

  std::vector<int> path;
  for (int v = goal; v > 0; v = parent[v].first) path.push_back(v);
  std::reverse(path.begin(), path.end());
  BadWordWitness w;
  w.x.emplace_back();
  bool in_loop = false;
  for (int v : path) {
    int label = parent[v].second;
    if (label == kEnter) {
      const AbsState& st = nodes[v];
      w.q_sets.push_back(st.L);
      w.pivots.push_back(st.pivot);
      w.r_sets.push_back(st.R0);
      w.y.emplace_back();
      in_loop = true;
    } else if (label == kExit) {
      w.x.emplace_back();
      in_loop = false;
    } else {
      (in_loop ? w.y.back() : w.x.back()).push_back(label);
    }
  }
  auto check = verify_bad_word(a, s, w);
  if (!check.ok) {
    std::string msg = "decoded witness fails verification:";
    for (const auto& d : check.diagnostics) msg += " " + d + ";";
    throw Error(ErrorKind::NumericalFailure, msg);
  }
  out.witness = std::move(w);
  return out;
}

FnfaReport fnfa_check_pr(const Nfa& in, size_t length_cap, int jobs, int degree_cap) {
  Nfa a = trim(in);
  auto cls = classify_ambiguity(a, degree_cap);
  if (cls.kind == AmbiguityClass::Infinite)
    throw Error(ErrorKind::InfiniteAmbiguity, "'" + a.name() + "' is not finitely ambiguous");
  FnfaReport rep;
  rep.degree = cls.degree;
  auto supports = enumerate_supports(a);
  rep.supports.resize(supports.size());
  auto run_one = [&](size_t i) {
    SupportVerdict v;
    v.support = supports[i];
    auto res = fnfa_find_bad_word(a, supports[i], length_cap);
    v.truncated = res.truncated;
    if (res.witness) {
      v.bad = Verdict::Yes;
      v.witness = std::move(res.witness);
    } else {
      v.bad = res.truncated ? Verdict::Unknown : Verdict::No;
    }
    rep.supports[i] = std::move(v);
  };
  if (jobs <= 1) {
    for (size_t i = 0; i < supports.size(); ++i) run_one(i);
  } else {
    for (size_t base = 0; base < supports.size(); base += jobs) {
      std::vector<std::future<void>> fs;
      for (size_t i = base; i < std::min(supports.size(), base + jobs); ++i)
        fs.push_back(std::async(std::launch::async, run_one, i));
      for (auto& f : fs) f.get();
    }
  }
  bool unknown = false;
  for (const auto& v : rep.supports) {
    if (v.bad == Verdict::No && !rep.good_support) rep.good_support = v.support;
    unknown = unknown || v.bad == Verdict::Unknown;
  }
  if (rep.good_support) {
    rep.resolvable = Verdict::Yes;
    rep.resolver = uniform_resolver(a, *rep.good_support);
  } else {
    rep.resolvable = unknown ? Verdict::Unknown : Verdict::No;
  }
  return rep;
}

}  // namespace resolvex
