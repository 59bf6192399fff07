#include "resolvex/gens.hpp"

#include <map>
#include <numeric>
#include <sstream>

#include "resolvex/error.hpp"
#include "resolvex/langops.hpp"

namespace resolvex {

namespace {

void subsets(int n, int m, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == m) {
    out.push_back(cur);
    return;
  }
  for (int v = from; v <= n; ++v) {
    cur.push_back(v);
    subsets(n, m, v + 1, cur, out);
    cur.pop_back();
  }
}

class Builder {
 public:
  int state(const std::string& name, bool accept = false) {
    auto [it, fresh] = index_.emplace(name, static_cast<int>(states_.size()));
    if (fresh) {
      states_.push_back(name);
      accept_.push_back(accept);
    } else if (accept) {
      accept_[it->second] = true;
    }
    return it->second;
  }
  int symbol(const std::string& name) {
    auto [it, fresh] = sym_.emplace(name, static_cast<int>(alphabet_.size()));
    if (fresh) alphabet_.push_back(name);
    return it->second;
  }
  void trans(int src, int sym, int dst) { trans_.push_back({src, sym, dst}); }
  bool has(const std::string& name) const { return index_.count(name) > 0; }
  Nfa build(const std::string& name, int initial) {
    return Nfa(name, alphabet_, states_, initial, accept_, trans_);
  }

 private:
  std::vector<std::string> states_, alphabet_;
  std::vector<bool> accept_;
  std::vector<Transition> trans_;
  std::map<std::string, int> index_, sym_;
};

}  // namespace

Nfa gen_spectrum(int m, int n) {
  if (m <= 0 || n <= m || std::gcd(m, n) != 1)
    throw Error(ErrorKind::Parameter, "spectrum needs 0 < m < n with gcd(m, n) = 1");
  std::vector<std::vector<int>> subs;
  std::vector<int> cur;
  subsets(n, m, 1, cur, subs);
  if (subs.size() > 100000) throw Error(ErrorKind::Parameter, "too many subsets");
  Builder b;
  int a = b.symbol("a");
  int q0 = b.state("q0");
  for (int j = 1; j <= n; ++j) {
    int prev = q0;
    for (const auto& s : subs) {
      std::string name = "q" + std::to_string(j) + "_";
      for (size_t i = 0; i < s.size(); ++i) name += (i ? "-" : "") + std::to_string(s[i]);
      int q = b.state(name, std::find(s.begin(), s.end(), j) != s.end());
      b.trans(prev, a, q);
      prev = q;
    }
  }
  return b.build("spectrum_" + std::to_string(m) + "_" + std::to_string(n), q0);
}

Nfa gen_unary_hardness(const std::vector<UnaryCycle>& cycles) {
  if (cycles.empty()) throw Error(ErrorKind::Parameter, "at least one cycle is required");
  Builder b;
  int a = b.symbol("a");
  int q0 = b.state("q0", true);
  for (size_t j = 0; j < cycles.size(); ++j) {
    const auto& c = cycles[j];
    if (c.length <= 0) throw Error(ErrorKind::Parameter, "cycle length must be positive");
    std::vector<int> ids;
    for (int i = 0; i < c.length; ++i) ids.push_back(b.state("c" + std::to_string(j + 1) + "_" + std::to_string(i)));
    for (int pos : c.accepting) {
      if (pos < 0 || pos >= c.length) throw Error(ErrorKind::Parameter, "accepting position out of range");
      b.state("c" + std::to_string(j + 1) + "_" + std::to_string(pos), true);
    }
    b.trans(q0, a, ids[1 % c.length]);
    for (int i = 0; i < c.length; ++i) b.trans(ids[i], a, ids[(i + 1) % c.length]);
  }
  int t1 = b.state("t1", true), t2 = b.state("t2"), t3 = b.state("t3", true);
  b.trans(q0, a, t1);
  b.trans(q0, a, t2);
  b.trans(t2, a, t2);
  b.trans(t2, a, t3);
  return b.build("unary_hard", q0);
}

std::vector<UnaryCycle> parse_cycles(std::string_view spec) {
  std::vector<UnaryCycle> out;
  std::stringstream ss{std::string(spec)};
  std::string part;
  auto bad = [&](const std::string& why) {
    throw Error(ErrorKind::Syntax, "cycle spec '" + std::string(spec) + "': " + why);
  };
  while (std::getline(ss, part, ';')) {
    if (part.empty()) continue;
    auto colon = part.find(':');
    UnaryCycle c;
    try {
      c.length = std::stoi(part.substr(0, colon));
    } catch (const std::exception&) {
      bad("bad length");
    }
    if (c.length <= 0) bad("length must be positive");
    std::string pos = colon == std::string::npos ? "*" : part.substr(colon + 1);
    if (pos == "*") {
      for (int i = 0; i < c.length; ++i) c.accepting.push_back(i);
    } else {
      std::stringstream ps(pos);
      std::string tok;
      while (std::getline(ps, tok, ',')) {
        if (tok.empty()) continue;
        try {
          c.accepting.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          bad("bad position '" + tok + "'");
        }
      }
    }
    out.push_back(std::move(c));
  }
  if (out.empty()) bad("no cycles");
  return out;
}

Nfa gen_pspace_hardness(const std::vector<Nfa>& dfas) {
  if (dfas.empty()) throw Error(ErrorKind::Parameter, "at least one DFA is required");
  Builder b;
  int a = b.symbol("a"), bs = b.symbol("b");
  int t0 = b.state("t0", true), t1 = b.state("t1", true), t2 = b.state("t2", true), t3 = b.state("t3", true);
  std::vector<Transition> gadget = {{t1, a, t1}, {t2, a, t2}, {t2, a, t3}, {t3, bs, t3}, {t3, bs, t2}};
  for (size_t i = 0; i < dfas.size(); ++i) {
    const Nfa& d = dfas[i];
    if (d.num_symbols() != 2 || d.find_symbol("a") < 0 || d.find_symbol("b") < 0)
      throw Error(ErrorKind::AlphabetMismatch, "'" + d.name() + "' is not over {a,b}");
    if (!d.is_deterministic()) throw Error(ErrorKind::NonDeterministic, "'" + d.name() + "' is not deterministic");
    const std::string prefix = "d" + std::to_string(i + 1) + ":";
    std::vector<int> ids;
    for (int q = 0; q < d.num_states(); ++q) ids.push_back(b.state(prefix + d.states()[q], d.is_accepting(q)));
    gadget.push_back({t1, bs, ids[d.initial()]});
    for (const auto& tr : d.transitions())
      b.trans(ids[tr.src], d.alphabet()[tr.sym] == "a" ? a : bs, ids[tr.dst]);
  }
  for (const auto& tr : gadget) {
    b.trans(tr.src, tr.sym, tr.dst);
    if (tr.src != t0) b.trans(t0, tr.sym, tr.dst);
  }
  return trim(b.build("pspace_hard", t0));
}

SimplePfaCheck unique_simple_pfa(const Nfa& a) {
  SimplePfaCheck c;
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x)
      if (a.width(q, x) > 2) return c;
  std::vector<Rational> w(a.num_transitions());
  for (int t = 0; t < a.num_transitions(); ++t) w[t] = a.nondeterministic(t) ? Rational(1, 2) : Rational(1);
  c.is_simple_unique = true;
  c.pfa = Pfa{a, std::move(w)};
  return c;
}

Nfa gen_undecidability(const Pfa& p) {
  const Nfa& host = p.host;
  if (!p.is_simple()) throw Error(ErrorKind::NonSimple, "'" + host.name() + "' is not a simple pfa");
  auto uni = language_relation(host, nullptr, LanguageMode::Universal);
  if (!uni.holds)
    throw Error(ErrorKind::NonUniversal,
                "'" + host.name() + "' rejects " + format_word(host, *uni.counterexample));
  Builder b;
  for (const auto& s : host.alphabet()) b.symbol(s);
  for (const auto& q : host.states()) b.symbol("st:" + q);
  for (int t = 0; t < host.num_transitions(); ++t) b.symbol("tr:" + format_transition(host, t));
  for (int i = 0; i <= 6; ++i) b.symbol("$" + std::to_string(i));
  auto sym = [&](const std::string& s) { return b.symbol(s); };

  std::vector<int> hq;
  for (int q = 0; q < host.num_states(); ++q) {
    if (host.states()[q].rfind("g:", 0) == 0)
      throw Error(ErrorKind::Parameter, "host state names must not start with 'g:'");
    hq.push_back(b.state(host.states()[q], host.is_accepting(q)));
  }
  int init = b.state("g:init"), x = b.state("g:x"), y = b.state("g:y");
  int d3 = b.state("g:d3"), d4 = b.state("g:d4"), d5 = b.state("g:d5"), d6 = b.state("g:d6");
  int fin = b.state("g:fin", true);
  int e1 = b.state("g:E1", true), e2 = b.state("g:E2", true), e3 = b.state("g:E3", true);
  int xq0 = b.state("g:X"), ef = b.state("g:Ef", true);

  b.trans(init, sym("$0"), x);
  b.trans(init, sym("$0"), y);
  b.trans(x, sym("$1"), d3);
  b.trans(x, sym("$1"), d4);
  b.trans(y, sym("$2"), d5);
  b.trans(y, sym("$2"), d6);
  b.trans(d3, sym("$3"), fin);
  b.trans(d4, sym("$4"), fin);
  b.trans(d5, sym("$5"), fin);
  b.trans(d6, sym("$6"), fin);

  for (int q = 0; q < host.num_states(); ++q) {
    int s = sym("st:" + host.states()[q]);
    b.trans(x, s, q == host.initial() ? xq0 : e1);
    b.trans(y, s, hq[q]);
  }
  for (int c = 0; c < host.num_symbols(); ++c) {
    b.trans(e1, c, e2);
    b.trans(e2, c, e3);
    b.trans(e3, c, e3);
    b.trans(xq0, c, xq0);
  }
  for (int t = 0; t < host.num_transitions(); ++t) {
    int s = sym("tr:" + format_transition(host, t));
    b.trans(e1, s, ef);
    b.trans(e3, s, ef);
    b.trans(xq0, s, ef);
  }
  for (int t = 0; t < host.num_transitions(); ++t) {
    const auto& tr = host.transition(t);
    b.trans(hq[tr.src], tr.sym, hq[tr.dst]);
    if (host.nondeterministic(t)) b.trans(hq[tr.dst], sym("tr:" + format_transition(host, t)), fin);
  }
  return b.build(host.name() + "_undec", init);
}

GadgetCheck validate_undecidability(const Nfa& g, const Pfa& p) {
  GadgetCheck c;
  const Nfa& host = p.host;
  const int want = host.num_symbols() + host.num_states() + host.num_transitions() + 7;
  if (g.num_symbols() != want) {
    c.ok = false;
    c.diagnostics.push_back("alphabet has " + std::to_string(g.num_symbols()) + " symbols, expected " +
                            std::to_string(want));
  }
  for (int q = 0; q < g.num_states(); ++q)
    for (int x = 0; x < g.num_symbols(); ++x)
      if (g.width(q, x) > 2) {
        c.ok = false;
        c.diagnostics.push_back("state " + g.states()[q] + " has " + std::to_string(g.width(q, x)) +
                                " transitions on " + g.alphabet()[x]);
      }
  for (int i = 0; i <= 6; ++i)
    if (g.find_symbol("$" + std::to_string(i)) < 0) {
      c.ok = false;
      c.diagnostics.push_back("missing symbol $" + std::to_string(i));
    }
  return c;
}

}  // namespace resolvex
