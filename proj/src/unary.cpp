#include "resolvex/unary.hpp"

#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "resolvex/error.hpp"

namespace resolvex {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

// Solves A X = B exactly; A square and nonsingular.
Matrix solve(Matrix a, Matrix b) {
  const size_t n = a.size();
  const size_t m = b.empty() ? 0 : b[0].size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error(ErrorKind::NumericalFailure, "singular linear system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    Rational inv = 1 / a[col][col];
    for (auto& v : a[col]) v *= inv;
    for (auto& v : b[col]) v *= inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (size_t j = 0; j < n; ++j) a[r][j] -= f * a[col][j];
      for (size_t j = 0; j < m; ++j) b[r][j] -= f * b[col][j];
    }
  }
  return b;
}

Matrix multiply(const Matrix& x, const Matrix& y) {
  const size_t n = x.size();
  Matrix z(n, std::vector<Rational>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (x[i][k] == 0) continue;
      for (size_t j = 0; j < n; ++j)
        if (y[k][j] != 0) z[i][j] += x[i][k] * y[k][j];
    }
  return z;
}

Matrix power(Matrix base, long long e) {
  const size_t n = base.size();
  Matrix r(n, std::vector<Rational>(n, 0));
  for (size_t i = 0; i < n; ++i) r[i][i] = 1;
  while (e > 0) {
    if (e & 1) r = multiply(r, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return r;
}

std::vector<std::vector<int>> support_graph(const Matrix& p) {
  std::vector<std::vector<int>> adj(p.size());
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < p.size(); ++j)
      if (p[i][j] != 0) adj[i].push_back(static_cast<int>(j));
  return adj;
}

std::vector<std::vector<int>> unary_graph(const Nfa& a, const Support& s) {
  std::vector<std::vector<int>> adj(a.num_states());
  for (int t = 0; t < a.num_transitions(); ++t)
    if (s.keep[t]) adj[a.transition(t).src].push_back(a.transition(t).dst);
  return adj;
}

// reached[k][q]: q is reachable from `start` at some length n = k + T*l with l <= d.
std::vector<std::vector<bool>> reach_by_residue(const std::vector<std::vector<int>>& adj,
                                                const std::vector<bool>& start, long long period) {
  const size_t d = adj.size();
  std::vector<std::vector<bool>> reached(period, std::vector<bool>(d, false));
  std::vector<bool> cur = start;
  const long long last = period - 1 + period * static_cast<long long>(d);
  for (long long n = 0; n <= last; ++n) {
    auto& row = reached[n % period];
    for (size_t q = 0; q < d; ++q)
      if (cur[q]) row[q] = true;
    std::vector<bool> nxt(d, false);
    for (size_t q = 0; q < d; ++q)
      if (cur[q])
        for (int r : adj[q]) nxt[r] = true;
    cur = std::move(nxt);
  }
  return reached;
}

std::vector<bool> in_bottom_cycle(const std::vector<std::vector<int>>& adj) {
  auto scc = scc_graph(adj);
  std::vector<bool> out(adj.size(), false);
  for (size_t q = 0; q < adj.size(); ++q) {
    int c = scc.comp_of[q];
    out[q] = scc.bottom[c] && scc.cyclic[c];
  }
  return out;
}

}  // namespace

void validate_chain(const MarkovChain& c) {
  const size_t d = c.p.size();
  if (d == 0) throw Error(ErrorKind::Parameter, "empty chain");
  if (c.init.size() != d) throw Error(ErrorKind::Parameter, "initial distribution has the wrong size");
  Rational total = 0;
  for (const auto& v : c.init) {
    if (v < 0) throw Error(ErrorKind::NotStochastic, "negative initial mass");
    total += v;
  }
  if (total != 1) throw Error(ErrorKind::NotStochastic, "initial distribution sums to " + to_string(total));
  for (size_t i = 0; i < d; ++i) {
    if (c.p[i].size() != d) throw Error(ErrorKind::Parameter, "row " + std::to_string(i) + " has the wrong size");
    Rational sum = 0;
    for (const auto& v : c.p[i]) {
      if (v < 0) throw Error(ErrorKind::NotStochastic, "negative entry in row " + std::to_string(i));
      sum += v;
    }
    if (sum != 1) throw Error(ErrorKind::NotStochastic, "row " + std::to_string(i) + " sums to " + to_string(sum));
  }
}

MarkovChain chain_from_pfa(const Pfa& pfa) {
  const Nfa& a = pfa.host;
  if (a.num_symbols() != 1) throw Error(ErrorKind::NotUnary, "'" + a.name() + "' has more than one letter");
  const int n = a.num_states();
  MarkovChain c;
  c.names = a.states();
  c.p.assign(n, std::vector<Rational>(n, 0));
  for (int t = 0; t < a.num_transitions(); ++t) c.p[a.transition(t).src][a.transition(t).dst] += pfa.weights[t];
  bool need_sink = false;
  for (int q = 0; q < n; ++q) need_sink = need_sink || a.out(q, 0).empty();
  if (need_sink) {
    c.names.push_back("sink");
    for (auto& row : c.p) row.push_back(0);
    c.p.push_back(std::vector<Rational>(n + 1, 0));
    c.p[n][n] = 1;
    for (int q = 0; q < n; ++q)
      if (a.out(q, 0).empty()) c.p[q][n] = 1;
  }
  c.init.assign(c.p.size(), 0);
  c.init[a.initial()] = 1;
  validate_chain(c);
  return c;
}

MarkovChain parse_chain(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  MarkovChain c;
  long long d = -1;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto tok = tokens(line);
    if (tok.empty()) continue;
    if (d < 0) {
      if (tok[0] == "pfa" || tok[0] == "nfa") {
        auto parsed = parse_automaton(text);
        if (!parsed.is_pfa()) throw Error(ErrorKind::Parameter, "expected a pfa or a matrix block");
        return chain_from_pfa(parsed.pfa());
      }
      if (tok[0] != "matrix" || tok.size() != 2) fail("expected 'matrix <d>'");
      try {
        d = std::stoll(tok[1]);
      } catch (const std::exception&) {
        fail("bad dimension '" + tok[1] + "'");
      }
      if (d <= 0 || d > 4096) fail("dimension out of range");
      continue;
    }
    std::vector<Rational> row;
    size_t first = 0;
    bool is_init = tok[0] == "init";
    if (is_init) {
      if (!c.init.empty()) fail("init given twice");
      if (!c.p.empty()) fail("init must precede the rows");
      first = 1;
    }
    for (size_t i = first; i < tok.size(); ++i) {
      try {
        row.push_back(parse_rational(tok[i]));
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    if (static_cast<long long>(row.size()) != d) fail("expected " + std::to_string(d) + " entries");
    if (is_init) c.init = std::move(row);
    else c.p.push_back(std::move(row));
  }
  if (d < 0) throw Error(ErrorKind::Syntax, "missing 'matrix <d>' header");
  if (static_cast<long long>(c.p.size()) != d) throw Error(ErrorKind::Syntax, "expected " + std::to_string(d) + " rows");
  if (c.init.empty()) {
    c.init.assign(d, 0);
    c.init[0] = 1;
  }
  for (long long i = 0; i < d; ++i) c.names.push_back("s" + std::to_string(i));
  validate_chain(c);
  return c;
}

long long graph_period(const std::vector<std::vector<int>>& adj, long long cap) {
  auto scc = scc_graph(adj);
  long long period = 1;
  std::vector<long long> level(adj.size(), -1);
  for (size_t c = 0; c < scc.components.size(); ++c) {
    if (!scc.cyclic[c]) continue;
    const auto& comp = scc.components[c];
    std::deque<int> queue{comp[0]};
    level[comp[0]] = 0;
    long long g = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (scc.comp_of[v] != static_cast<int>(c)) continue;
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        } else {
          g = std::gcd(g, std::llabs(level[u] + 1 - level[v]));
        }
      }
    }
    period = std::lcm(period, std::max(g, 1LL));
    if (period > cap)
      throw Error(ErrorKind::PeriodTooLarge, "period exceeds " + std::to_string(cap));
  }
  return period;
}

long long global_period(const Nfa& a, const Support& s, long long cap) {
  return graph_period(unary_graph(a, s), cap);
}

MarkovLimitReport markov_limits(const MarkovChain& c, long long period_cap) {
  validate_chain(c);
  const size_t d = c.p.size();
  MarkovLimitReport rep;
  auto adj = support_graph(c.p);
  rep.period = graph_period(adj, period_cap);
  const long long T = rep.period;
  Matrix b = power(c.p, T);
  auto bscc = scc_graph(support_graph(b));
  rep.class_of.assign(d, -1);
  std::map<int, int> class_id;
  for (size_t q = 0; q < d; ++q) {
    int comp = bscc.comp_of[q];
    if (!bscc.bottom[comp]) continue;
    auto [it, fresh] = class_id.emplace(comp, static_cast<int>(rep.classes.size()));
    if (fresh) rep.classes.push_back({});
    rep.classes[it->second].push_back(static_cast<int>(q));
    rep.class_of[q] = it->second;
  }
  for (size_t q = 0; q < d; ++q)
    if (rep.class_of[q] < 0) rep.transient.push_back(static_cast<int>(q));
  const size_t nc = rep.classes.size();

  for (const auto& cls : rep.classes) {
    const size_t s = cls.size();
    // tau (B_S - I) = 0 with sum 1, transposed
    Matrix a(s, std::vector<Rational>(s, 0));
    Matrix rhs(s, std::vector<Rational>(1, 0));
    for (size_t i = 0; i < s; ++i)
      for (size_t j = 0; j < s; ++j) a[i][j] = b[cls[j]][cls[i]] - (i == j ? 1 : 0);
    for (size_t j = 0; j < s; ++j) a[s - 1][j] = 1;
    rhs[s - 1][0] = 1;
    Matrix tau = solve(std::move(a), std::move(rhs));
    std::vector<Rational> dense(d, 0);
    for (size_t i = 0; i < s; ++i) dense[cls[i]] = tau[i][0];
    rep.stationary.push_back(std::move(dense));
  }

  const size_t nt = rep.transient.size();
  if (nt > 0) {
    Matrix a(nt, std::vector<Rational>(nt, 0));
    Matrix r(nt, std::vector<Rational>(nc, 0));
    for (size_t i = 0; i < nt; ++i) {
      for (size_t j = 0; j < nt; ++j) a[i][j] = (i == j ? 1 : 0) - b[rep.transient[i]][rep.transient[j]];
      for (size_t q = 0; q < d; ++q)
        if (rep.class_of[q] >= 0) r[i][rep.class_of[q]] += b[rep.transient[i]][q];
    }
    rep.absorption = solve(std::move(a), std::move(r));
  }

  std::vector<Rational> j = c.init;
  for (long long k = 0; k < T; ++k) {
    std::vector<Rational> theta(nc, 0);
    for (size_t i = 0; i < nt; ++i)
      for (size_t ci = 0; ci < nc; ++ci) theta[ci] += j[rep.transient[i]] * rep.absorption[i][ci];
    for (size_t q = 0; q < d; ++q)
      if (rep.class_of[q] >= 0) theta[rep.class_of[q]] += j[q];
    std::vector<Rational> pi(d, 0);
    for (size_t ci = 0; ci < nc; ++ci)
      for (size_t q = 0; q < d; ++q) pi[q] += theta[ci] * rep.stationary[ci][q];
    rep.masses.push_back(std::move(theta));
    rep.limits.push_back(std::move(pi));
    std::vector<Rational> nxt(d, 0);
    for (size_t q = 0; q < d; ++q) {
      if (j[q] == 0) continue;
      for (size_t r = 0; r < d; ++r)
        if (c.p[q][r] != 0) nxt[r] += j[q] * c.p[q][r];
    }
    j = std::move(nxt);
  }
  return rep;
}

std::vector<std::vector<bool>> limit_support_by_graph(const MarkovChain& c, long long period) {
  auto adj = support_graph(c.p);
  std::vector<bool> start(c.p.size());
  for (size_t q = 0; q < c.p.size(); ++q) start[q] = c.init[q] != 0;
  auto reached = reach_by_residue(adj, start, period);
  auto bottom = in_bottom_cycle(adj);
  for (auto& row : reached)
    for (size_t q = 0; q < row.size(); ++q) row[q] = row[q] && bottom[q];
  return reached;
}

LengthProfile accepted_length_profile(const Nfa& a, const Support& s, long long period_cap) {
  if (a.num_symbols() != 1) throw Error(ErrorKind::NotUnary, "'" + a.name() + "' has more than one letter");
  Nfa sub = restrict_transitions(a, s.keep);
  LengthProfile p;
  p.period = global_period(a, s, period_cap);
  std::map<StateSet, long long> seen;
  std::vector<StateSet> seq;
  StateSet cur(a.num_states());
  cur.set(a.initial());
  while (!seen.count(cur)) {
    seen[cur] = static_cast<long long>(seq.size());
    seq.push_back(cur);
    cur = post(sub, cur, 0);
  }
  p.transient = seen[cur];
  p.cycle = static_cast<long long>(seq.size()) - p.transient;
  const StateSet acc = a.accepting_set();
  for (long long j = 0; j < p.cycle; ++j)
    if (seq[p.transient + j].intersects(acc)) p.accepted_in_cycle.push_back(j);
  const long long g = std::gcd(p.cycle, p.period);
  p.infinite.assign(p.period, false);
  for (long long k = 0; k < p.period; ++k) {
    for (long long j : p.accepted_in_cycle) {
      long long diff = ((k - p.transient - j) % g + g) % g;
      if (diff == 0) p.infinite[k] = true;
    }
    if (!p.infinite[k]) p.finite_residues.push_back(k);
  }
  return p;
}

UnaryReport unary_check_pr(const Nfa& in, long long period_cap) {
  if (in.num_symbols() != 1) throw Error(ErrorKind::NotUnary, "'" + in.name() + "' has more than one letter");
  Nfa a = trim(in);
  UnaryReport rep;
  for (const Support& s : enumerate_supports(a)) {
    UnarySupportResult r;
    r.support = s;
    auto prof = accepted_length_profile(a, s, period_cap);
    r.period = prof.period;
    auto adj = unary_graph(a, s);
    std::vector<bool> start(a.num_states(), false);
    start[a.initial()] = true;
    auto reached = reach_by_residue(adj, start, prof.period);
    auto bottom = in_bottom_cycle(adj);
    for (long long k = 0; k < prof.period; ++k) {
      if (!prof.infinite[k]) continue;
      bool ok = false;
      for (int q = 0; q < a.num_states() && !ok; ++q) ok = a.is_accepting(q) && bottom[q] && reached[k][q];
      if (!ok) r.failing_residues.push_back(k);
    }
    if (r.passes() && !rep.good_support) rep.good_support = s;
    rep.supports.push_back(std::move(r));
  }
  rep.resolvable = rep.good_support.has_value();
  return rep;
}

}  // namespace resolvex
