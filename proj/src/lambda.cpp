#include "resolvex/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "lp.hpp"
#include "resolvex/ambiguity.hpp"
#include "resolvex/error.hpp"
#include "resolvex/ufa.hpp"

namespace resolvex {

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms) d = std::max(d, static_cast<int>(m.size()));
  return d;
}

Rational Polynomial::eval(const std::vector<Rational>& x) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms) {
    Rational p = c;
    for (int v : m) p *= x[v];
    sum += p;
  }
  return sum;
}

double Polynomial::eval(const std::vector<double>& x) const {
  double sum = 0;
  for (const auto& [m, c] : terms) {
    double p = static_cast<double>(c);
    for (int v : m) p *= x[v];
    sum += p;
  }
  return sum;
}

void Polynomial::add_gradient(const std::vector<double>& x, std::vector<double>& grad) const {
  for (const auto& [m, c] : terms)
    for (size_t i = 0; i < m.size(); ++i) {
      if (i > 0 && m[i] == m[i - 1]) continue;
      double p = static_cast<double>(c);
      bool skipped = false;
      int mult = 0;
      for (size_t j = 0; j < m.size(); ++j) {
        if (m[j] == m[i]) ++mult;
        if (m[j] == m[i] && !skipped) {
          skipped = true;
          continue;
        }
        p *= x[m[j]];
      }
      grad[m[i]] += mult * p;
    }
}

VariableMap support_variables(const Nfa& a, const Support& s) {
  VariableMap v;
  v.of.assign(a.num_transitions(), -1);
  for (int q = 0; q < a.num_states(); ++q)
    for (int x = 0; x < a.num_symbols(); ++x) {
      std::vector<int> kept;
      for (int t : a.out(q, x))
        if (s.keep[t]) kept.push_back(t);
      if (kept.size() < 2) continue;
      std::vector<int> row;
      for (int t : kept) {
        v.of[t] = static_cast<int>(v.transitions.size());
        row.push_back(v.of[t]);
        v.transitions.push_back(t);
      }
      v.groups.push_back(std::move(row));
    }
  return v;
}

namespace {

int default_k(const Nfa& a, int k) {
  if (k > 0) return k;
  auto cls = classify_ambiguity(a);
  if (cls.kind == AmbiguityClass::Infinite)
    throw Error(ErrorKind::InfiniteAmbiguity, "'" + a.name() + "' is not finitely ambiguous");
  return cls.degree;
}

struct Shortlex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace

PrimitiveWords enumerate_primitive_words(const Nfa& a, const Support& s, size_t length_cap, int k,
                                         size_t step_budget) {
  PrimitiveWords out;
  out.k = default_k(a, k);
  RunAutomaton g = build_run_automaton(a, s, out.k);
  out.gamma_nodes = g.nodes.size();
  size_t cap = length_cap ? length_cap : g.nodes.size();
  if (cap + 1 < g.nodes.size()) {
    out.truncated = true;
    out.warnings.push_back("CapTooSmall: length cap " + std::to_string(cap) + " is below the " +
                           std::to_string(g.nodes.size() - 1) + " bound from the run automaton");
  }

  std::set<Word, Shortlex> words;
  std::vector<bool> on_path(g.nodes.size(), false);
  std::vector<std::pair<int, size_t>> stack{{g.initial, 0}};
  Word w;
  on_path[g.initial] = true;
  if (g.final[g.initial]) words.insert(w);
  size_t steps = 0;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next == g.out[node].size() || w.size() >= cap) {
      on_path[node] = false;
      stack.pop_back();
      if (!w.empty() && !stack.empty()) w.pop_back();
      continue;
    }
    const GammaEdge& e = g.edges[g.out[node][next++]];
    if (++steps > step_budget) {
      out.truncated = true;
      out.warnings.push_back("path enumeration stopped after " + std::to_string(step_budget) + " steps");
      break;
    }
    if (on_path[e.to]) continue;
    on_path[e.to] = true;
    w.push_back(e.sym);
    if (g.final[e.to]) words.insert(w);
    stack.emplace_back(e.to, 0);
  }

  VariableMap vars = support_variables(a, s);
  std::map<Polynomial, size_t> seen;
  for (const Word& word : words) {
    auto nr = nice_run(a, s, word, out.k);
    if (!nr) continue;
    std::unordered_set<std::string> keys;
    bool acyclic = true;
    for (const auto& st : nr->states)
      if (!keys.insert(gamma_key(st)).second) {
        acyclic = false;
        break;
      }
    if (!acyclic) continue;
    PrimitiveWord p;
    p.word = word;
    p.bad_set = bad_components(g, *nr);
    const int first = out.k - nr->distinct;
    for (int i = 0; i < nr->distinct; ++i) {
      if ((p.bad_set >> (first + i)) & 1u) continue;
      Monomial m;
      for (int t : nr->runs[first + i].transitions)
        if (vars.of[t] >= 0) m.push_back(vars.of[t]);
      std::sort(m.begin(), m.end());
      p.z.terms[m] += 1;
      p.monomials.push_back(std::move(m));
    }
    p.nice = std::move(*nr);
    auto [it, fresh] = seen.emplace(p.z, out.words.size());
    if (fresh) out.words.push_back(std::move(p));
    else out.words[it->second].aliases.push_back(word);
  }
  return out;
}

uint32_t compute_bad_set(const Nfa& a, const Support& s, const Word& w, int k) {
  k = default_k(a, k);
  RunAutomaton g = build_run_automaton(a, s, k);
  auto nr = nice_run(a, s, w, k);
  if (!nr) throw Error(ErrorKind::Parameter, "word is rejected by the support automaton");
  return bad_components(g, *nr);
}

bool ConstraintSystem::linear() const {
  for (const auto& w : words)
    if (w.z.degree() > 1) return false;
  return true;
}

Rational ConstraintSystem::min_value(const std::vector<Rational>& x) const {
  Rational best = 1;
  for (const auto& w : words) best = std::min(best, w.z.eval(x));
  return best;
}

double ConstraintSystem::min_value(const std::vector<double>& x) const {
  double best = 1;
  for (const auto& w : words) best = std::min(best, w.z.eval(x));
  return best;
}

ConstraintSystem build_constraints(const Nfa& a, const Support& s, std::optional<Rational> lambda,
                                   size_t length_cap) {
  ConstraintSystem c;
  c.host = a;
  c.support = s;
  c.vars = support_variables(a, s);
  c.lambda = std::move(lambda);
  auto prim = enumerate_primitive_words(a, s, length_cap);
  c.truncated = prim.truncated;
  c.warnings = prim.warnings;
  for (auto& p : prim.words) c.words.push_back({p.word, p.aliases, p.z});
  return c;
}

Resolver resolver_from_point(const ConstraintSystem& c, const std::vector<Rational>& x) {
  Resolver r{c.host, std::vector<Rational>(c.host.num_transitions(), 0)};
  for (int t = 0; t < c.host.num_transitions(); ++t) {
    if (!c.support.keep[t]) continue;
    r.weights[t] = c.vars.of[t] >= 0 ? x[c.vars.of[t]] : Rational(1);
  }
  return r;
}

std::optional<Rational> linear_upper_bound(const ConstraintSystem& c) {
  if (!c.linear()) return std::nullopt;
  const size_t n = c.vars.transitions.size();
  // columns: x_0..x_{n-1}, t
  std::vector<lp::Row<Rational>> rows;
  for (const auto& w : c.words) {
    lp::Row<Rational> r{std::vector<Rational>(n + 1, 0), lp::Sense::Le, 0};
    r.coef[n] = 1;
    for (const auto& [m, coef] : w.z.terms) {
      if (m.empty()) r.rhs += coef;
      else r.coef[m[0]] -= coef;
    }
    rows.push_back(std::move(r));
  }
  for (const auto& g : c.vars.groups) {
    lp::Row<Rational> r{std::vector<Rational>(n + 1, 0), lp::Sense::Eq, 1};
    for (int v : g) r.coef[v] = 1;
    rows.push_back(std::move(r));
  }
  lp::Row<Rational> cap{std::vector<Rational>(n + 1, 0), lp::Sense::Le, 1};
  cap.coef[n] = 1;
  rows.push_back(std::move(cap));
  std::vector<Rational> obj(n + 1, 0);
  obj[n] = 1;
  auto res = lp::maximize<Rational>(obj, std::move(rows), Rational(0));
  if (res.status != lp::Status::Optimal) return Rational(0);
  return res.value;
}

const char* maximize_status_name(MaximizeStatus s) {
  switch (s) {
    case MaximizeStatus::Certified: return "Certified";
    case MaximizeStatus::LowerBoundOnly: return "LowerBoundOnly";
    case MaximizeStatus::Infeasible: return "Infeasible";
  }
  return "?";
}

namespace {

constexpr double kFloor = 1e-9;

void project_simplex(std::vector<double>& x, const std::vector<int>& group) {
  const size_t n = group.size();
  const double r = 1.0 - kFloor * n;
  std::vector<double> u;
  for (int v : group) u.push_back(x[v] - kFloor);
  std::vector<double> sorted = u;
  std::sort(sorted.rbegin(), sorted.rend());
  double acc = 0, theta = 0;
  for (size_t j = 0; j < n; ++j) {
    acc += sorted[j];
    double cand = (acc - r) / static_cast<double>(j + 1);
    if (sorted[j] - cand > 0) theta = cand;
  }
  for (size_t i = 0; i < n; ++i) x[group[i]] = std::max(u[i] - theta, 0.0) + kFloor;
}

void project(std::vector<double>& x, const VariableMap& v) {
  for (const auto& g : v.groups) project_simplex(x, g);
}

// Sequential linear programming with a box trust region.
void refine(const ConstraintSystem& c, std::vector<double>& x, double& val, double tol) {
  const size_t n = x.size();
  double rho = 0.1;
  for (int iter = 0; iter < 400 && rho > 1e-13; ++iter) {
    std::vector<double> lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
      lo[i] = std::max(-rho, kFloor - x[i]);
      hi[i] = std::min(rho, 1.0 - x[i]);
    }
    // columns: e_0..e_{n-1}, t+, t-
    std::vector<lp::Row<double>> rows;
    for (const auto& w : c.words) {
      std::vector<double> g(n, 0.0);
      w.z.add_gradient(x, g);
      lp::Row<double> r{std::vector<double>(n + 2, 0.0), lp::Sense::Le, w.z.eval(x)};
      r.coef[n] = 1;
      r.coef[n + 1] = -1;
      for (size_t i = 0; i < n; ++i) {
        r.coef[i] = -g[i];
        r.rhs += g[i] * lo[i];
      }
      rows.push_back(std::move(r));
    }
    for (size_t i = 0; i < n; ++i) {
      lp::Row<double> r{std::vector<double>(n + 2, 0.0), lp::Sense::Le, hi[i] - lo[i]};
      r.coef[i] = 1;
      rows.push_back(std::move(r));
    }
    for (const auto& grp : c.vars.groups) {
      lp::Row<double> r{std::vector<double>(n + 2, 0.0), lp::Sense::Eq, 0.0};
      for (int v : grp) {
        r.coef[v] = 1;
        r.rhs -= lo[v];
      }
      rows.push_back(std::move(r));
    }
    std::vector<double> obj(n + 2, 0.0);
    obj[n] = 1;
    obj[n + 1] = -1;
    auto res = lp::maximize<double>(obj, std::move(rows), 1e-12);
    if (res.status != lp::Status::Optimal) {
      rho /= 4;
      continue;
    }
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = x[i] + res.x[i] + lo[i];
    project(y, c.vars);
    double v = c.min_value(y);
    if (v > val + tol * 1e-3) {
      x = std::move(y);
      val = v;
      rho = std::min(rho * 2, 0.5);
    } else {
      rho /= 4;
    }
  }
}

struct StartResult {
  std::vector<double> x;
  double val = -1;
};

StartResult run_start(const ConstraintSystem& c, const MaximizeOptions& opt, int index) {
  const size_t n = c.vars.transitions.size();
  StartResult r;
  r.x.assign(n, 0.0);
  std::mt19937_64 rng(opt.seed + 0x9E3779B97F4A7C15ull * static_cast<uint64_t>(index));
  std::gamma_distribution<double> gamma(1.0, 1.0);
  for (const auto& g : c.vars.groups) {
    double sum = 0;
    for (int v : g) {
      r.x[v] = index == 0 ? 1.0 : gamma(rng);
      sum += r.x[v];
    }
    for (int v : g) r.x[v] /= sum;
  }
  project(r.x, c.vars);
  std::vector<double> x = r.x;
  r.val = c.min_value(x);
  const double eta0 = 0.5;
  for (int t = 0; t < opt.iterations; ++t) {
    const WordConstraint* active = nullptr;
    double m = 2;
    for (const auto& w : c.words) {
      double v = w.z.eval(x);
      if (v < m) {
        m = v;
        active = &w;
      }
    }
    if (!active) break;
    std::vector<double> g(n, 0.0);
    active->z.add_gradient(x, g);
    const double eta = eta0 / std::sqrt(static_cast<double>(t + 1));
    for (size_t i = 0; i < n; ++i) x[i] += eta * g[i];
    project(x, c.vars);
    double v = c.min_value(x);
    if (v > r.val) {
      r.val = v;
      r.x = x;
    }
  }
  refine(c, r.x, r.val, opt.tolerance);
  return r;
}

std::vector<long long> snap_denominators() {
  std::vector<long long> ds;
  for (long long d = 1; d <= 64; ++d) ds.push_back(d);
  for (long long d : {100LL, 1000LL, 10000LL, 100000LL, 1000000LL}) ds.push_back(d);
  return ds;
}

std::optional<std::vector<Rational>> snap(const std::vector<double>& x, const VariableMap& v, long long den) {
  std::vector<Rational> r(x.size());
  for (const auto& g : v.groups) {
    Rational sum = 0;
    int big = g[0];
    for (int i : g) {
      r[i] = rationalize(x[i], den);
      if (r[i] <= 0) return std::nullopt;
      if (x[i] > x[big]) big = i;
    }
    for (int i : g)
      if (i != big) sum += r[i];
    r[big] = 1 - sum;
    if (r[big] <= 0) return std::nullopt;
  }
  return r;
}

}  // namespace

MaximizeResult maximize_system(const ConstraintSystem& c, const MaximizeOptions& opt) {
  MaximizeResult res;
  res.support = c.support;
  res.warnings = c.warnings;
  const size_t n = c.vars.transitions.size();
  std::vector<std::vector<double>> points;
  if (n > 0) {
    std::vector<StartResult> starts(std::max(1, opt.starts));
    if (opt.jobs > 1) {
      std::vector<std::future<StartResult>> fs;
      for (size_t i = 0; i < starts.size(); ++i)
        fs.push_back(std::async(std::launch::async, run_start, std::cref(c), std::cref(opt), static_cast<int>(i)));
      for (size_t i = 0; i < starts.size(); ++i) starts[i] = fs[i].get();
    } else {
      for (size_t i = 0; i < starts.size(); ++i) starts[i] = run_start(c, opt, static_cast<int>(i));
    }
    size_t best = 0;
    for (size_t i = 0; i < starts.size(); ++i) {
      if (!std::isfinite(starts[i].val)) continue;
      if (starts[i].val > starts[best].val) best = i;
    }
    if (!std::isfinite(starts[best].val)) throw Error(ErrorKind::NumericalFailure, "no start converged");
    res.lambda_float = starts[best].val;
    points.push_back(starts[best].x);
    for (size_t i = 0; i < starts.size(); ++i)
      if (i != best) points.push_back(starts[i].x);
  }

  std::optional<std::vector<Rational>> best_point;
  Rational best_val = -1;
  auto consider = [&](std::vector<Rational> x) {
    Rational v = c.min_value(x);
    if (!best_point || v > best_val) {
      best_val = v;
      best_point = std::move(x);
    }
  };
  if (n == 0) {
    consider({});
    res.lambda_float = best_val.convert_to<double>();
  }
  for (const auto& p : points)
    for (long long d : snap_denominators())
      if (auto x = snap(p, c.vars, d)) consider(std::move(*x));
  if (!best_point) {
    std::vector<Rational> uni(n);
    for (const auto& g : c.vars.groups)
      for (int v : g) uni[v] = Rational(1, static_cast<long long>(g.size()));
    consider(uni);
    res.warnings.push_back("rationalization failed; using the uniform resolver");
  }
  res.lambda_best = best_val;
  res.resolver = resolver_from_point(c, *best_point);
  res.status = c.truncated ? MaximizeStatus::LowerBoundOnly : MaximizeStatus::Certified;
  return res;
}

MaximizeResult maximize_lambda(const Nfa& in, const MaximizeOptions& opt) {
  Nfa a = trim(in);
  auto pr = fnfa_check_pr(a, 0, opt.jobs);
  MaximizeResult best;
  if (pr.resolvable == Verdict::No) return best;
  bool found = false;
  for (const auto& sv : pr.supports) {
    if (sv.bad == Verdict::Yes) continue;
    auto c = build_constraints(a, sv.support);
    auto r = maximize_system(c, opt);
    if (!found || r.lambda_best > best.lambda_best ||
        (r.lambda_best == best.lambda_best && best.status != MaximizeStatus::Certified &&
         r.status == MaximizeStatus::Certified)) {
      best = std::move(r);
      found = true;
    }
  }
  if (!found) return MaximizeResult{};
  if (pr.resolvable != Verdict::Yes && best.status == MaximizeStatus::Certified)
    best.status = MaximizeStatus::LowerBoundOnly;
  return best;
}

LambdaCheck check_lambda_resolvable(const Nfa& in, const Rational& lambda, const MaximizeOptions& opt) {
  Nfa a = trim(in);
  LambdaCheck out;
  if (lambda <= 0) {
    out.verdict = Verdict::Yes;
    out.resolver = uniform_resolver(a, full_support(a));
    out.reason = "every resolver meets a non-positive threshold";
    return out;
  }
  if (lambda > 1) {
    out.verdict = Verdict::No;
    out.reason = "threshold above 1";
    return out;
  }
  if (is_unambiguous(a)) {
    auto pr = ufa_check_pr(a);
    if (!pr.resolvable) {
      out.verdict = Verdict::No;
      out.reason = "unambiguous and not positively resolvable";
      return out;
    }
    auto rep = ufa_lambda_star(a);
    if (lambda <= rep.lambda_star) {
      out.verdict = Verdict::Yes;
      out.resolver = ufa_synthesize(a);
    } else {
      out.verdict = Verdict::No;
    }
    out.reason = "unambiguous optimum " + to_string(rep.lambda_star);
    return out;
  }
  AmbiguityClass cls = classify_ambiguity(a);
  if (cls.kind == AmbiguityClass::Infinite) {
    out.reason = "not finitely ambiguous";
    return out;
  }
  auto pr = fnfa_check_pr(a, 0, opt.jobs);
  if (pr.resolvable == Verdict::No) {
    out.verdict = Verdict::No;
    out.reason = "not positively resolvable";
    return out;
  }
  bool refuted = true;
  std::optional<Rational> bound;
  for (const auto& sv : pr.supports) {
    if (sv.bad == Verdict::Yes) continue;
    auto c = build_constraints(a, sv.support);
    auto r = maximize_system(c, opt);
    if (r.status == MaximizeStatus::Certified && r.lambda_best >= lambda) {
      out.verdict = Verdict::Yes;
      out.resolver = r.resolver;
      out.reason = "certified resolver reaches " + to_string(r.lambda_best) + " on " +
                   format_support(a, sv.support);
      return out;
    }
    bool zero = std::any_of(c.words.begin(), c.words.end(), [](const auto& w) { return w.z.is_zero(); });
    auto ub = zero ? std::optional<Rational>(0) : linear_upper_bound(c);
    if (!ub || *ub >= lambda) refuted = false;
    if (ub && (!bound || *ub > *bound)) bound = ub;
  }
  if (refuted) {
    out.verdict = Verdict::No;
    out.reason = "threshold exceeds the exact bound" + (bound ? " " + to_string(*bound) : std::string());
  } else {
    out.reason = "no certificate and no exact refutation";
  }
  return out;
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : p.terms) {
    if (!s.empty()) s += " + ";
    std::string term;
    if (c != 1 || m.empty()) term = std::to_string(c);
    for (int v : m) {
      if (!term.empty()) term += '*';
      term += "x" + std::to_string(v);
    }
    s += term;
  }
  return s;
}

namespace {

std::string smt_rational(const Rational& r) {
  std::string n = numerator(r).str(), d = denominator(r).str();
  auto lit = [](std::string v) {
    if (!v.empty() && v[0] == '-') return "(- " + v.substr(1) + ".0)";
    return v + ".0";
  };
  return d == "1" ? lit(n) : "(/ " + lit(n) + " " + lit(d) + ")";
}

std::string smt_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0.0";
  std::vector<std::string> terms;
  for (const auto& [m, c] : p.terms) {
    std::vector<std::string> f;
    if (c != 1 || m.empty()) f.push_back(std::to_string(c) + ".0");
    for (int v : m) f.push_back("x" + std::to_string(v));
    if (f.size() == 1) terms.push_back(f[0]);
    else {
      std::string t = "(*";
      for (auto& x : f) t += " " + x;
      terms.push_back(t + ")");
    }
  }
  if (terms.size() == 1) return terms[0];
  std::string s = "(+";
  for (auto& t : terms) s += " " + t;
  return s + ")";
}

}  // namespace

std::string export_constraints(const ConstraintSystem& c, ExportFormat f) {
  std::ostringstream os;
  const Nfa& a = c.host;
  const size_t n = c.vars.transitions.size();
  if (f == ExportFormat::Native) {
    os << "# system " << a.name() << " support " << format_support(a, c.support) << "\n";
    os << "# lambda " << (c.lambda ? to_string(*c.lambda) : std::string("symbolic")) << "\n";
    if (c.truncated) os << "# truncated\n";
    for (size_t i = 0; i < n; ++i)
      os << "var x" << i << " in (0,1]  # " << format_transition(a, c.vars.transitions[i]) << "\n";
    for (const auto& g : c.vars.groups) {
      os << "simplex";
      for (size_t i = 0; i < g.size(); ++i) os << (i ? " + " : " ") << "x" << g[i];
      os << " = 1\n";
    }
    for (const auto& w : c.words) {
      os << "word " << format_word(a, w.word) << ": " << format_polynomial(w.z) << " >= lambda";
      if (!w.aliases.empty()) {
        os << "  # also";
        for (const auto& al : w.aliases) os << " " << format_word(a, al);
      }
      os << "\n";
    }
    return os.str();
  }
  os << "; constraints for " << a.name() << ", support " << format_support(a, c.support) << "\n";
  os << "(set-logic QF_NRA)\n";
  if (c.lambda) {
    os << "(define-fun lambda () Real " << smt_rational(*c.lambda) << ")\n";
  } else {
    os << "(declare-fun lambda () Real)\n(assert (> lambda 0.0))\n";
  }
  for (size_t i = 0; i < n; ++i) {
    os << "(declare-fun x" << i << " () Real)  ; " << format_transition(a, c.vars.transitions[i]) << "\n";
    os << "(assert (and (< 0.0 x" << i << ") (<= x" << i << " 1.0)))\n";
  }
  for (const auto& g : c.vars.groups) {
    os << "(assert (= (+";
    for (int v : g) os << " x" << v;
    os << ") 1.0))\n";
  }
  for (const auto& w : c.words)
    os << "(assert (>= " << smt_polynomial(w.z) << " lambda))  ; " << format_word(a, w.word) << "\n";
  os << "(check-sat)\n";
  return os.str();
}

namespace {

std::string trim_ws(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int parse_var(const std::string& tok, int line) {
  if (tok.size() < 2 || tok[0] != 'x' || tok.find_first_not_of("0123456789", 1) != std::string::npos)
    throw Error(ErrorKind::Syntax, "line " + std::to_string(line) + ": bad variable '" + tok + "'");
  return std::stoi(tok.substr(1));
}

Polynomial parse_polynomial(const std::string& text, int line) {
  Polynomial p;
  if (trim_ws(text) == "0") return p;
  std::stringstream ss(text);
  std::string term;
  while (std::getline(ss, term, '+')) {
    term = trim_ws(term);
    if (term.empty()) throw Error(ErrorKind::Syntax, "line " + std::to_string(line) + ": empty term");
    long long coef = 1;
    Monomial m;
    std::stringstream fs(term);
    std::string factor;
    while (std::getline(fs, factor, '*')) {
      factor = trim_ws(factor);
      if (!factor.empty() && std::isdigit(static_cast<unsigned char>(factor[0]))) coef *= std::stoll(factor);
      else m.push_back(parse_var(factor, line));
    }
    std::sort(m.begin(), m.end());
    p.terms[m] += coef;
  }
  return p;
}

}  // namespace

ConstraintSystem parse_constraints(const Nfa& host, std::string_view text) {
  ConstraintSystem c;
  c.host = host;
  c.support = full_support(host);
  c.vars.of.assign(host.num_transitions(), -1);
  std::istringstream is{std::string(text)};
  std::string raw;
  int line = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(line) + ": " + msg);
  };
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim_ws(raw);
    if (s.empty()) continue;
    std::string comment;
    if (auto h = s.find('#'); h != std::string::npos) {
      comment = trim_ws(s.substr(h + 1));
      s = trim_ws(s.substr(0, h));
    }
    if (s.empty()) {
      if (comment.rfind("system ", 0) == 0) {
        auto pos = comment.find(" support ");
        if (pos != std::string::npos) c.support = parse_support(host, comment.substr(pos + 9));
      } else if (comment.rfind("lambda ", 0) == 0) {
        std::string v = trim_ws(comment.substr(7));
        if (v != "symbolic") c.lambda = parse_rational(v);
      } else if (comment == "truncated") {
        c.truncated = true;
      }
      continue;
    }
    if (s.rfind("var ", 0) == 0) {
      std::istringstream ls(s.substr(4));
      std::string name, in, range;
      ls >> name >> in >> range;
      if (in != "in" || range != "(0,1]") fail("expected 'var x<i> in (0,1]'");
      int v = parse_var(name, line);
      if (v != static_cast<int>(c.vars.transitions.size())) fail("variables must be numbered in order");
      auto dot1 = comment.find('.');
      auto dot2 = comment.rfind('.');
      if (dot1 == std::string::npos || dot1 == dot2) fail("variable needs its transition as a comment");
      int src = host.find_state(comment.substr(0, dot1));
      int sym = host.find_symbol(comment.substr(dot1 + 1, dot2 - dot1 - 1));
      int dst = host.find_state(comment.substr(dot2 + 1));
      int t = src < 0 || sym < 0 || dst < 0 ? -1 : host.find_transition(src, sym, dst);
      if (t < 0) fail("unknown transition '" + comment + "'");
      c.vars.of[t] = v;
      c.vars.transitions.push_back(t);
    } else if (s.rfind("simplex ", 0) == 0) {
      auto eq = s.find('=');
      if (eq == std::string::npos || trim_ws(s.substr(eq + 1)) != "1") fail("expected '= 1'");
      std::vector<int> row;
      std::stringstream ss(s.substr(8, eq - 8));
      std::string tok;
      while (std::getline(ss, tok, '+')) row.push_back(parse_var(trim_ws(tok), line));
      c.vars.groups.push_back(std::move(row));
    } else if (s.rfind("word ", 0) == 0) {
      auto colon = s.rfind(": ");
      auto ge = s.rfind(">=");
      if (colon == std::string::npos || ge == std::string::npos || ge < colon ||
          trim_ws(s.substr(ge + 2)) != "lambda")
        fail("expected 'word <w>: <polynomial> >= lambda'");
      WordConstraint w;
      w.word = parse_word(host, trim_ws(s.substr(5, colon - 5)));
      w.z = parse_polynomial(s.substr(colon + 2, ge - colon - 2), line);
      if (comment.rfind("also", 0) == 0) {
        std::istringstream al(comment.substr(4));
        std::string tok;
        while (al >> tok) w.aliases.push_back(parse_word(host, tok));
      }
      c.words.push_back(std::move(w));
    } else {
      fail("unrecognized line");
    }
  }
  const int nv = static_cast<int>(c.vars.transitions.size());
  for (const auto& w : c.words)
    for (const auto& [m, coef] : w.z.terms)
      for (int v : m)
        if (v >= nv) fail("undeclared variable x" + std::to_string(v));
  return c;
}

}  // namespace resolvex
