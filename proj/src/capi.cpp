#include "resolvex/resolvex.h"

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "resolvex/ambiguity.hpp"
#include "resolvex/error.hpp"
#include "resolvex/fnfa.hpp"
#include "resolvex/gens.hpp"
#include "resolvex/lambda.hpp"
#include "resolvex/runaut.hpp"
#include "resolvex/ufa.hpp"
#include "resolvex/unary.hpp"

using json = nlohmann::json;
using namespace resolvex;

struct rvx_automaton {
  ParsedAutomaton parsed;
  std::string digest;
};

namespace {

constexpr const char* kVersion = "0.3.0";

std::string fnv1a(std::string_view text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rvx_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax:
    case ErrorKind::DuplicateState:
    case ErrorKind::UnknownSymbol:
    case ErrorKind::UnknownState:
    case ErrorKind::NotStochastic:
      return RVX_ERR_PARSE;
    case ErrorKind::DegreeCapExceeded:
    case ErrorKind::StateBudgetExceeded:
    case ErrorKind::PeriodTooLarge:
    case ErrorKind::AmbiguityUnknown:
      return RVX_ERR_LIMIT;
    case ErrorKind::NumericalFailure:
      return RVX_ERR_INTERNAL;
    default:
      return RVX_ERR_INPUT;
  }
}

json error_json(const std::string& kind, const std::string& msg) {
  return json{{"error", {{"kind", kind}, {"message", msg}}}};
}

rvx_options defaults(const rvx_options* o) {
  rvx_options d;
  rvx_options_init(&d);
  return o ? *o : d;
}

MaximizeOptions maximize_options(const rvx_options& o) {
  MaximizeOptions m;
  m.starts = o.starts;
  m.iterations = o.iterations;
  m.tolerance = o.tolerance;
  m.seed = o.seed;
  m.jobs = o.jobs;
  return m;
}

rvx_status verdict_status(Verdict v) {
  return v == Verdict::Yes ? RVX_OK : v == Verdict::No ? RVX_NEGATIVE : RVX_UNKNOWN;
}

std::string word_text(const Nfa& a, const Word& w) { return w.empty() ? "eps" : format_word(a, w); }

json header(const rvx_automaton* a) {
  const Nfa& n = a->parsed.nfa;
  return json{{"automaton", n.name()},
              {"digest", a->digest},
              {"states", n.num_states()},
              {"transitions", n.num_transitions()},
              {"alphabet", n.alphabet()}};
}

// Runs body, converting exceptions into JSON error reports.
template <class F>
rvx_status guarded(char** out, const rvx_options* opts, F&& body) {
  if (out) *out = nullptr;
  rvx_options o = defaults(opts);
  auto t0 = std::chrono::steady_clock::now();
  json rep;
  rvx_status st;
  try {
    st = body(o, rep);
  } catch (const Error& e) {
    rep = error_json(error_kind_name(e.kind()), e.what());
    st = status_of(e.kind());
  } catch (const std::bad_alloc&) {
    rep = error_json("OutOfMemory", "allocation failed");
    st = RVX_ERR_LIMIT;
  } catch (const std::exception& e) {
    rep = error_json("Internal", e.what());
    st = RVX_ERR_INTERNAL;
  }
  if (o.timing && rep.is_object())
    rep["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  if (out) *out = dup(rep.is_string() ? rep.get<std::string>() : rep.dump(2) + "\n");
  return st;
}

Support support_arg(const Nfa& a, const char* spec) {
  if (!spec || !*spec) return full_support(a);
  return parse_support(a, spec);
}

json resolver_json(const Resolver& r) { return serialize_resolver(r); }

}  // namespace

extern "C" {

const char* rvx_version(void) { return kVersion; }

const char* rvx_status_name(rvx_status s) {
  switch (s) {
    case RVX_OK: return "ok";
    case RVX_NEGATIVE: return "negative";
    case RVX_UNKNOWN: return "unknown";
    case RVX_ERR_USAGE: return "usage error";
    case RVX_ERR_PARSE: return "parse error";
    case RVX_ERR_INPUT: return "input error";
    case RVX_ERR_LIMIT: return "limit exceeded";
    case RVX_ERR_INTERNAL: return "internal error";
  }
  return "?";
}

void rvx_options_init(rvx_options* o) {
  if (!o) return;
  o->jobs = 1;
  o->seed = 1;
  o->starts = 8;
  o->iterations = 2000;
  o->tolerance = 1e-9;
  o->max_bad_word_len = 0;
  o->degree_cap = 8;
  o->period_cap = 10000;
  o->timing = 0;
}

void rvx_string_free(char* s) { std::free(s); }

rvx_status rvx_automaton_parse(const char* text, rvx_automaton** out, char** error) {
  if (out) *out = nullptr;
  if (error) *error = nullptr;
  if (!text || !out) {
    if (error) *error = dup(error_json("Usage", "null argument").dump(2) + "\n");
    return RVX_ERR_USAGE;
  }
  try {
    auto* a = new rvx_automaton{parse_automaton(text), fnv1a(text)};
    *out = a;
    return RVX_OK;
  } catch (const Error& e) {
    if (error) *error = dup(error_json(error_kind_name(e.kind()), e.what()).dump(2) + "\n");
    return status_of(e.kind());
  } catch (const std::exception& e) {
    if (error) *error = dup(error_json("Internal", e.what()).dump(2) + "\n");
    return RVX_ERR_INTERNAL;
  }
}

rvx_status rvx_automaton_load(const char* path, rvx_automaton** out, char** error) {
  if (out) *out = nullptr;
  if (error) *error = nullptr;
  if (!path) return RVX_ERR_USAGE;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (error) *error = dup(error_json("Io", std::string("cannot open ") + path).dump(2) + "\n");
    return RVX_ERR_INPUT;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return rvx_automaton_parse(ss.str().c_str(), out, error);
}

void rvx_automaton_free(rvx_automaton* a) { delete a; }

char* rvx_automaton_serialize(const rvx_automaton* a) {
  if (!a) return nullptr;
  return dup(a->parsed.is_pfa() ? serialize(a->parsed.pfa()) : serialize(a->parsed.nfa));
}

const char* rvx_automaton_name(const rvx_automaton* a) { return a ? a->parsed.nfa.name().c_str() : nullptr; }

rvx_status rvx_classify(const rvx_automaton* a, const rvx_options* opts, char** report) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    auto cls = classify_ambiguity(n, o.degree_cap);
    rep["kind"] = ambiguity_kind_name(cls.kind);
    if (cls.kind != AmbiguityClass::Infinite) rep["degree"] = cls.degree;
    if (cls.witness) rep["witness"] = word_text(n, *cls.witness);
    return RVX_OK;
  });
}

rvx_status rvx_check_pr(const rvx_automaton* a, const rvx_options* opts, char** report) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    if (is_unambiguous(n)) {
      rep["method"] = "unambiguous";
      auto pr = ufa_check_pr(n);
      rep["scc_deterministic"] = ufa_scc_deterministic(n);
      if (!pr.resolvable) {
        const auto& w = *pr.witness;
        Word full = w.x;
        full.insert(full.end(), w.y.begin(), w.y.end());
        full.insert(full.end(), w.z.begin(), w.z.end());
        rep["verdict"] = "No";
        rep["witness"] = {{"text", format_ufa_witness(n, w)},
                          {"word", word_text(n, full)},
                          {"x", word_text(n, w.x)},
                          {"y", word_text(n, w.y)},
                          {"z", word_text(n, w.z)},
                          {"pivot", n.states()[w.pivot]}};
        return RVX_NEGATIVE;
      }
      auto ls = ufa_lambda_star(n);
      rep["verdict"] = "Yes";
      rep["lambda_star"] = to_string(ls.lambda_star);
      rep["resolver"] = resolver_json(ufa_synthesize(n));
      return RVX_OK;
    }
    rep["method"] = "finitely-ambiguous";
    auto r = fnfa_check_pr(n, o.max_bad_word_len, o.jobs, o.degree_cap);
    rep["degree"] = r.degree;
    rep["verdict"] = verdict_name(r.resolvable);
    json sups = json::array();
    for (const auto& sv : r.supports) {
      json s{{"support", format_support(n, sv.support)}, {"bad", verdict_name(sv.bad)}, {"truncated", sv.truncated}};
      if (sv.witness) {
        s["witness"] = format_witness(n, *sv.witness);
        s["word"] = word_text(n, sv.witness->word());
      }
      sups.push_back(std::move(s));
    }
    rep["supports"] = std::move(sups);
    if (r.good_support) rep["good_support"] = format_support(n, *r.good_support);
    if (r.resolver) rep["resolver"] = resolver_json(*r.resolver);
    return verdict_status(r.resolvable);
  });
}

rvx_status rvx_lambda_maximize(const rvx_automaton* a, const rvx_options* opts, char** report) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    auto r = maximize_lambda(n, maximize_options(o));
    rep["lambda"] = to_string(r.lambda_best);
    rep["status"] = maximize_status_name(r.status);
    rep["telemetry"] = {{"lambda_float", r.lambda_float}, {"starts", o.starts}, {"iterations", o.iterations},
                        {"seed", o.seed}};
    if (r.support) rep["support"] = format_support(n, *r.support);
    if (r.resolver) rep["resolver"] = resolver_json(*r.resolver);
    rep["warnings"] = r.warnings;
    switch (r.status) {
      case MaximizeStatus::Certified: return RVX_OK;
      case MaximizeStatus::LowerBoundOnly: return RVX_UNKNOWN;
      case MaximizeStatus::Infeasible: return RVX_NEGATIVE;
    }
    return RVX_UNKNOWN;
  });
}

rvx_status rvx_lambda_check(const rvx_automaton* a, const char* lambda, const rvx_options* opts, char** report) {
  if (!a || !lambda) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    Rational l = parse_rational(lambda);
    auto r = check_lambda_resolvable(n, l, maximize_options(o));
    rep["lambda"] = to_string(l);
    rep["verdict"] = verdict_name(r.verdict);
    rep["reason"] = r.reason;
    if (r.resolver) rep["resolver"] = resolver_json(*r.resolver);
    return verdict_status(r.verdict);
  });
}

rvx_status rvx_synthesize(const rvx_automaton* a, const rvx_options* opts, char** report) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    if (is_unambiguous(n)) {
      rep["method"] = "unambiguous";
      auto pr = ufa_check_pr(n);
      if (!pr.resolvable) {
        rep["verdict"] = "No";
        rep["witness"] = format_ufa_witness(n, *pr.witness);
        return RVX_NEGATIVE;
      }
      auto ls = ufa_lambda_star(n);
      rep["verdict"] = "Yes";
      rep["lambda"] = to_string(ls.lambda_star);
      json nodes = json::array();
      for (const auto& nd : ls.nodes) {
        std::vector<std::string> names;
        for (int q : nd.states) names.push_back(ls.automaton.states()[q]);
        json j{{"states", names}, {"g", nd.g}};
        if (nd.f >= 0) j["f"] = ls.automaton.alphabet()[nd.f];
        nodes.push_back(std::move(j));
      }
      rep["nodes"] = std::move(nodes);
      rep["warnings"] = ls.warnings;
      rep["resolver"] = resolver_json(ufa_synthesize(n));
      return RVX_OK;
    }
    rep["method"] = "constraints";
    auto r = maximize_lambda(n, maximize_options(o));
    if (r.status == MaximizeStatus::Infeasible) {
      rep["verdict"] = "No";
      return RVX_NEGATIVE;
    }
    rep["verdict"] = r.status == MaximizeStatus::Certified ? "Yes" : "Unknown";
    rep["lambda"] = to_string(r.lambda_best);
    rep["status"] = maximize_status_name(r.status);
    if (r.resolver) rep["resolver"] = resolver_json(*r.resolver);
    rep["warnings"] = r.warnings;
    return r.status == MaximizeStatus::Certified ? RVX_OK : RVX_UNKNOWN;
  });
}

rvx_status rvx_eval(const rvx_automaton* a, const char* resolver, const char* word, uint64_t mc_samples,
                    const rvx_options* opts, char** report) {
  if (!a || !word) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    rep = header(a);
    const Nfa& n = a->parsed.nfa;
    Resolver r = resolver ? parse_resolver(n, resolver) : a->parsed.pfa();
    validate_resolver(r);
    Word w = parse_word(n, word);
    rep["word"] = word_text(n, w);
    rep["probability"] = to_string(eval_exact(r, w));
    if (mc_samples > 0) {
      auto mc = eval_monte_carlo(r, w, mc_samples, o.seed);
      rep["monte_carlo"] = {{"samples", mc.samples}, {"estimate", mc.estimate}, {"half_width", mc.half_width},
                            {"seed", o.seed}};
    }
    return RVX_OK;
  });
}

rvx_status rvx_primitives(const rvx_automaton* a, const char* support, const rvx_options* opts, char** report) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options&, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    Support s = support_arg(n, support);
    if (!covers_all_groups(n, s)) throw Error(ErrorKind::Parameter, "support leaves a (state, letter) pair empty");
    auto pw = enumerate_primitive_words(n, s);
    auto vars = support_variables(n, s);
    rep["support"] = format_support(n, s);
    rep["k"] = pw.k;
    rep["gamma_nodes"] = pw.gamma_nodes;
    rep["truncated"] = pw.truncated;
    rep["warnings"] = pw.warnings;
    json vj = json::array();
    for (size_t i = 0; i < vars.transitions.size(); ++i)
      vj.push_back({{"name", "x" + std::to_string(i)}, {"transition", format_transition(n, vars.transitions[i])}});
    rep["variables"] = std::move(vj);
    json words = json::array();
    for (const auto& p : pw.words) {
      std::vector<int> bad;
      for (int j = 0; j < pw.k; ++j)
        if ((p.bad_set >> j) & 1u) bad.push_back(j);
      std::vector<std::string> aliases;
      for (const auto& w : p.aliases) aliases.push_back(word_text(n, w));
      words.push_back({{"word", word_text(n, p.word)},
                       {"aliases", aliases},
                       {"bad_set", bad},
                       {"z", format_polynomial(p.z)}});
    }
    rep["words"] = std::move(words);
    return RVX_OK;
  });
}

rvx_status rvx_constraints(const rvx_automaton* a, const char* support, const char* lambda, rvx_format format,
                           char** text) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(text, nullptr, [&](const rvx_options&, json& rep) {
    Nfa n = trim(a->parsed.nfa);
    Support s = support_arg(n, support);
    std::optional<Rational> l;
    if (lambda) l = parse_rational(lambda);
    auto c = build_constraints(n, s, l);
    rep = export_constraints(c, format == RVX_FORMAT_SMT ? ExportFormat::Smt : ExportFormat::Native);
    return c.truncated ? RVX_UNKNOWN : RVX_OK;
  });
}

rvx_status rvx_unary(const rvx_automaton* a, const rvx_options* opts, char** report) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    auto r = unary_check_pr(n, o.period_cap);
    rep["verdict"] = r.resolvable ? "Yes" : "No";
    if (r.good_support) rep["good_support"] = format_support(n, *r.good_support);
    json sups = json::array();
    for (const auto& s : r.supports) {
      auto prof = accepted_length_profile(n, s.support, o.period_cap);
      sups.push_back({{"support", format_support(n, s.support)},
                      {"period", s.period},
                      {"failing_residues", s.failing_residues},
                      {"transient", prof.transient},
                      {"cycle", prof.cycle},
                      {"finite_residues", prof.finite_residues}});
    }
    rep["supports"] = std::move(sups);
    return r.resolvable ? RVX_OK : RVX_NEGATIVE;
  });
}

rvx_status rvx_markov(const char* text, const rvx_options* opts, char** report) {
  if (!text) return RVX_ERR_USAGE;
  return guarded(report, opts, [&](const rvx_options& o, json& rep) {
    auto chain = parse_chain(text);
    auto r = markov_limits(chain, o.period_cap);
    auto graph = limit_support_by_graph(chain, r.period);
    auto rats = [](const std::vector<Rational>& v) {
      std::vector<std::string> s;
      for (const auto& x : v) s.push_back(to_string(x));
      return s;
    };
    bool agrees = true;
    json limits = json::array(), masses = json::array();
    for (long long k = 0; k < r.period; ++k) {
      limits.push_back(rats(r.limits[k]));
      masses.push_back(rats(r.masses[k]));
      for (size_t q = 0; q < chain.p.size(); ++q) agrees = agrees && ((r.limits[k][q] != 0) == graph[k][q]);
    }
    std::vector<std::string> cls;
    for (int c : r.class_of) cls.push_back(c < 0 ? "transient" : "recurrent:" + std::to_string(c));
    json stationary = json::array(), absorption = json::object();
    for (const auto& t : r.stationary) stationary.push_back(rats(t));
    for (size_t i = 0; i < r.transient.size(); ++i) absorption[chain.names[r.transient[i]]] = rats(r.absorption[i]);
    rep = json{{"digest", fnv1a(text)},
               {"states", chain.names},
               {"period", r.period},
               {"classification", cls},
               {"stationary", stationary},
               {"absorption", absorption},
               {"masses", masses},
               {"limits", limits},
               {"graph_support_agrees", agrees}};
    return agrees ? RVX_OK : RVX_ERR_INTERNAL;
  });
}

rvx_status rvx_verify_witness(const rvx_automaton* a, const char* support, const char* witness, char** report) {
  if (!a || !witness) return RVX_ERR_USAGE;
  return guarded(report, nullptr, [&](const rvx_options&, json& rep) {
    rep = header(a);
    Nfa n = trim(a->parsed.nfa);
    std::string w = witness;
    if (w.rfind("x=", 0) == 0) {
      auto uw = parse_ufa_witness(n, w);
      bool ok = is_unambiguous(n) && ufa_witness_valid(n, uw);
      rep["kind"] = "unambiguous";
      rep["valid"] = ok;
      return ok ? RVX_OK : RVX_NEGATIVE;
    }
    Support s = support_arg(n, support);
    auto bw = parse_witness(n, w);
    auto check = verify_bad_word(n, s, bw);
    rep["kind"] = "bad-word";
    rep["support"] = format_support(n, s);
    rep["valid"] = check.ok;
    rep["diagnostics"] = check.diagnostics;
    return check.ok ? RVX_OK : RVX_NEGATIVE;
  });
}

rvx_status rvx_dot(const rvx_automaton* a, int gamma, const char* support, char** text) {
  if (!a) return RVX_ERR_USAGE;
  return guarded(text, nullptr, [&](const rvx_options&, json& rep) {
    if (!gamma) {
      rep = a->parsed.is_pfa() ? to_dot(a->parsed.nfa, &*a->parsed.weights) : to_dot(a->parsed.nfa);
      return RVX_OK;
    }
    Nfa n = trim(a->parsed.nfa);
    auto cls = classify_ambiguity(n);
    if (cls.kind == AmbiguityClass::Infinite)
      throw Error(ErrorKind::InfiniteAmbiguity, "'" + n.name() + "' is not finitely ambiguous");
    rep = gamma_to_dot(build_run_automaton(n, support_arg(n, support), cls.degree));
    return RVX_OK;
  });
}

rvx_status rvx_gen_spectrum(int m, int n, char** text) {
  return guarded(text, nullptr, [&](const rvx_options&, json& rep) {
    rep = serialize(gen_spectrum(m, n));
    return RVX_OK;
  });
}

rvx_status rvx_gen_unary_hard(const char* cycles, char** text) {
  if (!cycles) return RVX_ERR_USAGE;
  return guarded(text, nullptr, [&](const rvx_options&, json& rep) {
    rep = serialize(gen_unary_hardness(parse_cycles(cycles)));
    return RVX_OK;
  });
}

rvx_status rvx_gen_pspace_hard(const rvx_automaton* const* dfas, size_t count, char** text) {
  if (!dfas && count) return RVX_ERR_USAGE;
  return guarded(text, nullptr, [&](const rvx_options&, json& rep) {
    std::vector<Nfa> in;
    for (size_t i = 0; i < count; ++i) in.push_back(dfas[i]->parsed.nfa);
    rep = serialize(gen_pspace_hardness(in));
    return RVX_OK;
  });
}

rvx_status rvx_gen_undec(const rvx_automaton* pfa, char** text) {
  if (!pfa) return RVX_ERR_USAGE;
  return guarded(text, nullptr, [&](const rvx_options&, json& rep) {
    Pfa p = pfa->parsed.is_pfa() ? pfa->parsed.pfa() : [&] {
      auto u = unique_simple_pfa(pfa->parsed.nfa);
      if (!u.is_simple_unique)
        throw Error(ErrorKind::NonSimple, "'" + pfa->parsed.nfa.name() + "' has no unique simple pfa");
      return *u.pfa;
    }();
    Nfa g = gen_undecidability(p);
    auto check = validate_undecidability(g, p);
    if (!check.ok) throw Error(ErrorKind::Parameter, "generated gadget fails validation: " + check.diagnostics[0]);
    rep = serialize(g);
    return RVX_OK;
  });
}

}  // extern "C"
