#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "resolvex/fnfa.hpp"
#include "resolvex/langops.hpp"
#include "resolvex/nfa.hpp"
#include "resolvex/pfa.hpp"
#include "resolvex/runaut.hpp"

namespace resolvex {

// Sorted multiset of variable ids; empty is the constant 1.
using Monomial = std::vector<int>;

struct Polynomial {
  std::map<Monomial, long long> terms;

  bool is_zero() const { return terms.empty(); }
  int degree() const;
  Rational eval(const std::vector<Rational>& x) const;
  double eval(const std::vector<double>& x) const;
  // Adds d/dx_i into grad.
  void add_gradient(const std::vector<double>& x, std::vector<double>& grad) const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;
  friend bool operator<(const Polynomial& a, const Polynomial& b) { return a.terms < b.terms; }
};

struct PrimitiveWord {
  Word word;
  NiceRun nice;
  uint32_t bad_set = 0;
  std::vector<Monomial> monomials;  // one per distinct accepting run outside the bad set
  Polynomial z;
  std::vector<Word> aliases;  // further primitive words with the same polynomial
};

struct PrimitiveWords {
  std::vector<PrimitiveWord> words;  // shortlex by representative
  int k = 1;
  size_t gamma_nodes = 0;
  bool truncated = false;
  std::vector<std::string> warnings;
};

struct VariableMap {
  std::vector<int> transitions;      // variable -> host transition
  std::vector<int> of;               // host transition -> variable or -1
  std::vector<std::vector<int>> groups;  // simplex rows over variables
};

VariableMap support_variables(const Nfa& a, const Support& s);

// k = 0 takes the ambiguity degree of a. length_cap = 0 defaults to the Γ node count.
PrimitiveWords enumerate_primitive_words(const Nfa& a, const Support& s, size_t length_cap = 0, int k = 0,
                                         size_t step_budget = 2000000);
uint32_t compute_bad_set(const Nfa& a, const Support& s, const Word& w, int k = 0);

struct WordConstraint {
  Word word;
  std::vector<Word> aliases;
  Polynomial z;
};

struct ConstraintSystem {
  Nfa host;
  Support support;
  VariableMap vars;
  std::vector<WordConstraint> words;
  std::optional<Rational> lambda;  // nullopt = symbolic
  bool truncated = false;
  std::vector<std::string> warnings;

  bool linear() const;
  Rational min_value(const std::vector<Rational>& x) const;
  double min_value(const std::vector<double>& x) const;
};

ConstraintSystem build_constraints(const Nfa& a, const Support& s, std::optional<Rational> lambda = std::nullopt,
                                   size_t length_cap = 0);

// Resolver weights for the given variable values (deterministic support transitions get 1).
Resolver resolver_from_point(const ConstraintSystem& c, const std::vector<Rational>& x);

// Sup of min_w z_w over the closed product of simplices; only for linear systems.
std::optional<Rational> linear_upper_bound(const ConstraintSystem& c);

enum class MaximizeStatus { Certified, LowerBoundOnly, Infeasible };
const char* maximize_status_name(MaximizeStatus s);

struct MaximizeOptions {
  int starts = 8;
  int iterations = 2000;
  double tolerance = 1e-9;
  uint64_t seed = 1;
  int jobs = 1;
};

struct MaximizeResult {
  Rational lambda_best = 0;
  double lambda_float = 0;
  std::optional<Resolver> resolver;
  std::optional<Support> support;
  MaximizeStatus status = MaximizeStatus::Infeasible;
  std::vector<std::string> warnings;
};

MaximizeResult maximize_system(const ConstraintSystem& c, const MaximizeOptions& opt);
MaximizeResult maximize_lambda(const Nfa& a, const MaximizeOptions& opt = {});

struct LambdaCheck {
  Verdict verdict = Verdict::Unknown;
  std::optional<Resolver> resolver;
  std::string reason;
};

LambdaCheck check_lambda_resolvable(const Nfa& a, const Rational& lambda, const MaximizeOptions& opt = {});

enum class ExportFormat { Native, Smt };
std::string export_constraints(const ConstraintSystem& c, ExportFormat f);
// Reads the native format back over its host automaton.
ConstraintSystem parse_constraints(const Nfa& host, std::string_view text);
std::string format_polynomial(const Polynomial& p);

}  // namespace resolvex
