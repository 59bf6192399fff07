#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "resolvex/langops.hpp"
#include "resolvex/nfa.hpp"

namespace resolvex {

// A resolver is a Pfa over its host; weight 0 marks transitions outside the support.
using Resolver = Pfa;

// Checks weights in [0,1] and per-group sums of exactly 1 for every group with host transitions.
void validate_resolver(const Resolver& r);
Support support_of(const Resolver& r);
Resolver uniform_resolver(const Nfa& a, const Support& s);

Rational eval_exact(const Pfa& p, const Word& w);
// Sum over accepting runs of the weight product.
Rational eval_runs(const Pfa& p, const Word& w);

struct MonteCarloEstimate {
  double estimate = 0;
  double half_width = 0;  // 95% normal interval
  uint64_t samples = 0;
};
MonteCarloEstimate eval_monte_carlo(const Pfa& p, const Word& w, uint64_t samples, uint64_t seed);

// b(w) on the sub-automaton a_S; nullopt when w is rejected there.
std::optional<int> min_nondet_count(const Nfa& a, const Support& s, const Word& w);
// The same quantity by explicit run enumeration.
std::optional<int> min_nondet_count_runs(const Nfa& a, const Support& s, const Word& w);

Resolver parse_resolver(const Nfa& host, std::string_view text);
std::string serialize_resolver(const Resolver& r);

}  // namespace resolvex
