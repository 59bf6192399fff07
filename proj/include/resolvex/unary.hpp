#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resolvex/langops.hpp"
#include "resolvex/nfa.hpp"

namespace resolvex {

using Matrix = std::vector<std::vector<Rational>>;

struct MarkovChain {
  Matrix p;
  std::vector<Rational> init;
  std::vector<std::string> names;
};

// `matrix d` followed by an optional `init r1 .. rd` row and d rows of rationals,
// or a single-letter pfa (a sink state absorbs missing mass).
MarkovChain parse_chain(std::string_view text);
MarkovChain chain_from_pfa(const Pfa& p);
void validate_chain(const MarkovChain& c);

// lcm over cyclic components of the gcd of their cycle lengths; 1 for a DAG.
long long graph_period(const std::vector<std::vector<int>>& adj, long long cap = 10000);
long long global_period(const Nfa& a, const Support& s, long long cap = 10000);

struct MarkovLimitReport {
  long long period = 1;
  std::vector<std::vector<Rational>> limits;  // limits[k][q]
  std::vector<int> class_of;                  // -1 transient, else recurrent class of P^T
  std::vector<std::vector<int>> classes;
  std::vector<std::vector<Rational>> stationary;  // per class, dense over states
  std::vector<int> transient;
  std::vector<std::vector<Rational>> absorption;  // absorption[i][c], i indexes `transient`
  std::vector<std::vector<Rational>> masses;      // masses[k][c]
};

MarkovLimitReport markov_limits(const MarkovChain& c, long long period_cap = 10000);
// support[k][q]: q lies in a bottom component and is reachable at some length k + T*l, l <= d.
std::vector<std::vector<bool>> limit_support_by_graph(const MarkovChain& c, long long period);

struct LengthProfile {
  long long transient = 0;
  long long cycle = 1;
  long long period = 1;
  std::vector<long long> accepted_in_cycle;  // offsets j < cycle with an accepting subset at transient + j
  std::vector<bool> infinite;                // per residue mod period
  std::vector<long long> finite_residues;
};

LengthProfile accepted_length_profile(const Nfa& a, const Support& s, long long period_cap = 10000);

struct UnarySupportResult {
  Support support;
  long long period = 1;
  std::vector<long long> failing_residues;
  bool passes() const { return failing_residues.empty(); }
};

struct UnaryReport {
  bool resolvable = false;
  std::optional<Support> good_support;
  std::vector<UnarySupportResult> supports;
};

// Throws NotUnary, PeriodTooLarge.
UnaryReport unary_check_pr(const Nfa& a, long long period_cap = 10000);

}  // namespace resolvex
