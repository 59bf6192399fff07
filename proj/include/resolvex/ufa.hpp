#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resolvex/nfa.hpp"
#include "resolvex/pfa.hpp"

namespace resolvex {

struct UfaBadWitness {
  Word x, y, z;
  int pivot = -1;
};

struct UfaPrResult {
  bool resolvable = true;
  std::optional<UfaBadWitness> witness;
};

// Requires an unambiguous automaton (throws NotUnambiguous). Works on trim(a).
UfaPrResult ufa_check_pr(const Nfa& a);
// Every transition inside a strongly connected component is deterministic.
bool ufa_scc_deterministic(const Nfa& a);
// The UfaBadWitness invariants, checked directly.
bool ufa_witness_valid(const Nfa& a, const UfaBadWitness& w);
// "x=<w> y=<w> z=<w> pivot=<state>" over trim(a).
std::string format_ufa_witness(const Nfa& a, const UfaBadWitness& w);
UfaBadWitness parse_ufa_witness(const Nfa& a, std::string_view text);

struct LambdaStarNode {
  std::vector<int> states;  // of trim(a)
  long long g = 1;
  int f = -1;          // letter of the maximising exit, -1 at sinks
  int f_state = -1;    // state of the maximising exit
  long long g_letter = 1;  // letter-merged recursion value
};

struct LambdaStarReport {
  Nfa automaton;  // trim(a); node states index into it
  Rational lambda_star;
  Rational lambda_star_letter;  // same recursion with letters merged across the node
  std::vector<LambdaStarNode> nodes;  // reverse topological order
  int root = 0;
  std::vector<std::string> warnings;
};

// Throws NotPositivelyResolvable.
LambdaStarReport ufa_lambda_star(const Nfa& a);
// Resolver over trim(a).
Resolver ufa_synthesize(const Nfa& a);

}  // namespace resolvex
