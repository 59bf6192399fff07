#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "resolvex/langops.hpp"
#include "resolvex/nfa.hpp"

namespace resolvex {

// ((q_1..q_k), R) plus the split of components into classes of runs that agree so far.
// Components are ordered lexicographically by state sequence, so classes are contiguous.
struct GammaState {
  std::vector<int> tuple;
  uint32_t cuts = 0;  // bit j: components j and j+1 belong to different classes
  StateSet rejected;
  friend bool operator==(const GammaState&, const GammaState&) = default;
};

struct GammaEdge {
  int from;
  int sym;
  int to;
  std::vector<int> moves;  // host transition taken by each component
};

struct RunAutomaton {
  Nfa host;
  Support support;
  int k = 1;
  std::vector<GammaState> nodes;
  std::vector<GammaEdge> edges;
  std::vector<std::vector<int>> out;  // edge ids leaving each node
  std::vector<bool> final;
  std::vector<uint32_t> diminishable;  // per node, bit j = component j
  std::vector<int> scc_of;
  int initial = 0;
  size_t explored = 0;  // nodes generated before trimming

  int find(const GammaState& g) const;
  bool nondet(int t) const { return nondet_[t]; }

  std::vector<bool> nondet_;
  std::unordered_map<std::string, int> index_;
};

std::string gamma_key(const GammaState& g);

// Nodes on some path from ((q0)^k, {}) to a final node. Throws StateBudgetExceeded.
RunAutomaton build_run_automaton(const Nfa& a, const Support& s, int k, size_t budget = 1000000);

uint32_t diminishable_components(const RunAutomaton& g, int node);

struct NiceRun {
  Word word;
  std::vector<GammaState> states;  // |w| + 1 entries
  std::vector<Run> runs;           // k runs over host transition indices, tuple order
  int distinct = 0;                // accepting runs before padding
};

// Canonical nice run of w in a_S with k components; nullopt iff w is rejected.
std::optional<NiceRun> nice_run(const Nfa& a, const Support& s, const Word& w, int k);

// Components j whose run meets a diminishable Γ node along the nice run of w.
uint32_t bad_components(const RunAutomaton& g, const NiceRun& r);

// A word whose Γ path reaches a final node after visiting diminishable nodes for every component.
std::optional<Word> gamma_lasso_search(const RunAutomaton& g);

std::string format_gamma_state(const Nfa& a, const GammaState& g);
std::string gamma_to_dot(const RunAutomaton& g);

}  // namespace resolvex
