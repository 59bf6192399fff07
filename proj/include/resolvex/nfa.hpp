#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resolvex/rational.hpp"

namespace resolvex {

using Word = std::vector<int>;

struct Transition {
  int src;
  int sym;
  int dst;
  friend bool operator==(const Transition&, const Transition&) = default;
};

// A run as the sequence of transition indices it takes.
struct Run {
  std::vector<int> transitions;
  friend bool operator==(const Run&, const Run&) = default;
};

// Dense bit set over state indices.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(int n) : n_(n), w_((n + 63) / 64, 0) {}

  int universe() const { return n_; }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  bool empty() const;
  int count() const;
  std::vector<int> elements() const;
  bool intersects(const StateSet& o) const;
  bool subset_of(const StateSet& o) const;
  StateSet& operator|=(const StateSet& o);
  StateSet& operator&=(const StateSet& o);
  StateSet minus(const StateSet& o) const;
  size_t hash() const;
  friend bool operator==(const StateSet&, const StateSet&) = default;
  friend bool operator<(const StateSet& a, const StateSet& b) { return a.w_ < b.w_; }

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

struct StateSetHash {
  size_t operator()(const StateSet& s) const { return s.hash(); }
};

class Nfa {
 public:
  Nfa() = default;
  // Validates indices and duplicate triples; throws Error.
  Nfa(std::string name, std::vector<std::string> alphabet, std::vector<std::string> states,
      int initial, std::vector<bool> accepting, std::vector<Transition> transitions);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<std::string>& states() const { return states_; }
  int initial() const { return initial_; }
  bool is_accepting(int q) const { return accepting_[q]; }
  const std::vector<bool>& accepting() const { return accepting_; }
  StateSet accepting_set() const;
  const std::vector<Transition>& transitions() const { return trans_; }
  const Transition& transition(int i) const { return trans_[i]; }

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_symbols() const { return static_cast<int>(alphabet_.size()); }
  int num_transitions() const { return static_cast<int>(trans_.size()); }

  // Transition indices leaving q on symbol a, ordered by target index.
  const std::vector<int>& out(int q, int a) const { return out_[q * num_symbols() + a]; }
  // Number of transitions in the (q, a) group; >= 2 means nondeterministic.
  int width(int q, int a) const { return static_cast<int>(out(q, a).size()); }
  bool nondeterministic(int t) const { return width(trans_[t].src, trans_[t].sym) >= 2; }
  bool is_deterministic() const;

  int find_symbol(std::string_view s) const;
  int find_state(std::string_view s) const;
  int find_transition(int src, int sym, int dst) const;

 private:
  std::string name_;
  std::vector<std::string> alphabet_;
  std::vector<std::string> states_;
  int initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<Transition> trans_;
  std::vector<std::vector<int>> out_;
};

// Probabilistic automaton: host NFA plus one weight per host transition.
struct Pfa {
  Nfa host;
  std::vector<Rational> weights;
  bool is_simple() const;
};

struct ParsedAutomaton {
  Nfa nfa;
  std::optional<std::vector<Rational>> weights;  // present for `pfa` blocks
  bool is_pfa() const { return weights.has_value(); }
  Pfa pfa() const;
};

ParsedAutomaton parse_automaton(std::string_view text);
Nfa parse_nfa(std::string_view text);
std::string serialize(const Nfa& a);
std::string serialize(const Pfa& p);

// Keep only states that are reachable and co-reachable (the initial state always stays).
// `kept`, when given, receives the old index of every new state.
Nfa trim(const Nfa& a, std::vector<int>* kept = nullptr);
bool is_trim(const Nfa& a);

// Sub-automaton keeping only the transitions flagged in `keep` (state indices unchanged).
// `kept`, when given, receives the old index of every new transition.
Nfa restrict_transitions(const Nfa& a, const std::vector<bool>& keep,
                         std::vector<int>* kept = nullptr);

struct SccDecomposition {
  std::vector<int> comp_of;                 // state -> component id
  std::vector<std::vector<int>> components;  // ids in reverse topological order (sinks first)
  std::vector<std::vector<int>> succ;        // condensation edges, deduplicated
  std::vector<bool> bottom;                  // no outgoing condensation edge
  std::vector<bool> cyclic;                  // contains at least one internal edge
};

SccDecomposition scc_graph(const std::vector<std::vector<int>>& adj);
SccDecomposition scc_decompose(const Nfa& a);

StateSet post(const Nfa& a, const StateSet& s, int sym);
StateSet reachable_states(const Nfa& a);
StateSet coreachable_states(const Nfa& a);
// delta(q0, w)
StateSet reach_after(const Nfa& a, const Word& w);
bool accepts(const Nfa& a, const Word& w);

// All accepting runs of w, in lexicographic order of state sequences.
std::vector<Run> accepting_runs(const Nfa& a, const Word& w, size_t limit = SIZE_MAX);
BigInt count_accepting_runs(const Nfa& a, const Word& w);
std::vector<int> run_states(const Nfa& a, const Run& r);

// Word syntax: concatenated symbols when every symbol is one character,
// otherwise comma separated. "" and "eps" denote the empty word.
Word parse_word(const Nfa& a, std::string_view text);
std::string format_word(const Nfa& a, const Word& w);
std::string format_set(const Nfa& a, const StateSet& s);

std::string to_dot(const Nfa& a, const std::vector<Rational>* weights = nullptr);

// Every word over the alphabet of length <= max_len, shortlex order.
void for_each_word(int num_symbols, int max_len, const std::function<void(const Word&)>& f);

}  // namespace resolvex
