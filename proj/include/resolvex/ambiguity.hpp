#pragma once

#include <optional>

#include "resolvex/nfa.hpp"

namespace resolvex {

struct AmbiguityClass {
  enum Kind { Unambiguous, Finite, Infinite } kind = Unambiguous;
  int degree = 1;  // maximal accepting-run count; meaningful for Unambiguous and Finite
  std::optional<Word> witness;  // a word with `degree` runs (Finite), or a pumpable core (Infinite)
};

const char* ambiguity_kind_name(AmbiguityClass::Kind k);

bool is_unambiguous(const Nfa& a);
// States p != q and a word v with p -v-> p, p -v-> q, q -v-> q, all useful.
bool is_infinitely_ambiguous(const Nfa& a);

// Throws DegreeCapExceeded when the degree is finite but above `degree_cap`.
AmbiguityClass classify_ambiguity(const Nfa& a, int degree_cap = 8);

// Shortest word with at least m pairwise distinct accepting runs, if any.
std::optional<Word> word_with_runs(const Nfa& a, int m);

}  // namespace resolvex
