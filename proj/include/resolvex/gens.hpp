#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "resolvex/nfa.hpp"

namespace resolvex {

// Initial state q0 and n branches, one per j in 1..n, each a chain through the
// m-subsets of {1..n} in lexicographic order; q<j>_<subset> accepts iff j is in the subset.
Nfa gen_spectrum(int m, int n);

struct UnaryCycle {
  int length = 1;
  std::vector<int> accepting;  // positions in [0, length)
};

// q0 (initial, accepting) enters cycle j at position 1 mod length, so a^n reaches
// position n mod length. Gadget: q0 -> t1 (accepting), q0 -> t2, t2 -> t2, t2 -> t3 (accepting).
Nfa gen_unary_hardness(const std::vector<UnaryCycle>& cycles);
// "2:0,1;3:0" style: cycles separated by ';', positions by ','; "*" accepts every position.
std::vector<UnaryCycle> parse_cycles(std::string_view spec);

// DFAs over {a,b}; throws NonDeterministic, AlphabetMismatch, Parameter (empty list).
Nfa gen_pspace_hardness(const std::vector<Nfa>& dfas);

struct SimplePfaCheck {
  bool is_simple_unique = false;
  std::optional<Pfa> pfa;
};
SimplePfaCheck unique_simple_pfa(const Nfa& a);

// Throws NonSimple, NonUniversal, Parameter.
Nfa gen_undecidability(const Pfa& p);

struct GadgetCheck {
  bool ok = true;
  std::vector<std::string> diagnostics;
};
// At most two transitions per (state, letter), plus the expected alphabet shape.
GadgetCheck validate_undecidability(const Nfa& gadget, const Pfa& host);

}  // namespace resolvex
