#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resolvex/nfa.hpp"

namespace resolvex {

enum class LanguageMode { Empty, Universal, Includes, Equivalent };

struct LanguageVerdict {
  bool holds = true;
  std::optional<Word> counterexample;  // shortest, shortlex-least
};

// Includes: L(a) contains L(b). Counterexamples:
//   Empty -> a word of L(a); Universal -> a word outside L(a);
//   Includes -> a word of L(b) \ L(a); Equivalent -> a word of the symmetric difference.
LanguageVerdict language_relation(const Nfa& a, const Nfa* b, LanguageMode mode);
std::optional<LanguageMode> parse_language_mode(std::string_view s);

// Transition subset of a host automaton.
struct Support {
  std::vector<bool> keep;
  int size() const;
  friend bool operator==(const Support&, const Support&) = default;
};

Support full_support(const Nfa& a);
Nfa apply_support(const Nfa& a, const Support& s);
// Every (state, letter) group with host transitions keeps at least one.
bool covers_all_groups(const Nfa& a, const Support& s);
bool preserves_language(const Nfa& a, const Support& s);

// Language-preserving supports, full support first. `limit` bounds the number returned.
std::vector<Support> enumerate_supports(const Nfa& a, size_t limit = SIZE_MAX);

// "full" or a comma list of dropped transitions written src.sym.dst, optionally prefixed by '-'.
Support parse_support(const Nfa& a, std::string_view spec);
std::string format_support(const Nfa& a, const Support& s);
std::string format_transition(const Nfa& a, int t);

}  // namespace resolvex
