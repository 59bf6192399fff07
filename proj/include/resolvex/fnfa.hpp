#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resolvex/langops.hpp"
#include "resolvex/nfa.hpp"
#include "resolvex/pfa.hpp"

namespace resolvex {

// w = x0 y1 x1 ... yl xl with loop data per y-block.
struct BadWordWitness {
  std::vector<Word> x;  // l + 1 blocks
  std::vector<Word> y;  // l blocks, nonempty
  std::vector<StateSet> q_sets;
  std::vector<int> pivots;
  std::vector<StateSet> r_sets;

  int loops() const { return static_cast<int>(y.size()); }
  Word word() const;
  // offset of y_i (0-based i) inside word()
  size_t y_start(int i) const;
};

struct BadWordCheck {
  bool ok = false;
  std::vector<std::string> diagnostics;  // one entry per failed condition
};

BadWordCheck verify_bad_word(const Nfa& a, const Support& s, const BadWordWitness& w);

std::string format_witness(const Nfa& a, const BadWordWitness& w);
BadWordWitness parse_witness(const Nfa& a, std::string_view text);

struct BadWordSearch {
  std::optional<BadWordWitness> witness;
  bool truncated = false;  // budget or length cap hit before exhausting the abstraction
  size_t explored = 0;
};

// Breadth-first search of the branching/looping abstraction. length_cap 0 = no cap.
BadWordSearch fnfa_find_bad_word(const Nfa& a, const Support& s, size_t length_cap = 0,
                                 size_t budget = 2000000);

enum class Verdict { Yes, No, Unknown };
const char* verdict_name(Verdict v);

struct SupportVerdict {
  Support support;
  Verdict bad = Verdict::Unknown;  // Yes: a bad word was found
  std::optional<BadWordWitness> witness;
  bool truncated = false;
};

struct FnfaReport {
  Verdict resolvable = Verdict::Unknown;
  int degree = 1;
  std::vector<SupportVerdict> supports;
  std::optional<Support> good_support;
  std::optional<Resolver> resolver;  // uniform over the good support
};

// Throws InfiniteAmbiguity. `jobs` > 1 checks supports concurrently.
FnfaReport fnfa_check_pr(const Nfa& a, size_t length_cap = 0, int jobs = 1, int degree_cap = 8);

}  // namespace resolvex
