#include "resolvex/rational.hpp"

#include <cmath>

#include "resolvex/error.hpp"

namespace resolvex {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::DuplicateState: return "DuplicateState";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorKind::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorKind::NotUnambiguous: return "NotUnambiguous";
    case ErrorKind::NotPositivelyResolvable: return "NotPositivelyResolvable";
    case ErrorKind::InfiniteAmbiguity: return "InfiniteAmbiguity";
    case ErrorKind::AmbiguityUnknown: return "AmbiguityUnknown";
    case ErrorKind::NotUnary: return "NotUnary";
    case ErrorKind::PeriodTooLarge: return "PeriodTooLarge";
    case ErrorKind::Parameter: return "Parameter";
    case ErrorKind::NonSimple: return "NonSimple";
    case ErrorKind::NonUniversal: return "NonUniversal";
    case ErrorKind::NonDeterministic: return "NonDeterministic";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorKind::Syntax, "malformed rational '" + std::string(text) + "'");
  BigInt n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw Error(ErrorKind::Syntax, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  return neg ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rationalize(double x, long long max_den) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NumericalFailure, "non-finite value");
  bool neg = x < 0;
  double v = std::fabs(x);
  // convergents h/k
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(frac);
    if (a > 9e15) break;
    long long ai = static_cast<long long>(a);
    long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) {
      // best semiconvergent within the cap
      long long t = (max_den - k0) / k1;
      long long hs = t * h1 + h0, ks = t * k1 + k0;
      if (t > 0 && std::fabs(static_cast<double>(hs) / ks - v) <
                       std::fabs(static_cast<double>(h1) / k1 - v)) {
        h1 = hs;
        k1 = ks;
      }
      break;
    }
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double rem = frac - a;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  Rational r{BigInt{h1}, BigInt{k1}};
  return neg ? Rational(-r) : r;
}

}  // namespace resolvex
