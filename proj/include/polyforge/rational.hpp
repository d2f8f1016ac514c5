#ifndef POLYFORGE_RATIONAL_HPP
#define POLYFORGE_RATIONAL_HPP

#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace polyforge {

/// Exact arbitrary-precision rational; GMP-backed, always stored in lowest
/// terms with positive denominator.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or precondition-violating input (CLI exit code 1).
struct InputError : Error {
  using Error::Error;
};

/// An exact check that the pipeline relies on failed (CLI exit code 2).
/// Never silently ignored.
struct CertificateError : Error {
  using Error::Error;
};

/// Oracle invoked outside its configured bounds.
struct BoundsError : InputError {
  using InputError::InputError;
};

inline Int numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

/// Renders q as "p/q", or just "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "p/q" or "p" (optionally signed). Throws InputError on junk.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = (c >= '0' && c <= '9') || c == '/' || ((c == '-' || c == '+') && (i == 0 || s[i - 1] == '/'));
    if (!ok) throw InputError("bad rational literal: " + s);
  }
  try {
    Rat q(s);
    return q;
  } catch (const std::exception&) {
    throw InputError("bad rational literal: " + s);
  }
}

}  // namespace polyforge

#endif  // POLYFORGE_RATIONAL_HPP
