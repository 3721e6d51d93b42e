#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace mixident {

/// Exact rational scalar. Constructions and certificates run on this type;
/// search and simulation run on double. Conversion between the two is always
/// explicit (see to_double).
using Rat = mpq_class;

/// Rational -> double with IEEE round-to-nearest, ties-to-even.
double to_double(const Rat& q);
inline double to_double(double x) { return x; }

/// Parses "p/q" or "p" (arbitrary precision). Throws io_error on garbage.
Rat rat_from_string(const std::string& s);

/// Canonical "p/q" form; integers print without the "/1".
std::string rat_to_string(const Rat& q);

inline Rat rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Numeric backend traits shared by the templated modules.
template <class T>
struct num;

template <>
struct num<double> {
  static constexpr bool exact = false;
  static double from_int(long v) { return static_cast<double>(v); }
  static double ratio(long n, long d) {
    return static_cast<double>(n) / static_cast<double>(d);
  }
  static double abs(double x) { return std::fabs(x); }
  /// Component-merge tolerance used by canonicalize().
  static double merge_tol() { return 1e-10; }
  /// Tolerance on probability-mass sums.
  static double mass_tol() { return 1e-12; }
};

template <>
struct num<Rat> {
  static constexpr bool exact = true;
  static Rat from_int(long v) { return Rat(v); }
  static Rat ratio(long n, long d) { return rat(n, d); }
  static Rat abs(const Rat& x) { return ::abs(x); }
  static Rat merge_tol() { return Rat(0); }
  static Rat mass_tol() { return Rat(0); }
};

}  // namespace mixident
