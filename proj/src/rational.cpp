#include "mixident/rational.hpp"

#include <mpfr.h>

#include <cctype>

#include "mixident/errors.hpp"

namespace mixident {

double to_double(const Rat& q) {
  // mpq_get_d truncates; go through a 53-bit mpfr value so the conversion
  // rounds to nearest with ties to even.
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDN);
  const double out = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return out;
}

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw io_error("empty rational literal");
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '-' &&
        c != '+') {
      throw io_error("bad rational literal: \"" + s + "\"");
    }
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw io_error("bad rational literal: \"" + s + "\"");
  if (q.get_den() == 0) throw io_error("zero denominator in \"" + s + "\"");
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) { return q.get_str(); }

}  // namespace mixident
