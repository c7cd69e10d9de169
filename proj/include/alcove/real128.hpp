#pragma once

#include <quadmath.h>

// Quad-precision scalar used inside the alternating lattice sums.  The killed
// heat kernel at large time (and the theta sums at small level) are tiny
// differences of O(1) terms: the condition number grows like exp(2*pi^2*|rho|^2*t),
// which exhausts double (and brushes against long double) well inside the
// parameter ranges we evaluate.  113-bit mantissas keep the relative error of
// every kernel below 1e-20 across the whole tested range, so downstream
// tolerances never have to budget for summation noise.

namespace alcove {

using real128 = __float128;

inline real128 q_exp(real128 x) { return expq(x); }
inline real128 q_sqrt(real128 x) { return sqrtq(x); }
inline real128 q_log(real128 x) { return logq(x); }
inline real128 q_abs(real128 x) { return fabsq(x); }
inline real128 q_pow(real128 x, real128 y) { return powq(x, y); }

} // namespace alcove
