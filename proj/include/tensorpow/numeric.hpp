#pragma once

// Log-space numeric core. Every spectral value in this library is carried as
// a natural log in binary128 (33 significant digits), so products of
// thousands of factors neither underflow nor lose the separation needed for
// exact tie detection.

#include <boost/multiprecision/float128.hpp>

#include <cstdint>
#include <limits>
#include <string>

namespace tensorpow {

using xreal = boost::multiprecision::float128;

inline xreal neg_inf() { return -std::numeric_limits<xreal>::infinity(); }

enum class Precision { dbl, extended };

// Process-wide float backend, normally set once at startup from the
// TENSORPOW_PRECISION environment variable ("double" or "dd", default "dd").
// In double mode every evaluated log value is truncated to double and the
// tie tolerance widens accordingly; extended mode is the certified default.
Precision active_precision();
void set_active_precision(Precision p);
Precision precision_from_env();
std::string precision_name(Precision p);

// Relative tie tolerance in log space: values a, b belong to one tie class
// iff |a - b| <= tie_epsilon() * max(1, |a|, |b|).
double tie_epsilon();

xreal tie_slack(const xreal& a, const xreal& b);

enum class LogCmp { below, tie, above };

// Compares a log value against a log threshold with the active tie slack.
LogCmp log_compare(const xreal& value, const xreal& threshold);

// Rounds an evaluated log value to the precision of the active backend.
xreal round_to_backend(const xreal& v);

inline double to_double(const xreal& v) { return static_cast<double>(v); }

}  // namespace tensorpow
