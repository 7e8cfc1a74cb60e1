#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tensorpow/bigcount.hpp"
#include "tensorpow/numeric.hpp"
#include "tensorpow/spectrum.hpp"

namespace tensorpow {

// Exact hyperbolic-cross count A_N(r, l) = #{n in {N, N+1, ...}^l :
// n_1 * ... * n_l <= r}.  r may be fractional; counts depend on floor(r).
BigCount a_count(std::uint64_t N, double r, unsigned l);

struct Sandwich {
  double lower = 0.0;
  double upper = 0.0;
};

// r*(ln(r/2^l)^{l-1}/(l-1)! - ln(r/2^l)^{l-2}/(l-2)!) <= A_2(r,l)
//   <= r*(ln r)^{l-1}/(l-1)!.  Requires l >= 2 and r >= 4^l; the lower
// bound may be negative near the left end of its range.
Sandwich a2_sandwich(double r, unsigned l);

// Coarse bracket valid for every r: A_2(r,l) <= r^{1+delta}/delta^{l-1}
// (any delta > 0) and A_2(r,l) >= r/(3*2^{l-1}) once r >= 2^l (0 below).
Sandwich a2_coarse_bounds(double r, unsigned l, double delta);

// #{n : tau(n) = 2^{-k}} for the dyadic d-fold product.
BigCount dyadic_level_count(unsigned k, unsigned d);
// N(k, d) = sum_{j<=k} dyadic_level_count(j, d); k = -1 gives 0.
BigCount dyadic_cumulative(std::int64_t k, unsigned d);

// --- tensor product counting -------------------------------------------

enum class Cmp { ge, gt };

// #{(n_1..n_d) : prod sigma_j(n_j) >= t} and the strict variant, with the
// comparison done in log space under the active tie tolerance.
struct CountQuery {
  std::vector<UnivariateSpectrum> spectra;
  xreal log_threshold;
  Cmp cmp = Cmp::ge;

  static CountQuery power(UnivariateSpectrum s, unsigned d, xreal log_t,
                          Cmp cmp = Cmp::ge);
  static CountQuery product(std::vector<UnivariateSpectrum> spectra,
                            xreal log_t, Cmp cmp = Cmp::ge);
};

struct CountOptions {
  // Abort with an error once the count passes this (guards runaway queries).
  BigCount ceiling = BigCount(1) << 256;
  // Stop early once the non-strict count reaches this target; the result is
  // then flagged incomplete and both counts are lower bounds.
  std::optional<BigCount> at_least;
};

struct CountPair {
  BigCount ge;
  BigCount gt;
  bool complete = true;
  BigCount tie_class() const { return ge - gt; }
};

// Both counts in one pass, so tie-class sizes are exact by construction.
CountPair tensor_count_pair(const CountQuery& q, const CountOptions& opts = {});

// The single count selected by q.cmp.
BigCount tensor_count(const CountQuery& q, const CountOptions& opts = {});

// Distinct achievable log values of prod sigma_j(n_j) inside [lo, hi),
// descending, deduplicated by the tie tolerance.  Used to snap bisection
// results onto exact values; the window is expected to be narrow.
std::vector<xreal> achievable_values_in(
    const std::vector<UnivariateSpectrum>& spectra, const xreal& lo,
    const xreal& hi);

}  // namespace tensorpow
