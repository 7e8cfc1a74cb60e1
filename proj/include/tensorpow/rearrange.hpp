#pragma once

#include <cstdint>
#include <vector>

#include "tensorpow/bigcount.hpp"
#include "tensorpow/hypercount.hpp"
#include "tensorpow/numeric.hpp"
#include "tensorpow/spectrum.hpp"

namespace tensorpow {

// Exact answer for tau(n) with its counting certificate.  The invariant
// count_gt < n <= count_ge always holds for the queried n.
struct TauQueryResult {
  xreal log_tau;
  BigCount count_ge;  // #{tuples with value >= tau(n)}
  BigCount count_gt;  // #{tuples with value >  tau(n)}
  BigCount tie_class() const { return count_ge - count_gt; }
};

struct TopkOptions {
  std::size_t budget = 10'000'000;  // max values emitted (memory guard)
};

// First k values of the nonincreasing rearrangement of the tensor product,
// as natural logs, ties repeated.
std::vector<xreal> tau_topk(const std::vector<UnivariateSpectrum>& spectra,
                            std::size_t k, const TopkOptions& opts = {});
std::vector<xreal> tau_topk(const UnivariateSpectrum& s, unsigned d,
                            std::size_t k, const TopkOptions& opts = {});

// Exact tau(n) by bisection over log thresholds plus a snap onto the
// achievable value, certified by tensor counts.
TauQueryResult tau_at(const std::vector<UnivariateSpectrum>& spectra,
                      std::uint64_t n, const CountOptions& copts = {});
TauQueryResult tau_at(const UnivariateSpectrum& s, unsigned d, std::uint64_t n,
                      const CountOptions& copts = {});

// Independent oracle: enumerates the full box {1..box_limit}^d, selects the
// n-th largest value, and certifies that no tuple outside the box can reach
// it (errors out otherwise).  Requires box_limit^d <= 2.5e8.
TauQueryResult tau_brute(const std::vector<UnivariateSpectrum>& spectra,
                         std::uint64_t n, std::uint64_t box_limit);
TauQueryResult tau_brute(const UnivariateSpectrum& s, unsigned d,
                         std::uint64_t n, std::uint64_t box_limit);

}  // namespace tensorpow
