#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tensorpow/numeric.hpp"
#include "tensorpow/spectrum.hpp"

namespace tensorpow {

// Inputs of the preasymptotic two-sided estimate, pulled from a spectrum.
// General sigma(1) is handled by internal rescaling; sigma(2) < sigma(1)
// is required (the degenerate case has the closed form tau(n) = sigma(1)^d).
struct PreasymptoticParams {
  xreal log_sigma1;
  xreal log_sigma2;
  std::uint64_t v = 1;     // #{n >= 2 : sigma(n) = sigma(2)}
  double s = 0.0;          // envelope decay
  xreal log_C;             // envelope constant, sigma(n) <= C n^{-s}
  unsigned d = 1;

  // log(sigma(1)/sigma(2)) > 0.
  xreal log_gap() const { return log_sigma1 - log_sigma2; }
};

PreasymptoticParams make_preasymptotic_params(const UnivariateSpectrum& s,
                                              unsigned d);

// log of the upper bound sigma(1)^d * (Ctil(delta)/n)^{alpha(d,delta)},
// valid for every n >= 1 and delta in (0, 1].
xreal preasym_upper_log(const PreasymptoticParams& p, std::uint64_t n,
                        double delta);
// Exponent alpha(d, delta) and log Ctil(delta) of the normalized bound.
double preasym_alpha(const PreasymptoticParams& p, double delta);
xreal preasym_log_Ctil(const PreasymptoticParams& p, double delta);

// log of the lower bound sigma(1)^{d-1} * sigma(2) * n^{-beta(d,n)},
// valid for 2 <= n <= (1+v)^d.
xreal preasym_lower_log(const PreasymptoticParams& p, std::uint64_t n);
double preasym_beta(const PreasymptoticParams& p, std::uint64_t n);
bool preasym_lower_in_range(const PreasymptoticParams& p, std::uint64_t n);

// Asymptotic constant K of tau(n) ~ K * n^{-s} (log n)^{s(d-1)}.  The
// dyadic family has distinct limsup/liminf constants; families with a true
// limit carry them equal.
struct AsymptoticConstant {
  xreal log_upper;
  xreal log_lower;
  double s = 0.0;        // decay exponent of the envelope
  double log_power = 0;  // exponent of the log factor, s*(d-1)
};

AsymptoticConstant asym_constant(const FamilyDescriptor& fam, unsigned d);

// --- bound verification -------------------------------------------------

struct BoundRow {
  std::uint64_t n = 0;
  xreal log_tau;
  std::optional<xreal> log_lower;  // absent outside the validity window
  xreal log_upper;                 // min over the delta grid
  double best_delta = 0.0;
  std::optional<xreal> log_asym;   // informational envelope value
  bool pass = false;
};

struct BoundReport {
  PreasymptoticParams params;
  std::vector<BoundRow> rows;
  bool all_pass = true;
};

inline const std::vector<double>& default_delta_grid() {
  static const std::vector<double> grid{0.25, 0.5, 0.65, 1.0};
  return grid;
}

// Checks lower <= tau(n) <= min over the delta grid of the upper bound for
// every n in [n_lo, n_hi]; tau is enumerated exactly.  The asymptotic
// envelope column is informational (finite-n values routinely sit above the
// exact tau) and never affects `pass`.
BoundReport verify_bounds(const UnivariateSpectrum& s, unsigned d,
                          std::uint64_t n_lo, std::uint64_t n_hi,
                          const std::vector<double>& delta_grid =
                              default_delta_grid(),
                          const std::optional<FamilyDescriptor>& fam =
                              std::nullopt,
                          unsigned threads = 1);

}  // namespace tensorpow
