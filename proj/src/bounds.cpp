#include "tensorpow/bounds.hpp"

/*
  Two-sided preasymptotic estimate and asymptotic constants.

  With g = log(sigma(1)/sigma(2)) > 0 and a certified envelope
  sigma(n) <= C n^{-s} the normalized bounds are, for delta in (0, 1],

    tau(n) <= sigma(1)^d (Ctil/n)^alpha,  alpha = g / ((1+delta)/s g + log d),
                                          log Ctil = (C/sigma(1))^{(1+delta)/s} / delta,
    tau(n) >= sigma(1)^{d-1} sigma(2) n^{-beta},
                                          beta = g / log(1 + v d / log_{1+v} n),

  the lower bound on 2 <= n <= (1+v)^d with v the sigma(2) tie count.
  Everything is evaluated in log space; alpha and beta are dimensionless.

  The asymptotic constant of tau(n) ~ K n^{-s} (log n)^{s(d-1)} follows from
  C_1 = lim sigma(n) n^s as K = C_1^d / (d-1)!^s.  Families defined here have
  a true limit (torus and Jacobi directly, the cube via its frequency
  asymptotics); the dyadic staircase keeps limsup and liminf apart by a
  factor 2.
*/

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "tensorpow/bigcount.hpp"
#include "tensorpow/rearrange.hpp"

namespace tensorpow {

namespace {

xreal require_gap(const PreasymptoticParams& p, const char* who) {
  const xreal g = p.log_gap();
  if (!(g > 0))
    throw std::domain_error(std::string(who) +
                            ": sigma(2) must be strictly below sigma(1)");
  return g;
}

void require_delta(double delta, const char* who) {
  if (!(delta > 0.0) || delta > 1.0)
    throw std::domain_error(std::string(who) + ": delta must be in (0, 1]");
}

xreal alpha_x(const PreasymptoticParams& p, double delta, const char* who) {
  const xreal g = require_gap(p, who);
  if (!(p.s > 0.0))
    throw std::domain_error(std::string(who) + ": envelope decay s must be positive");
  if (p.d < 1) throw std::domain_error(std::string(who) + ": d must be >= 1");
  return g / (xreal(1 + delta) / xreal(p.s) * g + log(xreal(p.d)));
}

xreal beta_x(const PreasymptoticParams& p, std::uint64_t n, const char* who) {
  const xreal g = require_gap(p, who);
  if (n < 2) throw std::domain_error(std::string(who) + ": n must be >= 2");
  if (p.v < 1) throw std::domain_error(std::string(who) + ": tie count v must be >= 1");
  const xreal log_base_n = log(xreal(n)) / log(xreal(1 + p.v));
  return g / log(xreal(1) + xreal(p.v) * xreal(p.d) / log_base_n);
}

}  // namespace

PreasymptoticParams make_preasymptotic_params(const UnivariateSpectrum& s,
                                              unsigned d) {
  if (!s.valid())
    throw std::domain_error("make_preasymptotic_params: invalid spectrum handle");
  if (d < 1) throw std::domain_error("make_preasymptotic_params: d must be >= 1");

  PreasymptoticParams p;
  p.log_sigma1 = s.log_sigma1();
  p.log_sigma2 = s.log_sigma2();
  p.d = d;
  if (p.log_sigma2 == neg_inf())
    throw std::domain_error("make_preasymptotic_params: sigma(2) must be positive");
  if (log_compare(p.log_sigma2, p.log_sigma1) != LogCmp::below)
    throw std::domain_error(
        "make_preasymptotic_params: sigma(2) equals sigma(1); the "
        "rearrangement is flat there, tau(n) = sigma(1)^d on the whole tie "
        "block and the estimate does not apply");

  const auto v = s.tie_multiplicity();
  if (!v)
    throw std::domain_error(
        "make_preasymptotic_params: the sigma(2) tie class never ends, no "
        "decaying envelope exists");
  p.v = *v;

  const auto& env = s.envelope();
  if (!env)
    throw std::domain_error(
        "make_preasymptotic_params: spectrum carries no envelope sigma(n) <= "
        "C n^{-s}");
  p.s = env->s;
  p.log_C = log(xreal(env->C));
  return p;
}

double preasym_alpha(const PreasymptoticParams& p, double delta) {
  require_delta(delta, "preasym_alpha");
  return static_cast<double>(alpha_x(p, delta, "preasym_alpha"));
}

xreal preasym_log_Ctil(const PreasymptoticParams& p, double delta) {
  require_delta(delta, "preasym_log_Ctil");
  if (!(p.s > 0.0))
    throw std::domain_error("preasym_log_Ctil: envelope decay s must be positive");
  return exp(xreal(1 + delta) / xreal(p.s) * (p.log_C - p.log_sigma1)) /
         xreal(delta);
}

xreal preasym_upper_log(const PreasymptoticParams& p, std::uint64_t n,
                        double delta) {
  require_delta(delta, "preasym_upper_log");
  if (n < 1) throw std::domain_error("preasym_upper_log: n must be >= 1");
  const xreal a = alpha_x(p, delta, "preasym_upper_log");
  return xreal(p.d) * p.log_sigma1 +
         a * (preasym_log_Ctil(p, delta) - log(xreal(n)));
}

double preasym_beta(const PreasymptoticParams& p, std::uint64_t n) {
  return static_cast<double>(beta_x(p, n, "preasym_beta"));
}

xreal preasym_lower_log(const PreasymptoticParams& p, std::uint64_t n) {
  const xreal b = beta_x(p, n, "preasym_lower_log");
  return xreal(p.d - 1) * p.log_sigma1 + p.log_sigma2 - b * log(xreal(n));
}

bool preasym_lower_in_range(const PreasymptoticParams& p, std::uint64_t n) {
  if (n < 2) return false;
  return BigCount(n) <= big_pow(1 + p.v, p.d);
}

AsymptoticConstant asym_constant(const FamilyDescriptor& fam, unsigned d) {
  if (d < 1) throw std::domain_error("asym_constant: d must be >= 1");
  const xreal lg = lgamma(xreal(d));

  AsymptoticConstant k;
  switch (fam.kind) {
    case FamilyKind::torus: {
      k.s = fam.smoothness;
      const xreal base = log(xreal(fam.gamma) * (xreal(fam.hi) - xreal(fam.lo)) /
                             acos(xreal(-1)));
      k.log_upper = xreal(k.s) * (xreal(d) * base - lg);
      k.log_lower = k.log_upper;
      break;
    }
    case FamilyKind::jacobi: {
      k.s = fam.smoothness;
      const xreal a = (xreal(fam.alpha) + xreal(fam.beta) + 1) / 2;
      k.log_upper = xreal(k.s) * (xreal(d) * log(a) - lg);
      k.log_lower = k.log_upper;
      break;
    }
    case FamilyKind::cube_h1:
    case FamilyKind::cube_h2: {
      k.s = fam.kind == FamilyKind::cube_h1 ? 1.0 : 2.0;
      const xreal base =
          log((xreal(fam.hi) - xreal(fam.lo)) / acos(xreal(-1)));
      k.log_upper = xreal(k.s) * (xreal(d) * base - lg);
      k.log_lower = k.log_upper;
      break;
    }
    case FamilyKind::dyadic: {
      // tau(n) n / (ln n)^{d-1} oscillates between the two constants.
      k.s = 1.0;
      const xreal loglog2e = log(xreal(1) / log(xreal(2)));
      k.log_lower = xreal(d - 1) * loglog2e - lg;
      k.log_upper = log(xreal(2)) + k.log_lower;
      break;
    }
    case FamilyKind::custom: {
      if (!fam.tail)
        throw std::domain_error(
            "asym_constant: a custom spectrum without a tail rule has no "
            "asymptotic law");
      k.s = fam.tail->s;
      k.log_upper = xreal(d) * log(xreal(fam.tail->C)) - xreal(k.s) * lg;
      k.log_lower = k.log_upper;
      break;
    }
  }
  k.log_power = k.s * (d - 1);
  return k;
}

// --- bound verification -----------------------------------------------

BoundReport verify_bounds(const UnivariateSpectrum& s, unsigned d,
                          std::uint64_t n_lo, std::uint64_t n_hi,
                          const std::vector<double>& delta_grid,
                          const std::optional<FamilyDescriptor>& fam,
                          unsigned threads) {
  if (n_lo < 1 || n_lo > n_hi)
    throw std::domain_error("verify_bounds: need 1 <= n_lo <= n_hi");
  if (delta_grid.empty())
    throw std::domain_error("verify_bounds: empty delta grid");
  for (double delta : delta_grid) require_delta(delta, "verify_bounds");

  BoundReport report;
  report.params = make_preasymptotic_params(s, d);
  const PreasymptoticParams& p = report.params;

  std::optional<AsymptoticConstant> asym;
  if (fam) asym = asym_constant(*fam, d);

  const std::vector<xreal> taus = tau_topk(s, d, n_hi);

  report.rows.resize(n_hi - n_lo + 1);
  const auto fill_row = [&](std::uint64_t n, BoundRow& row) {
    row.n = n;
    row.log_tau = taus[n - 1];

    row.log_upper = preasym_upper_log(p, n, delta_grid.front());
    row.best_delta = delta_grid.front();
    for (std::size_t i = 1; i < delta_grid.size(); ++i) {
      const xreal u = preasym_upper_log(p, n, delta_grid[i]);
      if (u < row.log_upper) {
        row.log_upper = u;
        row.best_delta = delta_grid[i];
      }
    }
    if (preasym_lower_in_range(p, n)) row.log_lower = preasym_lower_log(p, n);
    if (asym && n >= 2) {
      const xreal ln_n = log(xreal(n));
      row.log_asym =
          asym->log_upper + xreal(asym->log_power) * log(ln_n) -
          xreal(asym->s) * ln_n;
    }

    row.pass = log_compare(row.log_tau, row.log_upper) != LogCmp::above &&
               (!row.log_lower ||
                log_compare(*row.log_lower, row.log_tau) != LogCmp::above);
  };

  const std::uint64_t rows = n_hi - n_lo + 1;
  if (threads > 1 && rows > 1024) {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (rows + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t first = n_lo + t * chunk;
      const std::uint64_t last = std::min(n_hi, first + chunk - 1);
      if (first > n_hi) break;
      pool.emplace_back([&, first, last] {
        for (std::uint64_t n = first; n <= last; ++n)
          fill_row(n, report.rows[n - n_lo]);
      });
    }
    for (auto& t : pool) t.join();
  } else {
    for (std::uint64_t n = n_lo; n <= n_hi; ++n)
      fill_row(n, report.rows[n - n_lo]);
  }

  for (const auto& row : report.rows) report.all_pass &= row.pass;
  return report;
}

}  // namespace tensorpow
