#include "tensorpow/tractability.hpp"

/*
  Polynomial tractability of a d-indexed scale of tensor-power problems.

  The decision rides on a_2(T_d) = sigma_d(1)^{d-1} sigma_d(2): the scale is
  strongly polynomially tractable exactly when a_2(T_d) decays polynomially
  in d, and not polynomially tractable when a_2(T_d) is bounded away from
  zero.  classify() measures the decay on a d grid: a min/max ratio above
  `bounded_ratio` settles "not polynomial"; otherwise a least-squares fit of
  log a_2 against log d must show slope <= slope_threshold with r^2 >=
  r2_threshold to settle "strongly polynomial".  Anything else, including a
  detected violation of monotonicity in d, stays inconclusive with a
  diagnostic.  n(eps, d) counts are attached as exact evidence.
*/

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "tensorpow/hypercount.hpp"

namespace tensorpow {

BigCount info_complexity(const UnivariateSpectrum& s, unsigned d, double eps) {
  if (!s.valid())
    throw std::domain_error("info_complexity: invalid spectrum handle");
  if (d < 1) throw std::domain_error("info_complexity: d must be >= 1");
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::domain_error("info_complexity: eps must be positive and finite");
  return tensor_count(CountQuery::power(s, d, log(xreal(eps)), Cmp::ge));
}

double SmoothnessRule::at(unsigned d) const {
  if (d < 1) throw std::domain_error("SmoothnessRule::at: d must be >= 1");
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::log2ceil:
      return std::max(1.0, std::ceil(std::log2(static_cast<double>(d))));
    case Kind::power:
      return std::pow(static_cast<double>(d), value);
  }
  throw std::logic_error("SmoothnessRule::at: unknown kind");
}

std::string SmoothnessRule::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::constant:
      os << "s=" << value;
      break;
    case Kind::log2ceil:
      os << "s=ceil(log2 d)";
      break;
    case Kind::power:
      os << "s=d^" << value;
      break;
  }
  return os.str();
}

ProblemFamily torus_family(TorusNorm norm, double gamma, double a, double b,
                           SmoothnessRule rule) {
  std::ostringstream os;
  os << "torus-" << torus_norm_name(norm) << "(gamma=" << gamma << ", [" << a
     << ", " << b << "], " << rule.name() << ")";
  return {os.str(), [=](unsigned d) {
            return torus_spectrum(norm, rule.at(d), gamma, a, b);
          }};
}

ProblemFamily cube_family(double a, double b, SmoothnessRule rule) {
  std::ostringstream os;
  os << "cube([" << a << ", " << b << "], " << rule.name() << ")";
  // Only two smoothness levels exist; the rule is snapped to them.
  return {os.str(), [=](unsigned d) {
            return rule.at(d) < 2.0 ? cube_h1_spectrum(a, b)
                                    : cube_h2_spectrum(a, b);
          }};
}

ProblemFamily jacobi_family(double alpha, double beta, SmoothnessRule rule) {
  std::ostringstream os;
  os << "jacobi(alpha=" << alpha << ", beta=" << beta << ", " << rule.name()
     << ")";
  return {os.str(), [=](unsigned d) {
            return jacobi_spectrum(alpha, beta, rule.at(d));
          }};
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::strongly_polynomial:
      return "strongly_polynomial";
    case Verdict::not_polynomial:
      return "not_polynomial";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  throw std::logic_error("verdict_name: unknown verdict");
}

std::string TractabilityVerdict::summary() const {
  std::ostringstream os;
  os << "verdict: " << verdict_name(verdict) << " (slope " << slope << ", r2 "
     << r2 << ", a2 min/max " << a2_min_over_max << ", d " << d_range << ")";
  if (!diagnostic.empty()) os << "; " << diagnostic;
  return os.str();
}

TractabilityVerdict classify(const ProblemFamily& family,
                             const FitPolicy& policy) {
  if (!family.generator)
    throw std::domain_error("classify: family has no generator");
  if (policy.d_grid.size() < 2)
    throw std::domain_error("classify: d grid needs at least two points");
  for (std::size_t i = 0; i < policy.d_grid.size(); ++i) {
    if (policy.d_grid[i] < 1 ||
        (i > 0 && policy.d_grid[i] <= policy.d_grid[i - 1]))
      throw std::domain_error("classify: d grid must be strictly increasing");
  }

  std::map<unsigned, UnivariateSpectrum> cache;
  const auto spectrum_at = [&](unsigned d) -> const UnivariateSpectrum& {
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, family.generator(d)).first;
    return it->second;
  };

  TractabilityVerdict out;
  {
    std::ostringstream os;
    os << policy.d_grid.front() << ".." << policy.d_grid.back();
    out.d_range = os.str();
  }

  bool trivial = false;
  for (unsigned d : policy.d_grid) {
    const UnivariateSpectrum& sp = spectrum_at(d);
    const xreal a2 =
        xreal(d - 1) * sp.log_sigma1() + sp.log_sigma2();
    if (a2 == neg_inf()) trivial = true;
    out.a2_log.push_back(to_double(a2));
  }

  // Evidence is informational; rows whose exact count overflows the counting
  // ceiling are omitted rather than aborting the classification.
  for (double eps : policy.eps_grid)
    for (unsigned d : policy.evidence_d) {
      try {
        out.evidence.push_back(
            {eps, d, info_complexity(spectrum_at(d), d, eps)});
      } catch (const std::overflow_error&) {
      }
    }

  if (trivial) {
    out.verdict = Verdict::strongly_polynomial;
    out.a2_min_over_max = 0.0;
    out.diagnostic =
        "a_2(T_d) vanishes on the grid; at most one tensor value is nonzero "
        "per problem";
    return out;
  }

  for (std::size_t i = 1; i < out.a2_log.size(); ++i) {
    if (out.a2_log[i] > out.a2_log[i - 1] + 1e-9) {
      std::ostringstream os;
      os << "a_2(T_d) increases from d=" << policy.d_grid[i - 1]
         << " to d=" << policy.d_grid[i]
         << "; the decay hypotheses do not apply";
      out.diagnostic = os.str();
      out.verdict = Verdict::inconclusive;
      return out;
    }
  }

  double lo = out.a2_log.front(), hi = out.a2_log.front();
  for (double y : out.a2_log) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  out.a2_min_over_max = std::exp(lo - hi);
  if (out.a2_min_over_max >= policy.bounded_ratio) {
    out.verdict = Verdict::not_polynomial;
    return out;
  }

  // Least squares of log a_2 against log d.
  const std::size_t m = policy.d_grid.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(policy.d_grid[i]));
    sx += x;
    sy += out.a2_log[i];
    sxx += x * x;
    sxy += x * out.a2_log[i];
  }
  const double denom = m * sxx - sx * sx;
  out.slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - out.slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(policy.d_grid[i]));
    const double e = out.a2_log[i] - (intercept + out.slope * x);
    const double c = out.a2_log[i] - sy / m;
    ss_res += e * e;
    ss_tot += c * c;
  }
  out.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;

  if (out.slope <= policy.slope_threshold && out.r2 >= policy.r2_threshold) {
    out.verdict = Verdict::strongly_polynomial;
  } else {
    out.verdict = Verdict::inconclusive;
    std::ostringstream os;
    os << "decay fit slope=" << out.slope << " r2=" << out.r2
       << " misses the thresholds (slope <= " << policy.slope_threshold
       << ", r2 >= " << policy.r2_threshold << ")";
    out.diagnostic = os.str();
  }
  return out;
}

}  // namespace tensorpow
