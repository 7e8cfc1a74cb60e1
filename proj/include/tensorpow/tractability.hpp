#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tensorpow/bigcount.hpp"
#include "tensorpow/spectrum.hpp"

namespace tensorpow {

// n(eps, d) = #{n : a_n(T_d^d) >= eps}, exact.  0 when eps > sigma(1)^d.
BigCount info_complexity(const UnivariateSpectrum& s, unsigned d, double eps);

// A d-indexed scale of univariate spectra (smoothness may grow with d).
struct ProblemFamily {
  std::string name;
  std::function<UnivariateSpectrum(unsigned d)> generator;
};

// Built-in smoothness growth rules for family constructors.
struct SmoothnessRule {
  enum class Kind { constant, log2ceil, power } kind = Kind::constant;
  double value = 1.0;  // constant s, or the exponent of d^value

  double at(unsigned d) const;
  std::string name() const;
};

ProblemFamily torus_family(TorusNorm norm, double gamma, double a, double b,
                           SmoothnessRule rule);
ProblemFamily cube_family(double a, double b, SmoothnessRule rule);
ProblemFamily jacobi_family(double alpha, double beta, SmoothnessRule rule);

struct FitPolicy {
  std::vector<unsigned> d_grid{4, 8, 16, 32, 64, 128, 256};
  double slope_threshold = -0.1;  // strongly polynomial needs slope <= this
  double r2_threshold = 0.9;      // ... with at least this fit quality
  double bounded_ratio = 0.5;     // not polynomial once min/max a_2 >= this
  std::vector<double> eps_grid{0.5, 0.25, 0.1};
  std::vector<unsigned> evidence_d{4, 16, 64, 256};
};

enum class Verdict { strongly_polynomial, not_polynomial, inconclusive };

std::string verdict_name(Verdict v);

struct EvidenceRow {
  double eps = 0.0;
  unsigned d = 0;
  BigCount n_eps_d;
};

struct TractabilityVerdict {
  Verdict verdict = Verdict::inconclusive;
  double slope = 0.0;
  double r2 = 0.0;
  double a2_min_over_max = 0.0;
  std::string d_range;              // grid actually used, e.g. "4..256"
  std::vector<double> a2_log;       // log a_2(T_d) per grid point
  std::vector<EvidenceRow> evidence;
  std::string diagnostic;           // non-empty when a hypothesis fails
  std::string summary() const;
};

// Classifies polynomial tractability from the decay of a_2(T_d) across the
// d grid.  A detected violation of "a_n(T_d) nonincreasing in d" forces an
// inconclusive verdict with a diagnostic.
TractabilityVerdict classify(const ProblemFamily& family,
                             const FitPolicy& policy = {});

}  // namespace tensorpow
