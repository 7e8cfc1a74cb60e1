#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tensorpow/numeric.hpp"

namespace tensorpow {

// Polynomial decay certificate: sigma(n) <= C * n^{-s} for every n >= 2.
// `certified` is false when C was fitted from a sampled prefix only.
struct Envelope {
  double C = 0.0;
  double s = 0.0;
  bool certified = false;
};

enum class TorusNorm { circ, star, plus, hash };

std::string torus_norm_name(TorusNorm norm);

namespace detail {
class SpectrumImpl;
}

// A nonincreasing sequence sigma(1) >= sigma(2) >= ... > 0 (zero tails only
// for finite-rank spectra), evaluated lazily in log space and cached.
// Immutable after construction; safe to share across threads.
class UnivariateSpectrum {
 public:
  UnivariateSpectrum() = default;
  explicit UnivariateSpectrum(std::shared_ptr<const detail::SpectrumImpl> impl);

  bool valid() const { return impl_ != nullptr; }

  // Natural log of sigma(n), n >= 1.  Finite-rank spectra return -inf
  // beyond the rank; prefix-only custom spectra throw beyond the prefix.
  xreal log_value(std::uint64_t n) const;
  double value(std::uint64_t n) const;

  xreal log_sigma1() const;
  xreal log_sigma2() const;

  // v = #{n >= 2 : sigma(n) = sigma(2)}; nullopt when the class is infinite
  // (rank-1 spectra, where sigma(2) = 0).
  std::optional<std::uint64_t> tie_multiplicity() const;

  const std::optional<Envelope>& envelope() const;

  // Finite-rank spectra: sigma(n) = 0 for n > rank.
  std::optional<std::uint64_t> rank() const;

  const std::string& label() const;

  // Largest n with log_value(n) >= t; 0 when even n = 1 is below.
  std::uint64_t last_index_not_below(const xreal& t) const;
  // Largest n with log_value(n) > t; 0 when none.
  std::uint64_t last_index_above(const xreal& t) const;

  // Identity of the underlying sequence (shared caches compare equal).
  const void* identity() const { return impl_.get(); }

 private:
  std::shared_ptr<const detail::SpectrumImpl> impl_;
};

// Frequencies of the fourth-order boundary problem behind the H^2 cube
// spectrum.  `branch` tags which of the two defining equations the root
// solves; `residual` is the value of that equation at omega after scaling
// by cosh (always <= 1e-12).
struct FrequencyRoot {
  double omega = 0.0;
  int branch = 0;  // 1 or 2
  double residual = 0.0;
};

// --- interval families ------------------------------------------------

// Periodic Sobolev spectrum on [a, b] with scaling gamma > 0.  The four
// norms share sigma(n) = 1/w(eta * floor(n/2)), eta = 2*pi / (gamma*(b-a)):
//   circ: w(x) = (sum_{l=0..s} x^{2l})^{1/2}      (s must be a positive integer)
//   star: w(x) = (1 + x^{2s})^{1/2}
//   plus: w(x) = (1 + x^2)^{s/2}
//   hash: w(x) = (1 + x)^s
UnivariateSpectrum torus_spectrum(TorusNorm norm, double s, double gamma,
                                  double a, double b);

// sigma(n) = (1 + (n-1)/a)^{-s} with a = (alpha + beta + 1)/2.
UnivariateSpectrum jacobi_spectrum(double alpha, double beta, double s);

// sigma(n) = (1 + ((n-1)*pi/(b-a))^2)^{-1/2}.
UnivariateSpectrum cube_h1_spectrum(double a, double b);

// sigma(n) = (1 + omega^2 + omega^4)^{-1/2} over the merged frequency set;
// roots are found on demand and cached (prefix_len primes the cache).
UnivariateSpectrum cube_h2_spectrum(double a, double b,
                                    std::size_t prefix_len = 64);

// First `count` frequencies (omega = 0 included) of the H^2 problem on
// [a, b], merged across both branches, strictly increasing.
std::vector<FrequencyRoot> find_h2_frequencies(double a, double b,
                                               std::size_t count);

// sigma(n) = 2^{-floor(log2 n)}.
UnivariateSpectrum dyadic_spectrum();

// Explicit tail rule for custom spectra: sigma(n) = C * n^{-s} beyond the
// prefix.
struct TailRule {
  double C = 0.0;
  double s = 0.0;
};

// Spectrum backed by an explicit nonincreasing positive prefix.  Queries
// beyond the prefix fail unless a tail rule is given; `finite_rank` makes
// the tail exactly zero instead.
UnivariateSpectrum custom_spectrum(std::vector<double> prefix,
                                   std::optional<TailRule> tail = std::nullopt,
                                   bool finite_rank = false);

// --- family descriptors (CLI + bounds dispatch) ------------------------

enum class FamilyKind { torus, jacobi, cube_h1, cube_h2, dyadic, custom };

struct FamilyDescriptor {
  FamilyKind kind = FamilyKind::dyadic;
  TorusNorm norm = TorusNorm::hash;
  double smoothness = 1.0;  // torus / jacobi s
  double gamma = 1.0;       // torus scaling
  double lo = 0.0, hi = 1.0;
  double alpha = 0.0, beta = 0.0;  // jacobi weight exponents
  std::vector<double> prefix;      // custom
  std::optional<TailRule> tail;    // custom
  bool finite_rank = false;        // custom

  std::string name() const;
};

UnivariateSpectrum make_spectrum(const FamilyDescriptor& fam);

}  // namespace tensorpow
