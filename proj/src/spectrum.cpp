#include "tensorpow/spectrum.hpp"

/*
  Univariate singular value sequences, evaluated as natural logs.

  Periodic Sobolev norms on [a, b] with scaling gamma share
    sigma(n) = 1 / w(eta * floor(n/2)),  eta = 2 pi / (gamma (b - a)),
  where w is one of
    circ  w(x) = (sum_{l=0..s} x^{2l})^{1/2}
    star  w(x) = (1 + x^{2s})^{1/2}
    plus  w(x) = (1 + x^2)^{s/2}
    hash  w(x) = (1 + x)^s.
  All four give sigma(1) = 1 and sigma(2) = sigma(3), so the tie class of
  sigma(2) has exactly two members.  Since w(x) >= x^s and
  floor(n/2) >= n/3 for n >= 2, the envelope sigma(n) <= (3/eta)^s n^{-s}
  holds for every n >= 2.

  Jacobi-type expansions give sigma(n) = (1 + (n-1)/a)^{-s} with
  a = (alpha + beta + 1)/2; the envelope constant max(1, a)^s is exact in
  both regimes of a.

  The H^1 cube sequence is sigma(n) = (1 + ((n-1) pi / (b-a))^2)^{-1/2};
  n sigma(n) is unimodal in n with peak at 1 + ((b-a)/pi)^2, which makes
  the least envelope constant computable from three candidates.

  The H^2 cube sequence is sigma(n) = (1 + w^2 + w^4)^{-1/2} over the
  merged frequency set of the clamped fourth-order eigenproblem; the roots
  come from the scanner in h2_roots.cpp.
*/

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectrum_impl.hpp"

namespace tensorpow {

namespace {

constexpr std::uint64_t kCacheMax = std::uint64_t(1) << 20;
constexpr std::uint64_t kIndexCap = std::uint64_t(1) << 62;

const xreal kPi = acos(xreal(-1));
const xreal kLn2 = log(xreal(2));

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string interval(double a, double b) {
  return "[" + fmt(a) + ", " + fmt(b) + "]";
}

}  // namespace

std::string torus_norm_name(TorusNorm norm) {
  switch (norm) {
    case TorusNorm::circ: return "circ";
    case TorusNorm::star: return "star";
    case TorusNorm::plus: return "plus";
    case TorusNorm::hash: return "hash";
  }
  throw std::logic_error("torus_norm_name: unknown norm");
}

namespace detail {

// --- base ---------------------------------------------------------------

xreal SpectrumImpl::raw(std::uint64_t n) const {
  if (rank_ && n > *rank_) return neg_inf();
  if (domain_limit_ && n > *domain_limit_)
    throw std::out_of_range(label_ + ": sigma(" + std::to_string(n) +
                            ") is past the stored prefix");
  return eval(n);
}

xreal SpectrumImpl::log_value(std::uint64_t n) const {
  if (n == 0) throw std::domain_error(label_ + ": index must be >= 1");
  if (n > kCacheMax) return round_to_backend(raw(n));
  {
    std::shared_lock lock(mu_);
    if (n <= cache_.size()) return round_to_backend(cache_[n - 1]);
  }
  std::unique_lock lock(mu_);
  while (cache_.size() < n) cache_.push_back(raw(cache_.size() + 1));
  return round_to_backend(cache_[n - 1]);
}

void SpectrumImpl::finalize() {
  log_s1_ = raw(1);
  if (!isfinite(log_s1_))
    throw std::domain_error(label_ + ": sigma(1) must be positive");

  std::uint64_t limit = kIndexCap;
  if (rank_) limit = std::min(limit, *rank_ + 1);
  if (domain_limit_) limit = std::min(limit, *domain_limit_);

  // Monotone head check; guards custom prefixes and the root scanner.
  const std::uint64_t head = std::min<std::uint64_t>(limit, 64);
  xreal prev = log_s1_;
  for (std::uint64_t n = 2; n <= head; ++n) {
    const xreal cur = raw(n);
    if (isfinite(cur) && !isfinite(prev))
      throw std::logic_error(label_ + ": positive value follows a zero at n = " +
                             std::to_string(n));
    if (isfinite(cur) && cur > prev + tie_slack(cur, prev))
      throw std::logic_error(label_ + ": sequence increases at n = " +
                             std::to_string(n));
    prev = cur;
  }

  log_s2_ = raw(2);
  if (tie_override_) {
    tie_state_ = TieState::known;
    tie_v_ = *tie_override_;
  } else if (!isfinite(log_s2_)) {
    tie_state_ = TieState::infinite;
  } else {
    const std::uint64_t scan_cap = std::min(limit, kCacheMax);
    std::uint64_t v = 1;
    tie_state_ = TieState::unknown;
    for (std::uint64_t n = 3; n <= scan_cap; ++n) {
      const xreal cur = raw(n);
      if (isfinite(cur) && abs(cur - log_s2_) <= tie_slack(cur, log_s2_)) {
        ++v;
        continue;
      }
      tie_state_ = TieState::known;
      tie_v_ = v;
      break;
    }
  }
}

std::optional<std::uint64_t> SpectrumImpl::tie_multiplicity() const {
  switch (tie_state_) {
    case TieState::known: return tie_v_;
    case TieState::infinite: return std::nullopt;
    default:
      throw std::runtime_error(label_ +
                               ": tie class of sigma(2) is not determined by "
                               "the stored prefix");
  }
}

std::uint64_t SpectrumImpl::last_index(const xreal& t, bool strict) const {
  const auto hit = [&](std::uint64_t n) {
    const xreal v = log_value(n);
    return strict ? v > t : v >= t;
  };
  if (!isfinite(t)) {
    if (t > 0) return 0;
    if (strict && rank_) return *rank_;
    throw std::domain_error(label_ +
                            ": threshold selects an infinite index set");
  }

  std::uint64_t limit = kIndexCap;
  if (rank_) limit = std::min(limit, *rank_);
  if (domain_limit_) limit = std::min(limit, *domain_limit_);

  if (!hit(1)) return 0;
  std::uint64_t lo = 1, hi = 1;
  for (;;) {
    if (hi == limit) {
      if (rank_ && limit == *rank_) return limit;
      if (domain_limit_ && limit == *domain_limit_)
        throw std::out_of_range(label_ +
                                ": threshold reaches past the stored prefix");
      throw std::runtime_error(label_ +
                               ": threshold admits more than 2^62 indices");
    }
    const std::uint64_t next = hi >= limit / 2 ? limit : hi * 2;
    if (hit(next)) {
      lo = hi = next;
    } else {
      hi = next;
      break;
    }
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (hit(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::uint64_t SpectrumImpl::last_index_not_below(const xreal& t) const {
  return last_index(t, false);
}

std::uint64_t SpectrumImpl::last_index_above(const xreal& t) const {
  return last_index(t, true);
}

// --- backends -----------------------------------------------------------

class TorusImpl final : public SpectrumImpl {
 public:
  TorusImpl(TorusNorm norm, double s, double gamma, double a, double b)
      : norm_(norm), s_(s) {
    eta_ = 2 * kPi / (xreal(gamma) * (xreal(b) - xreal(a)));
    label_ = "torus-" + torus_norm_name(norm) + "(s=" + fmt(s) +
             ", gamma=" + fmt(gamma) + ", " + interval(a, b) + ")";
    envelope_ = Envelope{std::pow(3.0 / static_cast<double>(eta_), s), s, true};
    tie_override_ = 2;
    finalize();
  }

 protected:
  xreal eval(std::uint64_t n) const override {
    const std::uint64_t k = n / 2;
    if (k == 0) return xreal(0);
    const xreal x = eta_ * xreal(k);
    switch (norm_) {
      case TorusNorm::circ: {
        // w^2 = (u^{s+1} - 1)/(u - 1), u = x^2; both factors share the
        // sign of u - 1, so logs of absolute values cancel it.
        const xreal u = x * x;
        if (u == 1) return -log(xreal(s_ + 1)) / 2;
        const xreal m = xreal(s_ + 1) * log(u);
        const xreal log_num = m > 80 ? m : log(abs(expm1(m)));
        return -(log_num - log(abs(u - 1))) / 2;
      }
      case TorusNorm::star: {
        const xreal m = 2 * xreal(s_) * log(x);
        const xreal logw2 = m > 0 ? m + log1p(exp(-m)) : log1p(exp(m));
        return -logw2 / 2;
      }
      case TorusNorm::plus:
        return -xreal(s_) / 2 * log1p(x * x);
      case TorusNorm::hash:
        return -xreal(s_) * log1p(x);
    }
    throw std::logic_error("torus eval: unknown norm");
  }

 private:
  TorusNorm norm_;
  double s_;
  xreal eta_;
};

class JacobiImpl final : public SpectrumImpl {
 public:
  JacobiImpl(double alpha, double beta, double s) : s_(s) {
    a_ = (xreal(alpha) + xreal(beta) + 1) / 2;
    label_ = "jacobi(alpha=" + fmt(alpha) + ", beta=" + fmt(beta) +
             ", s=" + fmt(s) + ")";
    envelope_ =
        Envelope{std::pow(std::max(1.0, static_cast<double>(a_)), s), s, true};
    tie_override_ = 1;
    finalize();
  }

 protected:
  xreal eval(std::uint64_t n) const override {
    return -xreal(s_) * log1p(xreal(n - 1) / a_);
  }

 private:
  double s_;
  xreal a_;
};

class CubeH1Impl final : public SpectrumImpl {
 public:
  CubeH1Impl(double a, double b) {
    kappa_ = kPi / (xreal(b) - xreal(a));
    label_ = "cube-h1" + interval(a, b);
    tie_override_ = 1;
    envelope_ = least_envelope();
    finalize();
  }

 protected:
  xreal eval(std::uint64_t n) const override {
    const xreal y = kappa_ * xreal(n - 1);
    return -log1p(y * y) / 2;
  }

 private:
  // n sigma(n) peaks at t* = 1 + kappa^{-2}; the least envelope constant
  // is attained at an integer neighbor of t* (or at 2 when t* < 2).
  Envelope least_envelope() const {
    const double kd = static_cast<double>(kappa_);
    const double tstar = 1.0 + 1.0 / (kd * kd);
    std::vector<std::uint64_t> cand{2};
    if (std::isfinite(tstar) && tstar > 2.0) {
      const double cap = 9.0e15;
      cand.push_back(static_cast<std::uint64_t>(std::min(std::floor(tstar), cap)));
      cand.push_back(static_cast<std::uint64_t>(std::min(std::ceil(tstar), cap)));
    }
    xreal best(0);
    for (std::uint64_t n : cand)
      best = std::max(best, exp(log(xreal(n)) + eval(n)));
    return Envelope{static_cast<double>(best), 1.0, true};
  }

  xreal kappa_;
};

class CubeH2Impl final : public SpectrumImpl {
 public:
  CubeH2Impl(double a, double b, std::size_t prefix_len)
      : scanner_(std::make_shared<H2Scanner>(a, b)) {
    scanner_->ensure(std::max<std::size_t>(prefix_len, 64));
    label_ = "cube-h2" + interval(a, b);
    tie_override_ = 1;
    envelope_ = make_envelope(b - a);
    finalize();
  }

 protected:
  xreal eval(std::uint64_t n) const override {
    const FrequencyRoot r = scanner_->root(static_cast<std::size_t>(n - 1));
    const xreal w2 = xreal(r.omega) * xreal(r.omega);
    return -log(1 + w2 + w2 * w2) / 2;
  }

 private:
  Envelope make_envelope(double length) {
    // The unit interval admits the proven linear envelope constant 0.607.
    if (length == 1.0) return Envelope{0.607, 1.0, true};
    // Otherwise fit a quadratic envelope from a sampled head plus the
    // limiting constant (length/pi)^2 of n^2 sigma(n), with margin.
    const std::size_t sample = 512;
    scanner_->ensure(sample);
    double c = length * length / (M_PI * M_PI);
    for (std::uint64_t n = 2; n <= sample; ++n) {
      const double val = static_cast<double>(exp(2 * log(xreal(n)) + eval(n)));
      c = std::max(c, val);
    }
    return Envelope{1.05 * c, 2.0, false};
  }

  std::shared_ptr<H2Scanner> scanner_;
};

class DyadicImpl final : public SpectrumImpl {
 public:
  DyadicImpl() {
    label_ = "dyadic";
    envelope_ = Envelope{2.0, 1.0, true};
    tie_override_ = 2;
    finalize();
  }

 protected:
  xreal eval(std::uint64_t n) const override {
    return -xreal(std::bit_width(n) - 1) * kLn2;
  }
};

class CustomImpl final : public SpectrumImpl {
 public:
  CustomImpl(std::vector<double> prefix, std::optional<TailRule> tail,
             bool finite_rank)
      : tail_(tail) {
    const std::size_t p = prefix.size();
    logs_.reserve(p);
    for (double v : prefix)
      logs_.push_back(v == 0.0 ? neg_inf() : log(xreal(v)));
    if (tail_) {
      log_tail_c_ = log(xreal(tail_->C));
      label_ = "custom(" + std::to_string(p) + "-term prefix, tail " +
               fmt(tail_->C) + " n^-" + fmt(tail_->s) + ")";
      double c = tail_->C;
      for (std::size_t n = 2; n <= p; ++n)
        c = std::max(c, prefix[n - 1] * std::pow(double(n), tail_->s));
      envelope_ = Envelope{c, tail_->s, true};
    } else if (finite_rank) {
      std::size_t r = p;
      while (r > 1 && prefix[r - 1] == 0.0) --r;
      rank_ = r;
      label_ = "custom(rank " + std::to_string(r) + ")";
      double c = 0;
      for (std::size_t n = 2; n <= r; ++n)
        c = std::max(c, prefix[n - 1] * double(n));
      envelope_ = Envelope{c, 1.0, true};
    } else {
      domain_limit_ = p;
      label_ = "custom(" + std::to_string(p) + "-term prefix)";
    }
    finalize();
  }

 protected:
  xreal eval(std::uint64_t n) const override {
    if (n <= logs_.size()) return logs_[n - 1];
    return log_tail_c_ - xreal(tail_->s) * log(xreal(n));
  }

 private:
  std::vector<xreal> logs_;
  std::optional<TailRule> tail_;
  xreal log_tail_c_;
};

}  // namespace detail

// --- factories ----------------------------------------------------------

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

UnivariateSpectrum wrap(std::shared_ptr<const detail::SpectrumImpl> impl) {
  return UnivariateSpectrum(std::move(impl));
}

}  // namespace

UnivariateSpectrum torus_spectrum(TorusNorm norm, double s, double gamma,
                                  double a, double b) {
  require(std::isfinite(s) && s > 0, "torus_spectrum: s must be positive");
  require(std::isfinite(gamma) && gamma > 0,
          "torus_spectrum: gamma must be positive");
  require(std::isfinite(a) && std::isfinite(b) && a < b,
          "torus_spectrum: interval must satisfy a < b");
  if (norm == TorusNorm::circ)
    require(s == std::floor(s) && s >= 1,
            "torus_spectrum: the circ norm needs integer s >= 1");
  return wrap(std::make_shared<detail::TorusImpl>(norm, s, gamma, a, b));
}

UnivariateSpectrum jacobi_spectrum(double alpha, double beta, double s) {
  require(std::isfinite(alpha) && alpha > -1,
          "jacobi_spectrum: alpha must exceed -1");
  require(std::isfinite(beta) && beta > -1,
          "jacobi_spectrum: beta must exceed -1");
  require(alpha + beta + 1 > 0,
          "jacobi_spectrum: alpha + beta + 1 must be positive");
  require(std::isfinite(s) && s > 0, "jacobi_spectrum: s must be positive");
  return wrap(std::make_shared<detail::JacobiImpl>(alpha, beta, s));
}

UnivariateSpectrum cube_h1_spectrum(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b,
          "cube_h1_spectrum: interval must satisfy a < b");
  return wrap(std::make_shared<detail::CubeH1Impl>(a, b));
}

UnivariateSpectrum cube_h2_spectrum(double a, double b,
                                    std::size_t prefix_len) {
  require(std::isfinite(a) && std::isfinite(b) && a < b,
          "cube_h2_spectrum: interval must satisfy a < b");
  return wrap(std::make_shared<detail::CubeH2Impl>(a, b, prefix_len));
}

std::vector<FrequencyRoot> find_h2_frequencies(double a, double b,
                                               std::size_t count) {
  require(std::isfinite(a) && std::isfinite(b) && a < b,
          "find_h2_frequencies: interval must satisfy a < b");
  detail::H2Scanner scanner(a, b);
  scanner.ensure(count);
  std::vector<FrequencyRoot> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(scanner.root(i));
  return out;
}

UnivariateSpectrum dyadic_spectrum() {
  return wrap(std::make_shared<detail::DyadicImpl>());
}

UnivariateSpectrum custom_spectrum(std::vector<double> prefix,
                                   std::optional<TailRule> tail,
                                   bool finite_rank) {
  require(!prefix.empty(), "custom_spectrum: prefix must be nonempty");
  for (double v : prefix)
    require(std::isfinite(v) && v >= 0,
            "custom_spectrum: prefix values must be finite and nonnegative");
  require(prefix.front() > 0, "custom_spectrum: sigma(1) must be positive");
  for (std::size_t i = 1; i < prefix.size(); ++i)
    require(prefix[i] <= prefix[i - 1],
            "custom_spectrum: prefix must be nonincreasing");
  require(!(tail && finite_rank),
          "custom_spectrum: a tail rule contradicts finite rank");
  if (prefix.back() == 0.0)
    require(finite_rank,
            "custom_spectrum: zero values require the finite_rank flag");
  if (tail) {
    require(std::isfinite(tail->C) && tail->C > 0,
            "custom_spectrum: tail constant must be positive");
    require(std::isfinite(tail->s) && tail->s > 0,
            "custom_spectrum: tail exponent must be positive");
    const double p = static_cast<double>(prefix.size());
    require(tail->C * std::pow(p + 1, -tail->s) <=
                prefix.back() * (1 + 1e-12),
            "custom_spectrum: tail exceeds the last prefix value");
  }
  if (!tail && !finite_rank)
    require(prefix.size() >= 2,
            "custom_spectrum: a bare prefix needs at least two values");
  return wrap(std::make_shared<detail::CustomImpl>(std::move(prefix), tail,
                                                   finite_rank));
}

// --- facade -------------------------------------------------------------

namespace {

const detail::SpectrumImpl& deref(
    const std::shared_ptr<const detail::SpectrumImpl>& p) {
  if (!p) throw std::logic_error("UnivariateSpectrum: empty handle");
  return *p;
}

}  // namespace

UnivariateSpectrum::UnivariateSpectrum(
    std::shared_ptr<const detail::SpectrumImpl> impl)
    : impl_(std::move(impl)) {}

xreal UnivariateSpectrum::log_value(std::uint64_t n) const {
  return deref(impl_).log_value(n);
}

double UnivariateSpectrum::value(std::uint64_t n) const {
  return static_cast<double>(exp(deref(impl_).log_value(n)));
}

xreal UnivariateSpectrum::log_sigma1() const {
  return deref(impl_).log_sigma1();
}

xreal UnivariateSpectrum::log_sigma2() const {
  return deref(impl_).log_sigma2();
}

std::optional<std::uint64_t> UnivariateSpectrum::tie_multiplicity() const {
  return deref(impl_).tie_multiplicity();
}

const std::optional<Envelope>& UnivariateSpectrum::envelope() const {
  return deref(impl_).envelope();
}

std::optional<std::uint64_t> UnivariateSpectrum::rank() const {
  return deref(impl_).rank();
}

const std::string& UnivariateSpectrum::label() const {
  return deref(impl_).label();
}

std::uint64_t UnivariateSpectrum::last_index_not_below(const xreal& t) const {
  return deref(impl_).last_index_not_below(t);
}

std::uint64_t UnivariateSpectrum::last_index_above(const xreal& t) const {
  return deref(impl_).last_index_above(t);
}

// --- descriptors --------------------------------------------------------

std::string FamilyDescriptor::name() const {
  switch (kind) {
    case FamilyKind::torus:
      return "torus-" + torus_norm_name(norm) + "(s=" + fmt(smoothness) +
             ", gamma=" + fmt(gamma) + ", " + interval(lo, hi) + ")";
    case FamilyKind::jacobi:
      return "jacobi(alpha=" + fmt(alpha) + ", beta=" + fmt(beta) +
             ", s=" + fmt(smoothness) + ")";
    case FamilyKind::cube_h1:
      return "cube-h1" + interval(lo, hi);
    case FamilyKind::cube_h2:
      return "cube-h2" + interval(lo, hi);
    case FamilyKind::dyadic:
      return "dyadic";
    case FamilyKind::custom:
      return "custom(" + std::to_string(prefix.size()) + "-term prefix)";
  }
  throw std::logic_error("FamilyDescriptor::name: unknown kind");
}

UnivariateSpectrum make_spectrum(const FamilyDescriptor& fam) {
  switch (fam.kind) {
    case FamilyKind::torus:
      return torus_spectrum(fam.norm, fam.smoothness, fam.gamma, fam.lo,
                            fam.hi);
    case FamilyKind::jacobi:
      return jacobi_spectrum(fam.alpha, fam.beta, fam.smoothness);
    case FamilyKind::cube_h1:
      return cube_h1_spectrum(fam.lo, fam.hi);
    case FamilyKind::cube_h2:
      return cube_h2_spectrum(fam.lo, fam.hi);
    case FamilyKind::dyadic:
      return dyadic_spectrum();
    case FamilyKind::custom:
      return custom_spectrum(fam.prefix, fam.tail, fam.finite_rank);
  }
  throw std::logic_error("make_spectrum: unknown family kind");
}

}  // namespace tensorpow
