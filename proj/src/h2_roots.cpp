/*
  Frequencies of the fourth-order boundary eigenproblem on [a, b].

  With l = (b - a)/2 and what = sqrt(1 + omega^2), the frequencies are the
  nonnegative solutions of

    branch 1:  what^3 cosh(what l) sin(omega l) + omega^3 sinh(what l) cos(omega l) = 0
    branch 2:  what^3 sinh(what l) cos(omega l) - omega^3 cosh(what l) sin(omega l) = 0.

  Dividing by what^3 cosh(what l) normalizes both equations to order one:

    h1(omega) = sin(omega l) + (omega/what)^3 tanh(what l) cos(omega l)
    h2(omega) = tanh(what l) cos(omega l) - (omega/what)^3 sin(omega l).

  h1 vanishes at omega = 0.  Writing r = (omega/what)^3 tanh(what l), which
  grows from 0 to 1, the positive roots solve tan(omega l) = -r (branch 1)
  and tan(omega l) = 1/r (branch 2); both families are simple, one root per
  pi-period, with consecutive same-branch roots at least 3 pi / (4 l) apart.
  A scan grid of step min(pi/(4 l), 0.1) therefore never skips a sign
  change, and the two branches never vanish simultaneously.

  The reported residual is the defining equation scaled by cosh(what l),
  i.e. what^3 |h|.  Roots are polished in binary128 until that residual is
  below 1e-12; when rounding noise makes this impossible (far out in the
  sequence the sin argument itself eats the budget) the scanner fails
  loudly instead of returning an uncertified frequency.
*/

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectrum_impl.hpp"

namespace tensorpow::detail {

namespace {

double h_scan(int branch, double w, double l) {
  const double what = std::sqrt(1 + w * w);
  const double t = std::tanh(what * l);
  const double q = w / what;
  const double q3 = q * q * q;
  const double s = std::sin(w * l), c = std::cos(w * l);
  return branch == 1 ? s + q3 * t * c : t * c - q3 * s;
}

xreal h_exact(int branch, const xreal& w, const xreal& l) {
  const xreal what = sqrt(1 + w * w);
  const xreal t = tanh(what * l);
  const xreal q = w / what;
  const xreal q3 = q * q * q;
  const xreal s = sin(w * l), c = cos(w * l);
  return branch == 1 ? s + q3 * t * c : t * c - q3 * s;
}

}  // namespace

H2Scanner::H2Scanner(double a, double b) {
  half_length_ = (b - a) / 2.0;
  step_ = std::min(M_PI / (4 * half_length_), 0.1);
  roots_.push_back({0.0, 1, 0.0});
  grid_ = step_;
  prev_h1_ = h_scan(1, grid_, half_length_);
  prev_h2_ = h_scan(2, grid_, half_length_);
  if (!(prev_h1_ > 0) || !(prev_h2_ > 0))
    throw std::logic_error(
        "find_h2_frequencies: unexpected sign at the first grid point");
}

void H2Scanner::ensure(std::size_t count) const {
  std::unique_lock lock(mu_);
  while (roots_.size() < count) scan_cells_locked();
}

FrequencyRoot H2Scanner::root(std::size_t index) const {
  std::unique_lock lock(mu_);
  while (roots_.size() <= index) scan_cells_locked();
  return roots_[index];
}

void H2Scanner::scan_cells_locked() const {
  const double l = half_length_;
  const std::size_t before = roots_.size();

  const auto refine = [&](int branch, double lo, double hi) -> FrequencyRoot {
    const xreal L(l);
    xreal a(lo), b(hi);
    xreal fa = h_exact(branch, a, L), fb = h_exact(branch, b, L);
    // The double scan saw the sign state flip across this cell; when the
    // binary128 signs disagree with it (grid point rounding to an exact
    // zero), relocate the bracket on a fine sub-grid of the widened cell.
    if ((fa < 0) == (fb < 0)) {
      const int pieces = 64;
      const xreal left = a - xreal(step_) / 2;
      const xreal width = (b - a) + xreal(step_);
      bool bracketed = false;
      xreal pa = left, fpa = h_exact(branch, pa, L);
      for (int i = 1; i <= pieces && !bracketed; ++i) {
        const xreal pb = left + width * i / pieces;
        const xreal fpb = h_exact(branch, pb, L);
        if ((fpa < 0) != (fpb < 0)) {
          a = pa, b = pb, fa = fpa, fb = fpb;
          bracketed = true;
        }
        pa = pb, fpa = fpb;
      }
      if (!bracketed)
        throw std::runtime_error(
            "find_h2_frequencies: lost a sign change while polishing near "
            "omega = " + std::to_string(lo));
    }
    // Illinois variant of false position.
    int side = 0;
    for (int it = 0; it < 200; ++it) {
      xreal m = b - fb * (b - a) / (fb - fa);
      if (!(m > a && m < b)) m = (a + b) / 2;
      const xreal fm = h_exact(branch, m, L);
      if (fm == 0) {
        a = b = m;
        break;
      }
      if ((fm < 0) == (fb < 0)) {
        b = m;
        fb = fm;
        if (side == -1) fa /= 2;
        side = -1;
      } else {
        a = m;
        fa = fm;
        if (side == +1) fb /= 2;
        side = +1;
      }
      if (b - a <= xreal(1e-33) * b) break;
    }
    const xreal m = (a + b) / 2;
    const xreal what = sqrt(1 + m * m);
    const xreal resid = abs(h_exact(branch, m, L)) * what * what * what;
    if (!(resid <= 1e-12))
      throw std::runtime_error(
          "find_h2_frequencies: residual " +
          std::to_string(static_cast<double>(resid)) +
          " exceeds 1e-12 near omega = " +
          std::to_string(static_cast<double>(m)) +
          "; frequencies this far out are not certifiable");
    return {static_cast<double>(m), branch, static_cast<double>(resid)};
  };

  while (roots_.size() == before) {
    const double next = grid_ + step_;
    const double h1 = h_scan(1, next, l);
    const double h2 = h_scan(2, next, l);
    FrequencyRoot found[2];
    int nfound = 0;
    if ((prev_h1_ < 0) != (h1 < 0)) found[nfound++] = refine(1, grid_, next);
    if ((prev_h2_ < 0) != (h2 < 0)) found[nfound++] = refine(2, grid_, next);
    if (nfound == 2 && found[1].omega < found[0].omega)
      std::swap(found[0], found[1]);
    for (int i = 0; i < nfound; ++i) {
      const double prev = roots_.back().omega;
      if (!(found[i].omega > prev))
        throw std::logic_error(
            "find_h2_frequencies: frequencies not strictly increasing near "
            "omega = " + std::to_string(found[i].omega));
      if (found[i].omega - prev > 1.1 * M_PI / l)
        throw std::logic_error(
            "find_h2_frequencies: gap before omega = " +
            std::to_string(found[i].omega) +
            " is too wide, a root bracket was missed");
      roots_.push_back(found[i]);
    }
    grid_ = next;
    prev_h1_ = h1;
    prev_h2_ = h2;
  }
}

}  // namespace tensorpow::detail
