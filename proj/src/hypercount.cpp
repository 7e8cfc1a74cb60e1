#include "tensorpow/hypercount.hpp"

/*
  Exact lattice counting.

  A_N(r, l) obeys A_N(r, 1) = max(0, floor(r) - N + 1) and

    A_N(r, l) = sum_{k=N}^{floor(r / N^{l-1})} A_N(r / k, l - 1),

  and depends on r only through floor(r).  Working with R = floor(r), the
  summand is constant on runs where floor(R/k) is constant, so each level
  costs O(sqrt R) blocks; distinct arguments are memoized per call.

  Tensor product counts #{n : prod_j sigma_j(n_j) >= t} run over log
  values.  A query threshold t is widened to t_ge = t - tol and sharpened
  to t_gt = t + tol with tol = tie_epsilon() * max(1, |t|), so one pass
  yields the nonstrict count, the strict count, and hence exact tie-class
  sizes under the library's tie semantics.

  For a d-th power the walk enumerates multisets of non-one indices as
  nondecreasing prefixes m_1 <= ... <= m_p (all >= 2).  A prefix closed by
  one final entry m in [max(2, m_p), X] at log budget X is aggregated in
  bulk: a new final value contributes d!/((d-p-1)! * prod_runs c!) tuples
  and a final value extending the last run divides that weight by
  (c_last + 1).  Pruning uses sigma(m) <= sigma(1): a prefix extension m
  survives only while S + 2 v(m) + (d-p-2) v(1) clears the budget.

  Heterogeneous products walk coordinates in order with suffix sums of
  log sigma_j(1) as the optimistic completion, aggregating the last
  coordinate the same way.
*/

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace tensorpow {

namespace {

// min(b^e, cap)
std::uint64_t ipow_min(std::uint64_t b, unsigned e, std::uint64_t cap) {
  std::uint64_t r = 1;
  while (e--) {
    if (b != 0 && r > cap / b) return cap;
    r *= b;
    if (r >= cap) return cap;
  }
  return r;
}

}  // namespace

BigCount a_count(std::uint64_t N, double r, unsigned l) {
  if (N < 1) throw std::domain_error("a_count: N must be >= 1");
  if (l < 1) throw std::domain_error("a_count: l must be >= 1");
  if (!std::isfinite(r)) throw std::domain_error("a_count: r must be finite");
  if (r > 9.0e15)
    throw std::domain_error(
        "a_count: r is past the exactly representable integer range");
  if (r < 1) return BigCount(0);
  const std::uint64_t R0 = static_cast<std::uint64_t>(std::floor(r));

  std::map<std::pair<std::uint64_t, unsigned>, BigCount> memo;
  auto rec = [&](auto&& self, std::uint64_t R, unsigned lev) -> BigCount {
    if (ipow_min(N, lev, R + 1) > R) return BigCount(0);
    if (lev == 1) return BigCount(R - N + 1);
    const auto key = std::make_pair(R, lev);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    BigCount total = 0;
    const std::uint64_t kmax = R / ipow_min(N, lev - 1, R);
    for (std::uint64_t k = N; k <= kmax;) {
      const std::uint64_t q = R / k;
      const std::uint64_t k2 = std::min(kmax, R / q);
      total += self(self, q, lev - 1) * BigCount(k2 - k + 1);
      k = k2 + 1;
    }
    memo.emplace(key, total);
    return total;
  };
  return rec(rec, R0, l);
}

Sandwich a2_sandwich(double r, unsigned l) {
  if (l < 2) throw std::domain_error("a2_sandwich: l must be >= 2");
  if (!std::isfinite(r) || std::log(r) < l * std::log(4.0))
    throw std::domain_error("a2_sandwich: requires r >= 4^l");
  const double lr = std::log(r);
  const double upper = std::exp(lr + (l - 1) * std::log(lr) - std::lgamma(double(l)));
  // lower = r L^{l-2}/(l-2)! * (L/(l-1) - 1), L = log(r / 2^l) >= log(2^l) > 0
  const double L = lr - l * std::log(2.0);
  const double base =
      std::exp(lr + (l - 2) * std::log(L) - std::lgamma(double(l - 1)));
  const double factor = L / (l - 1) - 1.0;
  return {factor == 0.0 ? 0.0 : base * factor, upper};
}

Sandwich a2_coarse_bounds(double r, unsigned l, double delta) {
  if (l < 1) throw std::domain_error("a2_coarse_bounds: l must be >= 1");
  if (!(delta > 0) || !std::isfinite(delta))
    throw std::domain_error("a2_coarse_bounds: delta must be positive");
  if (!(r >= 0) || !std::isfinite(r))
    throw std::domain_error("a2_coarse_bounds: r must be finite and >= 0");
  Sandwich out;
  if (r > 0)
    out.upper =
        std::exp((1 + delta) * std::log(r) - (l - 1) * std::log(delta));
  out.lower =
      std::log2(std::max(r, 1.0)) >= l ? r / (3.0 * std::pow(2.0, l - 1)) : 0.0;
  return out;
}

BigCount dyadic_level_count(unsigned k, unsigned d) {
  if (d < 1) throw std::domain_error("dyadic_level_count: d must be >= 1");
  return big_pow(2, k) * big_binomial(std::uint64_t(k) + d - 1, d - 1);
}

BigCount dyadic_cumulative(std::int64_t k, unsigned d) {
  if (d < 1) throw std::domain_error("dyadic_cumulative: d must be >= 1");
  if (k < 0) return BigCount(0);
  if (k > 5'000'000)
    throw std::domain_error("dyadic_cumulative: k too large");
  BigCount total = 0;
  for (std::int64_t j = 0; j <= k; ++j)
    total += dyadic_level_count(static_cast<unsigned>(j), d);
  return total;
}

// --- tensor product counting ---------------------------------------------

CountQuery CountQuery::power(UnivariateSpectrum s, unsigned d, xreal log_t,
                             Cmp cmp) {
  if (d < 1) throw std::domain_error("CountQuery::power: d must be >= 1");
  CountQuery q;
  q.spectra.assign(d, std::move(s));
  q.log_threshold = log_t;
  q.cmp = cmp;
  return q;
}

CountQuery CountQuery::product(std::vector<UnivariateSpectrum> spectra,
                               xreal log_t, Cmp cmp) {
  CountQuery q;
  q.spectra = std::move(spectra);
  q.log_threshold = log_t;
  q.cmp = cmp;
  return q;
}

namespace {

void validate_spectra(const std::vector<UnivariateSpectrum>& spectra,
                      const char* who) {
  if (spectra.empty())
    throw std::domain_error(std::string(who) + ": no spectra given");
  for (const auto& s : spectra)
    if (!s.valid())
      throw std::domain_error(std::string(who) + ": invalid spectrum handle");
}

bool all_same(const std::vector<UnivariateSpectrum>& spectra) {
  for (const auto& s : spectra)
    if (s.identity() != spectra.front().identity()) return false;
  return true;
}

struct SymCounter {
  const UnivariateSpectrum& s;
  unsigned d;
  xreal t_ge, t_gt, v1;
  const CountOptions& opts;
  BigCount ge{0}, gt{0};
  bool stopped = false;
  std::vector<BigCount> K;  // K[p] = d! / (d-p-1)!

  SymCounter(const UnivariateSpectrum& s_, unsigned d_, const xreal& ge_,
             const xreal& gt_, const CountOptions& o)
      : s(s_), d(d_), t_ge(ge_), t_gt(gt_), v1(s_.log_sigma1()), opts(o) {
    K.resize(d);
    BigCount k = d;
    for (unsigned p = 0; p < d; ++p) {
      K[p] = k;
      k *= (d - p - 1);  // next: d * (d-1) * ... ; harmless 0 at the end
    }
  }

  void check() {
    if (ge > opts.ceiling)
      throw std::overflow_error(
          "tensor_count_pair: count exceeded the ceiling " +
          to_string(opts.ceiling));
    if (opts.at_least && ge >= *opts.at_least) stopped = true;
  }

  void run() {
    const xreal all_ones = xreal(d) * v1;
    if (all_ones >= t_ge) ge += 1;
    if (all_ones >= t_gt) gt += 1;
    check();
    if (!stopped) dfs(0, xreal(0), 0, 0, BigCount(1));
  }

  // p prefix entries (>= 2 each) summing to S; the last one is `last` with
  // a running tie count c_last; pfact = product of run factorials.
  void dfs(unsigned p, const xreal& S, std::uint64_t last,
           std::uint64_t c_last, const BigCount& pfact) {
    const std::uint64_t lb = std::max<std::uint64_t>(2, last);
    const xreal rest = xreal(d - p - 1) * v1;
    const std::uint64_t x_ge = s.last_index_not_below(t_ge - S - rest);
    if (x_ge < lb) return;
    const std::uint64_t x_gt = s.last_index_not_below(t_gt - S - rest);

    if (p == 0) {
      ge += BigCount(x_ge - 1) * K[0];
      if (x_gt >= 2) gt += BigCount(x_gt - 1) * K[0];
    } else {
      const BigCount w_new = K[p] / pfact;
      const BigCount w_tie = w_new / (c_last + 1);
      ge += w_tie;
      if (x_ge > last) ge += BigCount(x_ge - last) * w_new;
      if (x_gt >= last) {
        gt += w_tie;
        if (x_gt > last) gt += BigCount(x_gt - last) * w_new;
      }
    }
    check();
    if (stopped || p + 2 > d) return;

    const xreal rest2 = xreal(d - p - 2) * v1;
    const xreal need = (t_ge - S - rest2) / 2;
    const std::uint64_t x_rec = s.last_index_not_below(need);
    for (std::uint64_t m = lb; m <= x_rec && !stopped; ++m) {
      const bool tie = (m == last);
      dfs(p + 1, S + s.log_value(m), m, tie ? c_last + 1 : 1,
          tie ? pfact * BigCount(c_last + 1) : pfact);
    }
  }
};

struct HetCounter {
  const std::vector<UnivariateSpectrum>& sp;
  xreal t_ge, t_gt;
  const CountOptions& opts;
  std::vector<xreal> suffix;  // suffix[j] = sum_{i >= j} log sigma_i(1)
  BigCount ge{0}, gt{0};
  bool stopped = false;

  HetCounter(const std::vector<UnivariateSpectrum>& sp_, const xreal& ge_,
             const xreal& gt_, const CountOptions& o)
      : sp(sp_), t_ge(ge_), t_gt(gt_), opts(o) {
    suffix.assign(sp.size() + 1, xreal(0));
    for (std::size_t j = sp.size(); j-- > 0;)
      suffix[j] = suffix[j + 1] + sp[j].log_sigma1();
  }

  void check() {
    if (ge > opts.ceiling)
      throw std::overflow_error(
          "tensor_count_pair: count exceeded the ceiling " +
          to_string(opts.ceiling));
    if (opts.at_least && ge >= *opts.at_least) stopped = true;
  }

  void dfs(std::size_t j, const xreal& S) {
    if (j == sp.size() - 1) {
      ge += BigCount(sp[j].last_index_not_below(t_ge - S));
      gt += BigCount(sp[j].last_index_not_below(t_gt - S));
      check();
      return;
    }
    const std::uint64_t x = sp[j].last_index_not_below(t_ge - S - suffix[j + 1]);
    for (std::uint64_t m = 1; m <= x && !stopped; ++m)
      dfs(j + 1, S + sp[j].log_value(m));
  }
};

}  // namespace

CountPair tensor_count_pair(const CountQuery& q, const CountOptions& opts) {
  validate_spectra(q.spectra, "tensor_count_pair");
  const xreal t = q.log_threshold;
  if (!isfinite(t)) {
    if (t > 0) return {BigCount(0), BigCount(0), true};
    throw std::domain_error(
        "tensor_count_pair: threshold must be a finite log value");
  }
  const xreal tol = tie_slack(t, t);
  const xreal t_ge = t - tol, t_gt = t + tol;

  if (all_same(q.spectra)) {
    SymCounter c(q.spectra.front(), static_cast<unsigned>(q.spectra.size()),
                 t_ge, t_gt, opts);
    c.run();
    return {c.ge, c.gt, !c.stopped};
  }
  HetCounter c(q.spectra, t_ge, t_gt, opts);
  c.dfs(0, xreal(0));
  return {c.ge, c.gt, !c.stopped};
}

BigCount tensor_count(const CountQuery& q, const CountOptions& opts) {
  const CountPair pair = tensor_count_pair(q, opts);
  return q.cmp == Cmp::ge ? pair.ge : pair.gt;
}

std::vector<xreal> achievable_values_in(
    const std::vector<UnivariateSpectrum>& spectra, const xreal& lo,
    const xreal& hi) {
  validate_spectra(spectra, "achievable_values_in");
  if (!isfinite(lo) || !isfinite(hi) || !(lo < hi))
    throw std::domain_error(
        "achievable_values_in: window must be finite with lo < hi");
  constexpr std::size_t kCap = 4'000'000;
  std::vector<xreal> vals;
  const auto push = [&](const xreal& v) {
    if (v >= lo && v < hi) {
      if (vals.size() >= kCap)
        throw std::domain_error(
            "achievable_values_in: window selects too many values");
      vals.push_back(v);
    }
  };

  const unsigned d = static_cast<unsigned>(spectra.size());
  if (all_same(spectra)) {
    const UnivariateSpectrum& s = spectra.front();
    const xreal v1 = s.log_sigma1();
    // Nodes are multisets of non-one indices; a child never beats its
    // parent since sigma(m) <= sigma(1).
    auto dfs = [&](auto&& self, unsigned p, const xreal& S,
                   std::uint64_t last) -> void {
      push(S + xreal(d - p) * v1);
      if (p == d) return;
      const std::uint64_t lb = std::max<std::uint64_t>(2, last);
      const xreal rest = xreal(d - p - 1) * v1;
      const std::uint64_t x = s.last_index_not_below(lo - S - rest);
      for (std::uint64_t m = lb; m <= x; ++m)
        self(self, p + 1, S + s.log_value(m), m);
    };
    dfs(dfs, 0, xreal(0), 0);
  } else {
    std::vector<xreal> suffix(d + 1, xreal(0));
    for (std::size_t j = d; j-- > 0;)
      suffix[j] = suffix[j + 1] + spectra[j].log_sigma1();
    auto dfs = [&](auto&& self, std::size_t j, const xreal& S) -> void {
      if (j == d) {
        push(S);
        return;
      }
      const std::uint64_t x =
          spectra[j].last_index_not_below(lo - S - suffix[j + 1]);
      for (std::uint64_t m = 1; m <= x; ++m)
        self(self, j + 1, S + spectra[j].log_value(m));
    };
    dfs(dfs, 0, xreal(0));
  }

  std::sort(vals.begin(), vals.end(), std::greater<>());
  std::vector<xreal> out;
  for (const xreal& v : vals)
    if (out.empty() || out.back() - v > tie_slack(out.back(), v))
      out.push_back(v);
  return out;
}

}  // namespace tensorpow
