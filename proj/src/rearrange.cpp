#include "tensorpow/rearrange.hpp"

/*
  Exact rearrangement queries.

  tau_topk generates values in nonincreasing order from a heap over a
  spanning tree of index multisets.  A multiset of non-one entries is kept
  as a nonincreasing vector (m_1 >= ... >= m_p >= 2); its children are
    (a) increment the last entry, legal when p == 1 or m_{p-1} > m_p,
    (b) append a 2, legal when p < d,
  which gives every multiset exactly one parent (un-append when m_p = 2,
  un-increment otherwise) and never increases the value.  A popped multiset
  stands for d!/((d-p)! prod_runs c!) tuples, emitted in bulk.  For a
  heterogeneous product the tree runs over full tuples: increment the last
  non-one coordinate, or turn any 1 after it into a 2; each node is one
  tuple.

  tau_at brackets log tau(n) by bisection on the certified predicate
  "#{tuples >= t} >= n", then snaps to the exact achievable value in the
  final window and re-certifies with a full count pair.  The initial lower
  bound is the value of a cheap witness family of n tuples (vary one
  coordinate, keep the rest at 1), or the smallest nonzero value when a
  finite rank cuts that family short.

  tau_brute is the independent oracle: it enumerates the whole box
  {1..B}^d with an odometer, keeps the top n values in a min-heap, recounts
  the tie class of the n-th value exactly, and certifies that no tuple
  outside the box can reach it: the best such value keeps d-1 coordinates
  at 1 and one at B+1.
*/

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>

namespace tensorpow {

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

// --- top-k, d-th power ---------------------------------------------------

struct PowerNode {
  xreal value;
  std::vector<std::uint64_t> m;  // nonincreasing, entries >= 2
  bool operator<(const PowerNode& o) const { return value < o.value; }
};

std::vector<xreal> topk_power(const UnivariateSpectrum& s, unsigned d,
                              std::size_t k) {
  const xreal v1 = s.log_sigma1();
  const auto value_of = [&](const std::vector<std::uint64_t>& m) {
    xreal sum(0);
    for (std::uint64_t e : m) sum += s.log_value(e);
    return sum + xreal(d - m.size()) * v1;
  };
  const BigCount dfact = big_factorial(d);
  const auto mult_of = [&](const std::vector<std::uint64_t>& m) {
    BigCount denom = big_factorial(d - m.size());
    std::size_t run = 1;
    for (std::size_t i = 1; i <= m.size(); ++i) {
      if (i < m.size() && m[i] == m[i - 1]) {
        ++run;
      } else {
        denom *= big_factorial(run);
        run = 1;
      }
    }
    return dfact / denom;
  };

  std::vector<xreal> out;
  out.reserve(k);
  std::priority_queue<PowerNode> heap;
  heap.push({xreal(d) * v1, {}});
  while (!heap.empty() && out.size() < k) {
    PowerNode node = heap.top();
    heap.pop();
    const BigCount mult = mult_of(node.m);
    const std::size_t room = k - out.size();
    const std::size_t copies =
        mult >= BigCount(room) ? room : static_cast<std::size_t>(mult);
    out.insert(out.end(), copies, node.value);

    const std::size_t p = node.m.size();
    if (p >= 1 && (p == 1 || node.m[p - 2] > node.m[p - 1])) {
      std::vector<std::uint64_t> child = node.m;
      ++child.back();
      heap.push({value_of(child), std::move(child)});
    }
    if (p < d) {
      std::vector<std::uint64_t> child = node.m;
      child.push_back(2);
      heap.push({value_of(child), std::move(child)});
    }
  }
  return out;
}

// --- top-k, heterogeneous product ----------------------------------------

struct TupleNode {
  xreal value;
  std::vector<std::uint64_t> n;
  bool operator<(const TupleNode& o) const { return value < o.value; }
};

std::vector<xreal> topk_product(const std::vector<UnivariateSpectrum>& sp,
                                std::size_t k) {
  const std::size_t d = sp.size();
  const auto value_of = [&](const std::vector<std::uint64_t>& n) {
    xreal sum(0);
    for (std::size_t j = 0; j < d; ++j) sum += sp[j].log_value(n[j]);
    return sum;
  };

  std::vector<xreal> out;
  out.reserve(k);
  std::priority_queue<TupleNode> heap;
  heap.push({value_of(std::vector<std::uint64_t>(d, 1)),
             std::vector<std::uint64_t>(d, 1)});
  while (!heap.empty() && out.size() < k) {
    TupleNode node = heap.top();
    heap.pop();
    out.push_back(node.value);

    std::size_t p = d;  // one past the last non-one coordinate
    while (p > 0 && node.n[p - 1] == 1) --p;
    if (p >= 1) {
      std::vector<std::uint64_t> child = node.n;
      ++child[p - 1];
      heap.push({value_of(child), std::move(child)});
    }
    for (std::size_t j = p; j < d; ++j) {
      std::vector<std::uint64_t> child = node.n;
      child[j] = 2;
      heap.push({value_of(child), std::move(child)});
    }
  }
  return out;
}

}  // namespace

std::vector<xreal> tau_topk(const std::vector<UnivariateSpectrum>& spectra,
                            std::size_t k, const TopkOptions& opts) {
  validate_spectra(spectra, "tau_topk");
  if (k > opts.budget)
    throw std::domain_error("tau_topk: k exceeds the budget of " +
                            std::to_string(opts.budget) + " values");
  if (k == 0) return {};
  if (all_same(spectra))
    return topk_power(spectra.front(),
                      static_cast<unsigned>(spectra.size()), k);
  return topk_product(spectra, k);
}

std::vector<xreal> tau_topk(const UnivariateSpectrum& s, unsigned d,
                            std::size_t k, const TopkOptions& opts) {
  return tau_topk(std::vector<UnivariateSpectrum>(d, s), k, opts);
}

// --- exact tau(n) by bisection --------------------------------------------

namespace {

// Log value of a family of >= n tuples, each at least this large: vary one
// sufficiently deep coordinate, keep the others at 1.
xreal witness_floor(const std::vector<UnivariateSpectrum>& sp,
                    std::uint64_t n) {
  const std::size_t d = sp.size();
  if (all_same(sp)) {
    const UnivariateSpectrum& s = sp.front();
    const std::uint64_t m = (n - 1 + d - 1) / d + 1;
    const auto rank = s.rank();
    if (!rank || m <= *rank)
      return xreal(d - 1) * s.log_sigma1() + s.log_value(m);
    return xreal(d) * s.log_value(*rank);  // smallest nonzero value
  }
  for (std::size_t j = 0; j < d; ++j) {
    const auto rank = sp[j].rank();
    if (!rank || n <= *rank) {
      xreal sum = sp[j].log_value(n);
      for (std::size_t i = 0; i < d; ++i)
        if (i != j) sum += sp[i].log_sigma1();
      return sum;
    }
  }
  xreal sum(0);
  for (const auto& s : sp) sum += s.log_value(*s.rank());
  return sum;
}

}  // namespace

TauQueryResult tau_at(const std::vector<UnivariateSpectrum>& spectra,
                      std::uint64_t n, const CountOptions& copts) {
  validate_spectra(spectra, "tau_at");
  if (n < 1) throw std::domain_error("tau_at: n must be >= 1");

  // Finite-rank products run out of nonzero values.
  {
    BigCount total = 1;
    bool bounded = true;
    for (const auto& s : spectra) {
      const auto rank = s.rank();
      if (!rank) {
        bounded = false;
        break;
      }
      total *= BigCount(*rank);
    }
    if (bounded && BigCount(n) > total)
      throw std::out_of_range(
          "tau_at: only " + to_string(total) +
          " tensor values are nonzero, tau(" + std::to_string(n) +
          ") is zero");
  }

  CountOptions exact_opts;
  exact_opts.ceiling = copts.ceiling;
  CountOptions probe_opts = exact_opts;
  probe_opts.at_least = BigCount(n);

  const auto count_reaches_n = [&](const xreal& t) {
    const auto q = CountQuery::product(spectra, t);
    return tensor_count_pair(q, probe_opts).ge >= BigCount(n);
  };

  xreal lo = witness_floor(spectra, n);
  xreal hi(1);
  for (const auto& s : spectra) hi += s.log_sigma1();
  if (!count_reaches_n(lo))
    throw std::logic_error("tau_at: witness floor failed its certificate");
  if (count_reaches_n(hi))
    throw std::logic_error("tau_at: upper bisection bound is not above tau(1)");

  const xreal scale =
      std::max(xreal(1), std::max(abs(lo), abs(hi)));
  const xreal width =
      std::max(xreal(1e-21), xreal(32) * xreal(tie_epsilon())) * scale;
  while (hi - lo > width) {
    const xreal mid = (lo + hi) / 2;
    (count_reaches_n(mid) ? lo : hi) = mid;
  }

  // Snap onto the achievable value and certify its tie class.
  const xreal margin = xreal(16) * xreal(tie_epsilon()) * scale;
  const auto candidates =
      achievable_values_in(spectra, lo - margin, hi + margin);
  for (const xreal& c : candidates) {
    const auto pair =
        tensor_count_pair(CountQuery::product(spectra, c), exact_opts);
    if (pair.ge >= BigCount(n)) {
      if (pair.gt >= BigCount(n))
        throw std::logic_error(
            "tau_at: snapped value does not certify, count_gt >= n");
      return {c, pair.ge, pair.gt};
    }
  }
  throw std::logic_error("tau_at: no achievable value in the snap window");
}

TauQueryResult tau_at(const UnivariateSpectrum& s, unsigned d, std::uint64_t n,
                      const CountOptions& copts) {
  return tau_at(std::vector<UnivariateSpectrum>(d, s), n, copts);
}

// --- brute-force oracle ----------------------------------------------------

TauQueryResult tau_brute(const std::vector<UnivariateSpectrum>& spectra,
                         std::uint64_t n, std::uint64_t box_limit) {
  validate_spectra(spectra, "tau_brute");
  const std::size_t d = spectra.size();
  if (box_limit < 1) throw std::domain_error("tau_brute: box_limit must be >= 1");
  if (n < 1) throw std::domain_error("tau_brute: n must be >= 1");
  if (n > 50'000'000)
    throw std::domain_error("tau_brute: n beyond the selection heap budget");
  const double cells = std::pow(static_cast<double>(box_limit),
                                static_cast<double>(d));
  if (cells > 2.5e8)
    throw std::domain_error(
        "tau_brute: box_limit^d exceeds the enumeration budget of 2.5e8");
  if (static_cast<double>(n) > cells)
    throw std::domain_error("tau_brute: n exceeds the box size");

  // Per-coordinate value tables keep the odometer free of cache locks.
  std::vector<std::vector<xreal>> val(d);
  for (std::size_t j = 0; j < d; ++j) {
    val[j].reserve(box_limit);
    for (std::uint64_t m = 1; m <= box_limit; ++m)
      val[j].push_back(spectra[j].log_value(m));
  }

  std::vector<std::uint64_t> idx(d, 1);
  std::vector<xreal> prefix(d);  // prefix[j] = sum of val up to coordinate j
  const auto refill = [&](std::size_t from) {
    for (std::size_t j = from; j < d; ++j)
      prefix[j] = (j == 0 ? xreal(0) : prefix[j - 1]) + val[j][idx[j] - 1];
  };
  refill(0);

  std::priority_queue<xreal, std::vector<xreal>, std::greater<xreal>> top;
  for (;;) {
    const xreal& value = prefix[d - 1];
    if (top.size() < n) {
      top.push(value);
    } else if (value > top.top()) {
      top.pop();
      top.push(value);
    }
    std::size_t j = d;
    while (j > 0 && ++idx[j - 1] > box_limit) idx[--j] = 1;
    if (j == 0) break;
    refill(j - 1);
  }
  const xreal tau = top.top();

  // Exact tie-class counts at the selected value, same walk again.
  const xreal tol = tie_slack(tau, tau);
  const xreal t_ge = tau - tol, t_gt = tau + tol;
  std::uint64_t count_ge = 0, count_gt = 0;
  std::fill(idx.begin(), idx.end(), 1);
  refill(0);
  for (;;) {
    const xreal& value = prefix[d - 1];
    if (value >= t_ge) {
      ++count_ge;
      if (value >= t_gt) ++count_gt;
    }
    std::size_t j = d;
    while (j > 0 && ++idx[j - 1] > box_limit) idx[--j] = 1;
    if (j == 0) break;
    refill(j - 1);
  }

  // No tuple outside the box may reach the tie class.
  xreal ones(0);
  for (const auto& s : spectra) ones += s.log_sigma1();
  xreal out_best = neg_inf();
  for (std::size_t j = 0; j < d; ++j) {
    const auto rank = spectra[j].rank();
    const xreal vj = (rank && box_limit + 1 > *rank)
                         ? neg_inf()
                         : spectra[j].log_value(box_limit + 1);
    out_best = std::max(out_best, ones - spectra[j].log_sigma1() + vj);
  }
  if (!(out_best < t_ge))
    throw std::domain_error(
        "tau_brute: box_limit too small, a tuple outside the box could "
        "reach the tie class of tau(n)");

  return {tau, BigCount(count_ge), BigCount(count_gt)};
}

TauQueryResult tau_brute(const UnivariateSpectrum& s, unsigned d,
                         std::uint64_t n, std::uint64_t box_limit) {
  return tau_brute(std::vector<UnivariateSpectrum>(d, s), n, box_limit);
}

}  // namespace tensorpow
