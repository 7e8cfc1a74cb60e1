#include "tensorpow/verification.hpp"

/*
  Self-contained cross-checks of the fast paths against slow independent
  oracles.  Counting is checked against full box enumeration, top-k against
  tau_brute, tau_at against top-k plus its own counting certificate, the
  closed-form spectra against their formulas re-evaluated inline, and the
  frequency scanner against frozen high-precision roots.  Random inputs are
  drawn from a seeded generator so failures reproduce.
*/

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "tensorpow/bounds.hpp"
#include "tensorpow/hypercount.hpp"
#include "tensorpow/numeric.hpp"
#include "tensorpow/rearrange.hpp"
#include "tensorpow/spectrum.hpp"

namespace tensorpow {

namespace {

struct Checker {
  bool pass = true;
  int noted = 0;
  std::ostringstream detail;

  void expect(bool ok, const std::string& msg) {
    if (ok) return;
    pass = false;
    if (noted < 4) {
      if (noted) detail << "; ";
      detail << msg;
    }
    ++noted;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Nonincreasing random prefix, occasionally with exact ties; either a
// polynomial tail hangs off the end or the spectrum is finite-rank.
UnivariateSpectrum random_custom(std::mt19937_64& rng, bool finite_rank) {
  std::uniform_real_distribution<double> level(-0.3, 0.5);
  std::uniform_real_distribution<double> drop(0.35, 0.85);
  std::bernoulli_distribution tie(0.25);

  std::vector<double> prefix;
  double v = std::exp(level(rng));
  const std::size_t len = 5 + rng() % 6;
  for (std::size_t i = 0; i < len; ++i) {
    prefix.push_back(v);
    if (!(i + 1 < len && tie(rng))) v *= drop(rng);
  }
  if (finite_rank) return custom_spectrum(prefix, std::nullopt, true);

  std::uniform_real_distribution<double> decay(0.8, 2.2);
  const double s = decay(rng);
  const double C =
      prefix.back() * std::pow(static_cast<double>(len + 1), s) * 0.995;
  return custom_spectrum(prefix, TailRule{C, s});
}

// Full box enumeration mirroring the tie-shifted counting semantics.
CountPair brute_pair(const std::vector<UnivariateSpectrum>& sp,
                     const xreal& t) {
  const xreal tol = tie_slack(t, t);
  const xreal t_ge = t - tol, t_gt = t + tol;
  const std::size_t d = sp.size();

  xreal ones(0);
  for (const auto& s : sp) ones += s.log_sigma1();
  std::vector<std::uint64_t> box(d);
  for (std::size_t j = 0; j < d; ++j) {
    box[j] = sp[j].last_index_not_below(t_ge - (ones - sp[j].log_sigma1()));
    if (box[j] == 0) return {0, 0, true};
  }

  CountPair out;
  std::vector<std::uint64_t> idx(d, 1);
  for (;;) {
    xreal value(0);
    for (std::size_t j = 0; j < d; ++j) value += sp[j].log_value(idx[j]);
    if (value >= t_ge) {
      ++out.ge;
      if (value >= t_gt) ++out.gt;
    }
    std::size_t j = d;
    while (j > 0 && ++idx[j - 1] > box[j - 1]) idx[--j] = 1;
    if (j == 0) break;
  }
  return out;
}

double brute_box_cells(const std::vector<UnivariateSpectrum>& sp,
                       const xreal& t) {
  const xreal tol = tie_slack(t, t);
  xreal ones(0);
  for (const auto& s : sp) ones += s.log_sigma1();
  double cells = 1;
  for (const auto& s : sp)
    cells *= static_cast<double>(
        s.last_index_not_below(t - tol - (ones - s.log_sigma1())));
  return cells;
}

// --- individual checks ---------------------------------------------------

CheckResult check_a_count(std::mt19937_64& rng, bool quick) {
  Checker c;
  c.expect(a_count(1, 0.999, 3) == 0, "A_1(0.999,3) != 0");
  c.expect(a_count(1, 1.0, 1) == 1, "A_1(1,1) != 1");
  c.expect(a_count(2, 16, 2) == 19, "A_2(16,2) != 19");

  std::uniform_real_distribution<double> rdist(0.0, 200.0);
  const int trials = quick ? 4 : 10;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t N = 1 + rng() % 3;
    const unsigned l = 1 + rng() % 3;
    double r = rdist(rng);
    if (l == 3) r = std::min(r, 120.0);

    const auto R = static_cast<std::uint64_t>(std::floor(r));
    BigCount brute = 0;
    std::vector<std::uint64_t> idx(l, N);
    if (N <= R) {
      for (;;) {
        std::uint64_t prod = 1;
        bool ok = true;
        for (std::uint64_t x : idx) {
          prod *= x;
          if (prod > R) {
            ok = false;
            break;
          }
        }
        if (ok) ++brute;
        std::size_t j = l;
        while (j > 0 && ++idx[j - 1] > R) idx[--j] = N;
        if (j == 0) break;
      }
    }
    const BigCount fast = a_count(N, r, l);
    c.expect(fast == brute, "A_" + std::to_string(N) + "(" + num(r) + "," +
                                std::to_string(l) + ") = " + to_string(fast) +
                                ", brute " + to_string(brute));
  }
  return {"a_count vs box enumeration", c.pass, c.detail.str()};
}

CheckResult check_a1_identity(std::mt19937_64& rng, bool quick) {
  Checker c;
  std::uniform_real_distribution<double> rdist(0.0, 5000.0);
  const int trials = quick ? 3 : 6;
  for (int trial = 0; trial < trials; ++trial) {
    const unsigned l = 1 + rng() % 4;
    const double r = rdist(rng);
    BigCount rhs = r >= 1.0 ? 1 : 0;
    for (unsigned m = 1; m <= l; ++m)
      rhs += big_binomial(l, m) * a_count(2, r, m);
    const BigCount lhs = a_count(1, r, l);
    c.expect(lhs == rhs, "r=" + num(r) + " l=" + std::to_string(l) + ": " +
                             to_string(lhs) + " != " + to_string(rhs));
  }
  return {"A_1 binomial expansion over A_2", c.pass, c.detail.str()};
}

CheckResult check_dyadic_counts(std::mt19937_64&, bool) {
  Checker c;
  for (unsigned d = 1; d <= 5; ++d) {
    BigCount acc = 0;
    for (unsigned k = 0; k <= 12; ++k) {
      const BigCount level = dyadic_level_count(k, d);
      c.expect(level == big_pow(2, k) * big_binomial(k + d - 1, d - 1),
               "level count k=" + std::to_string(k) +
                   " d=" + std::to_string(d));
      acc += level;
      c.expect(dyadic_cumulative(k, d) == acc,
               "cumulative k=" + std::to_string(k) + " d=" + std::to_string(d));
    }
  }
  for (unsigned k = 0; k <= 12; ++k) {
    const BigCount closed = BigCount(k) * big_pow(2, k + 1) + 1;
    c.expect(dyadic_cumulative(k, 2) == closed,
             "N(k,2) closed form k=" + std::to_string(k));
  }
  // The generic counting engine must reproduce the staircase cumulative.
  const auto dy = dyadic_spectrum();
  const BigCount via_engine = tensor_count(
      CountQuery::power(dy, 3, xreal(-8) * log(xreal(2)), Cmp::ge));
  c.expect(via_engine == dyadic_cumulative(8, 3),
           "engine count " + to_string(via_engine) + " != N(8,3) " +
               to_string(dyadic_cumulative(8, 3)));
  return {"dyadic level counts and cumulative", c.pass, c.detail.str()};
}

CheckResult check_sandwich(std::mt19937_64&, bool) {
  Checker c;
  for (unsigned l = 2; l <= 4; ++l) {
    const double base = std::pow(4.0, l);
    for (double factor : {1.0, 3.7, 20.0}) {
      const double r = base * factor;
      if (r > 2e5) continue;
      const Sandwich s = a2_sandwich(r, l);
      const double exact = static_cast<double>(a_count(2, r, l));
      c.expect(s.lower <= exact * (1 + 1e-12) + 1e-9,
               "sharp lower fails at r=" + num(r) + " l=" + std::to_string(l));
      c.expect(exact <= s.upper * (1 + 1e-12) + 1e-9,
               "sharp upper fails at r=" + num(r) + " l=" + std::to_string(l));
    }
  }
  for (unsigned l = 1; l <= 4; ++l) {
    for (double r : {0.0, 0.5, 3.0, 17.2, 4096.0}) {
      for (double delta : {0.5, 1.0}) {
        const Sandwich s = a2_coarse_bounds(r, l, delta);
        const double exact = static_cast<double>(a_count(2, r, l));
        c.expect(s.lower <= exact * (1 + 1e-12) + 1e-9,
                 "coarse lower fails at r=" + num(r) + " l=" + std::to_string(l));
        c.expect(exact <= s.upper * (1 + 1e-12) + 1e-9,
                 "coarse upper fails at r=" + num(r) + " l=" + std::to_string(l));
      }
    }
  }
  return {"A_2 sandwich and coarse bounds contain the exact count", c.pass,
          c.detail.str()};
}

CheckResult check_tensor_count(std::mt19937_64& rng, bool quick) {
  Checker c;
  std::uniform_real_distribution<double> jitter(-0.2, 0.6);
  const int trials = quick ? 3 : 8;
  for (int trial = 0; trial < trials; ++trial) {
    const unsigned d = 2 + rng() % 2;
    std::vector<UnivariateSpectrum> sp;
    if (trial % 2 == 0) {
      sp.assign(d, random_custom(rng, trial % 4 == 2));
    } else {
      for (unsigned j = 0; j < d; ++j)
        sp.push_back(random_custom(rng, false));
    }

    xreal t(0);
    for (unsigned j = 0; j < d; ++j)
      t += sp[j].log_value(1 + rng() % 5);
    if (trial % 2 == 1) t += xreal(jitter(rng));
    for (int lift = 0; lift < 60 && brute_box_cells(sp, t) > 2e6; ++lift)
      t += xreal(0.7);

    const auto q = CountQuery::product(sp, t);
    const CountPair fast = tensor_count_pair(q);
    const CountPair slow = brute_pair(sp, t);
    c.expect(fast.complete, "count flagged incomplete without a target");
    c.expect(fast.ge == slow.ge, "ge " + to_string(fast.ge) + " != brute " +
                                     to_string(slow.ge));
    c.expect(fast.gt == slow.gt, "gt " + to_string(fast.gt) + " != brute " +
                                     to_string(slow.gt));

    if (fast.ge >= 2) {
      CountOptions early;
      early.at_least = fast.ge / 2;
      const CountPair partial = tensor_count_pair(q, early);
      c.expect(partial.ge >= *early.at_least,
               "early exit below its target");
      c.expect(partial.ge <= fast.ge, "early exit above the exact count");

      CountOptions tight;
      tight.ceiling = fast.ge - 1;
      bool threw = false;
      try {
        tensor_count_pair(q, tight);
      } catch (const std::overflow_error&) {
        threw = true;
      }
      c.expect(threw, "ceiling breach did not throw");
    }
  }
  return {"tensor counts vs box enumeration", c.pass, c.detail.str()};
}

CheckResult check_topk_vs_brute(std::mt19937_64& rng, bool quick) {
  Checker c;
  struct Case {
    std::vector<UnivariateSpectrum> sp;
    std::uint64_t box;
    std::size_t k;
  };
  std::vector<Case> cases;
  const auto dy = dyadic_spectrum();
  cases.push_back({std::vector<UnivariateSpectrum>(2, dy), 64, 30});
  if (!quick) {
    cases.push_back({std::vector<UnivariateSpectrum>(3, dy), 32, 25});
    cases.push_back(
        {std::vector<UnivariateSpectrum>(2, random_custom(rng, false)), 64,
         25});
    cases.push_back({{random_custom(rng, false), random_custom(rng, false)},
                     64,
                     20});
  } else {
    cases.push_back({{random_custom(rng, false), random_custom(rng, false)},
                     48,
                     12});
  }

  for (const auto& cs : cases) {
    const auto top = tau_topk(cs.sp, cs.k);
    c.expect(top.size() == cs.k, "top-k size mismatch");
    for (std::size_t i = 1; i < top.size(); ++i)
      c.expect(top[i] <= top[i - 1], "top-k not nonincreasing at " +
                                         std::to_string(i));
    for (std::size_t n = 1; n <= cs.k; n += 1 + cs.k / 6) {
      const auto br = tau_brute(cs.sp, n, cs.box);
      c.expect(abs(top[n - 1] - br.log_tau) <=
                   tie_slack(top[n - 1], br.log_tau),
               "tau(" + std::to_string(n) + ") mismatch: topk " +
                   num(to_double(top[n - 1])) + " brute " +
                   num(to_double(br.log_tau)));
    }
  }
  return {"tau_topk vs tau_brute", c.pass, c.detail.str()};
}

CheckResult check_tau_at(std::mt19937_64& rng, bool quick) {
  Checker c;
  struct Case {
    std::vector<UnivariateSpectrum> sp;
    std::size_t k;
  };
  std::vector<Case> cases;
  cases.push_back({std::vector<UnivariateSpectrum>(2, dyadic_spectrum()), 40});
  cases.push_back(
      {std::vector<UnivariateSpectrum>(3, random_custom(rng, false)), 24});
  if (!quick)
    cases.push_back({{random_custom(rng, false), random_custom(rng, false),
                      random_custom(rng, true)},
                     24});

  for (const auto& cs : cases) {
    const auto top = tau_topk(cs.sp, cs.k);
    for (std::uint64_t n : {std::uint64_t(1), std::uint64_t(2),
                            std::uint64_t(5), std::uint64_t(17)}) {
      if (n > cs.k) continue;
      const auto res = tau_at(cs.sp, n);
      c.expect(abs(res.log_tau - top[n - 1]) <=
                   tie_slack(res.log_tau, top[n - 1]),
               "tau(" + std::to_string(n) + ") mismatch vs topk");
      c.expect(res.count_gt < BigCount(n) && BigCount(n) <= res.count_ge,
               "certificate violated at n=" + std::to_string(n));
    }
  }

  // Structural check on the staircase: tau(n) = 2^{-k} with the cumulative
  // counts as the certificate.
  {
    const std::uint64_t n = 100'000;
    const auto res = tau_at(dyadic_spectrum(), 5, n);
    std::int64_t k = 0;
    while (dyadic_cumulative(k, 5) < BigCount(n)) ++k;
    c.expect(abs(res.log_tau + xreal(k) * log(xreal(2))) <= xreal(1e-20),
             "staircase tau(1e5) is not 2^-" + std::to_string(k));
    c.expect(res.count_ge == dyadic_cumulative(k, 5), "staircase count_ge");
    c.expect(res.count_gt == dyadic_cumulative(k - 1, 5), "staircase count_gt");
  }

  // Finite-rank products run out of values.
  {
    const auto fin = custom_spectrum({1.0, 0.5, 0.25, 0.125}, std::nullopt, true);
    bool threw = false;
    try {
      tau_at(fin, 2, 17);
    } catch (const std::out_of_range&) {
      threw = true;
    }
    c.expect(threw, "tau_at beyond the finite rank did not throw");
  }
  return {"tau_at vs tau_topk with certificates", c.pass, c.detail.str()};
}

CheckResult check_torus_formulas(std::mt19937_64&, bool) {
  Checker c;
  const xreal pi = acos(xreal(-1));
  struct Case {
    TorusNorm norm;
    double s, gamma, a, b;
  };
  const std::vector<Case> cases{{TorusNorm::circ, 1, 1, 0, 2 * 3.141592653589793},
                                {TorusNorm::circ, 3, 1, 0, 1},
                                {TorusNorm::star, 1.5, 2, 0, 1},
                                {TorusNorm::plus, 2.5, 0.8, -1, 1},
                                {TorusNorm::hash, 1.7, 1, 0, 1}};
  for (const auto& cs : cases) {
    const auto sp = torus_spectrum(cs.norm, cs.s, cs.gamma, cs.a, cs.b);
    const xreal eta =
        2 * pi / (xreal(cs.gamma) * (xreal(cs.b) - xreal(cs.a)));
    c.expect(sp.log_value(1) == xreal(0), "sigma(1) != 1");
    c.expect(sp.tie_multiplicity() && *sp.tie_multiplicity() == 2,
             "torus tie class is not 2");
    for (std::uint64_t n : {std::uint64_t(2), std::uint64_t(7)}) {
      const xreal x = eta * xreal(n / 2);
      xreal expected;
      switch (cs.norm) {
        case TorusNorm::circ: {
          xreal sum(0), p(1);
          for (int l = 0; l <= static_cast<int>(cs.s); ++l) {
            sum += p;
            p *= x * x;
          }
          expected = -log(sum) / 2;
          break;
        }
        case TorusNorm::star:
          expected = -log1p(pow(x, xreal(2 * cs.s))) / 2;
          break;
        case TorusNorm::plus:
          expected = -xreal(cs.s) / 2 * log1p(x * x);
          break;
        case TorusNorm::hash:
          expected = -xreal(cs.s) * log1p(x);
          break;
      }
      c.expect(abs(sp.log_value(n) - expected) <= xreal(1e-28),
               torus_norm_name(cs.norm) + " log sigma(" + std::to_string(n) +
                   ") off by more than 1e-28");
      if (n % 2 == 0)
        c.expect(sp.log_value(n) == sp.log_value(n + 1),
                 "sigma(2k) != sigma(2k+1)");
    }
  }

  const auto jac = jacobi_spectrum(0.5, -0.3, 1.2);
  const xreal a = (xreal(0.5) + xreal(-0.3) + 1) / 2;
  for (std::uint64_t n : {std::uint64_t(2), std::uint64_t(11)}) {
    const xreal expected = -xreal(1.2) * log1p(xreal(n - 1) / a);
    c.expect(abs(jac.log_value(n) - expected) <= xreal(1e-28),
             "jacobi log sigma(" + std::to_string(n) + ") off");
  }
  c.expect(jac.tie_multiplicity() && *jac.tie_multiplicity() == 1,
           "jacobi tie class is not 1");
  return {"closed-form spectra match their formulas", c.pass, c.detail.str()};
}

CheckResult check_h2_roots(std::mt19937_64&, bool) {
  Checker c;
  const auto roots = find_h2_frequencies(0, 1, 40);
  c.expect(roots.size() == 40, "requested 40 roots");
  c.expect(roots[0].omega == 0.0, "omega_0 != 0");
  for (std::size_t i = 1; i < roots.size(); ++i) {
    c.expect(roots[i].omega > roots[i - 1].omega,
             "roots not strictly increasing at " + std::to_string(i));
    c.expect(roots[i].residual <= 1e-12,
             "residual above 1e-12 at " + std::to_string(i));
  }
  c.expect(std::abs(roots[1].omega - 1.729751999814863381546904333692) <= 1e-12,
           "first nonzero root " + num(roots[1].omega));
  c.expect(roots[1].branch == 2, "first nonzero root branch");
  c.expect(std::abs(roots[2].omega - 4.791242127199603485244178) <= 1e-12,
           "second nonzero root " + num(roots[2].omega));
  c.expect(roots[2].branch == 1, "second nonzero root branch");

  // A longer interval lowers every frequency, and the merged sequence
  // approaches spacing pi / half-length.
  const auto wide = find_h2_frequencies(0, 2, 8);
  for (std::size_t i = 1; i < wide.size(); ++i) {
    c.expect(wide[i].omega > wide[i - 1].omega,
             "wide roots not strictly increasing at " + std::to_string(i));
    c.expect(wide[i].residual <= 1e-12,
             "wide residual above 1e-12 at " + std::to_string(i));
    c.expect(wide[i].omega < roots[i].omega,
             "longer interval did not lower root " + std::to_string(i));
  }
  // Two merged steps cross one pi-period of each branch: spacing pi / l.
  c.expect(std::abs(wide[7].omega - wide[5].omega - 3.141592653589793) <= 0.2,
           "wide root spacing is far from pi");

  const auto sp = cube_h2_spectrum(0, 1);
  c.expect(std::abs(sp.value(2) - 0.2779455694751951621232345768) <= 1e-13,
           "sigma_2 " + num(sp.value(2)));

  // The unit-interval H^1 spectrum interlaces the periodic one.
  const auto cube = cube_h1_spectrum(0, 1);
  const auto tor = torus_spectrum(TorusNorm::circ, 1, 1, 0, 1);
  for (std::uint64_t n = 1; n <= 300; ++n) {
    c.expect(cube.log_value(n + 1) <= tor.log_value(n) + xreal(1e-25),
             "interlacing lower fails at n=" + std::to_string(n));
    c.expect(tor.log_value(n) <= cube.log_value(n) + xreal(1e-25),
             "interlacing upper fails at n=" + std::to_string(n));
  }
  return {"frequency scanner against frozen roots", c.pass, c.detail.str()};
}

CheckResult check_envelopes(std::mt19937_64&, bool quick) {
  Checker c;
  struct Case {
    UnivariateSpectrum sp;
    std::uint64_t limit;
  };
  const std::uint64_t big = quick ? 2000 : 100'000;
  std::vector<Case> cases;
  cases.push_back({torus_spectrum(TorusNorm::circ, 2, 1, 0, 6.283185307179586), big});
  cases.push_back({torus_spectrum(TorusNorm::star, 1.5, 2, 0, 1), big});
  cases.push_back({torus_spectrum(TorusNorm::plus, 2.5, 0.8, -1, 1), big});
  cases.push_back({torus_spectrum(TorusNorm::hash, 1.7, 1, 0, 1), big});
  cases.push_back({jacobi_spectrum(0.5, -0.3, 1.2), big});
  cases.push_back({jacobi_spectrum(0, 0, 1), big});
  cases.push_back({cube_h1_spectrum(0, 1), big});
  cases.push_back({cube_h1_spectrum(-1, 3), big});
  cases.push_back({cube_h2_spectrum(0, 1), quick ? 500u : 3000u});
  cases.push_back({cube_h2_spectrum(0, 2), quick ? 500u : 3000u});
  cases.push_back({dyadic_spectrum(), big});

  for (const auto& cs : cases) {
    const auto& env = cs.sp.envelope();
    c.expect(env.has_value(), cs.sp.label() + " has no envelope");
    if (!env) continue;
    const xreal log_C = log(xreal(env->C));
    bool ok = true;
    std::uint64_t bad = 0;
    for (std::uint64_t n = 2; n <= cs.limit; n += (n < 3000 ? 1 : 7)) {
      if (!(cs.sp.log_value(n) <=
            log_C - xreal(env->s) * log(xreal(n)) + xreal(1e-12))) {
        ok = false;
        bad = n;
        break;
      }
    }
    c.expect(ok, cs.sp.label() + " envelope fails at n=" + std::to_string(bad));
  }

  c.expect(cube_h1_spectrum(0, 1).envelope()->certified,
           "unit H^1 envelope not certified");
  c.expect(cube_h2_spectrum(0, 1).envelope()->certified,
           "unit H^2 envelope not certified");
  c.expect(!cube_h2_spectrum(0, 2).envelope()->certified,
           "scaled H^2 envelope wrongly certified");
  return {"envelopes dominate their spectra", c.pass, c.detail.str()};
}

CheckResult check_preasymptotic(std::mt19937_64& rng, bool quick) {
  Checker c;
  struct Case {
    UnivariateSpectrum sp;
    std::optional<FamilyDescriptor> fam;
    unsigned d;
    std::uint64_t n_hi;
  };
  std::vector<Case> cases;
  {
    FamilyDescriptor fam;
    fam.kind = FamilyKind::torus;
    fam.norm = TorusNorm::circ;
    fam.smoothness = 1;
    fam.gamma = 1;
    fam.lo = 0;
    fam.hi = 6.283185307179586;
    cases.push_back({make_spectrum(fam), fam, 2, quick ? 48u : 256u});
  }
  {
    FamilyDescriptor fam;
    fam.kind = FamilyKind::dyadic;
    cases.push_back({make_spectrum(fam), fam, 4, quick ? 48u : 256u});
  }
  {
    FamilyDescriptor fam;
    fam.kind = FamilyKind::cube_h1;
    fam.lo = 0;
    fam.hi = 1;
    cases.push_back({make_spectrum(fam), fam, 3, quick ? 48u : 128u});
  }
  if (!quick) {
    cases.push_back(
        {torus_spectrum(TorusNorm::hash, 2.5, 0.8, 0, 1), std::nullopt, 3, 128});
    cases.push_back({jacobi_spectrum(0.5, -0.3, 1.2), std::nullopt, 3, 128});
    cases.push_back({cube_h2_spectrum(0, 1), std::nullopt, 2, 64});
    UnivariateSpectrum cu = random_custom(rng, false);
    while (log_compare(cu.log_sigma2(), cu.log_sigma1()) != LogCmp::below)
      cu = random_custom(rng, false);
    cases.push_back({cu, std::nullopt, 3, 96});
  }

  for (const auto& cs : cases) {
    const auto report =
        verify_bounds(cs.sp, cs.d, 1, cs.n_hi, default_delta_grid(), cs.fam);
    std::uint64_t bad = 0;
    for (const auto& row : report.rows)
      if (!row.pass && bad == 0) bad = row.n;
    c.expect(report.all_pass, cs.sp.label() + " d=" + std::to_string(cs.d) +
                                  " bound fails at n=" + std::to_string(bad));
  }
  return {"preasymptotic bounds contain the exact tau", c.pass,
          c.detail.str()};
}

CheckResult check_last_index(std::mt19937_64& rng, bool) {
  Checker c;
  const std::vector<UnivariateSpectrum> sps{jacobi_spectrum(0, 0, 1),
                                            random_custom(rng, false),
                                            dyadic_spectrum()};
  for (const auto& sp : sps) {
    for (double td : {-0.02, -0.9, -2.3, -7.7}) {
      const xreal t(td);
      const std::uint64_t a = sp.last_index_not_below(t);
      c.expect(a == 0 || sp.log_value(a) >= t,
               sp.label() + ": index " + std::to_string(a) + " below t");
      c.expect(sp.log_value(a + 1) < t,
               sp.label() + ": index " + std::to_string(a + 1) +
                   " still not below t");
      const std::uint64_t b = sp.last_index_above(t);
      c.expect(b == 0 || sp.log_value(b) > t,
               sp.label() + ": strict index not above t");
      c.expect(!(sp.log_value(b + 1) > t),
               sp.label() + ": strict index missed a later value");
    }
  }
  return {"last-index queries bracket the threshold", c.pass, c.detail.str()};
}

CheckResult check_domain_guards(std::mt19937_64&, bool) {
  Checker c;
  const auto expect_domain_error = [&c](const char* what,
                                        const std::function<void()>& fn) {
    try {
      fn();
      c.expect(false, std::string(what) + " did not throw");
    } catch (const std::domain_error&) {
    } catch (const std::out_of_range&) {
    } catch (...) {
      c.expect(false, std::string(what) + " threw the wrong type");
    }
  };
  expect_domain_error("fractional circ smoothness",
                      [] { torus_spectrum(TorusNorm::circ, 1.5, 1, 0, 1); });
  expect_domain_error("empty custom prefix", [] { custom_spectrum({}); });
  expect_domain_error("increasing custom prefix",
                      [] { custom_spectrum({0.5, 1.0}); });
  expect_domain_error("tail above the prefix seam", [] {
    custom_spectrum({1.0, 0.5}, TailRule{100.0, 1.0});
  });
  expect_domain_error("a_count with N=0", [] { a_count(0, 10, 2); });
  expect_domain_error("infinite count threshold", [] {
    tensor_count(CountQuery::power(dyadic_spectrum(), 2, neg_inf(), Cmp::ge));
  });
  expect_domain_error("tau_brute box too small",
                      [] { tau_brute(dyadic_spectrum(), 2, 40, 4); });
  return {"domain guards reject bad inputs", c.pass, c.detail.str()};
}

}  // namespace

VerificationReport run_verification(std::uint64_t seed, bool quick) {
  std::mt19937_64 rng(seed);
  VerificationReport report;
  const std::vector<
      std::function<CheckResult(std::mt19937_64&, bool)>>
      checks{check_a_count,       check_a1_identity,  check_dyadic_counts,
             check_sandwich,      check_tensor_count, check_topk_vs_brute,
             check_tau_at,        check_torus_formulas, check_h2_roots,
             check_envelopes,     check_preasymptotic, check_last_index,
             check_domain_guards};
  for (const auto& check : checks) {
    try {
      report.checks.push_back(check(rng, quick));
    } catch (const std::exception& e) {
      report.checks.push_back(
          {"unhandled exception", false, e.what()});
    }
  }
  return report;
}

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::size_t VerificationReport::fail_count() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += !c.pass;
  return n;
}

bool print_verification(const VerificationReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << (c.pass ? "[ ok ] " : "[FAIL] ") << c.name;
    if (!c.pass && !c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  if (report.all_pass()) {
    out << "verification: all " << report.checks.size() << " checks passed\n";
  } else {
    out << "verification: " << report.fail_count() << " of "
        << report.checks.size() << " checks FAILED\n";
  }
  return report.all_pass();
}

}  // namespace tensorpow
