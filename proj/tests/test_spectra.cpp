#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "tensorpow/numeric.hpp"
#include "tensorpow/spectrum.hpp"

using namespace tensorpow;

namespace {

double logv(const UnivariateSpectrum& s, std::uint64_t n) {
  return to_double(s.log_value(n));
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("torus closed forms across the four norms") {
  const double pi = std::acos(-1.0);

  // eta = 2*pi / (gamma*(b-a)) = 1 here.
  auto circ = torus_spectrum(TorusNorm::circ, 2.0, 1.0, 0.0, 2.0 * pi);
  CHECK(to_double(circ.log_value(1)) == 0.0);
  CHECK(logv(circ, 2) == doctest::Approx(-0.5 * std::log(3.0)).epsilon(1e-14));
  CHECK(logv(circ, 6) ==
        doctest::Approx(-0.5 * std::log(1.0 + 9.0 + 81.0)).epsilon(1e-14));

  auto star = torus_spectrum(TorusNorm::star, 1.5, 2.0, 0.0, 1.0);  // eta = pi
  CHECK(logv(star, 2) ==
        doctest::Approx(-0.5 * std::log1p(std::pow(pi, 3.0))).epsilon(1e-14));
  CHECK(logv(star, 9) ==
        doctest::Approx(-0.5 * std::log1p(std::pow(4.0 * pi, 3.0)))
            .epsilon(1e-14));

  auto plus = torus_spectrum(TorusNorm::plus, 2.5, 1.0, 0.0, 1.0);  // eta = 2pi
  CHECK(logv(plus, 4) ==
        doctest::Approx(-1.25 * std::log1p(std::pow(4.0 * pi, 2.0)))
            .epsilon(1e-14));

  auto hash = torus_spectrum(TorusNorm::hash, 1.7, 1.0, 0.0, 1.0);
  CHECK(logv(hash, 2) ==
        doctest::Approx(-1.7 * std::log1p(2.0 * pi)).epsilon(1e-14));
  CHECK(logv(hash, 11) ==
        doctest::Approx(-1.7 * std::log1p(10.0 * pi)).epsilon(1e-14));
}

TEST_CASE("torus half-pair structure") {
  auto s = torus_spectrum(TorusNorm::hash, 2.0, 1.0, 0.0, 1.0);
  for (std::uint64_t k : {1u, 2u, 7u, 40u, 333u})
    CHECK(s.log_value(2 * k) == s.log_value(2 * k + 1));
  CHECK(s.tie_multiplicity() == 2);
  CHECK(!s.rank());
  CHECK(s.log_value(2) < s.log_value(1));
}

TEST_CASE("torus envelope is (3/eta)^s certified") {
  const double pi = std::acos(-1.0);
  auto circ = torus_spectrum(TorusNorm::circ, 2.0, 1.0, 0.0, 2.0 * pi);
  REQUIRE(circ.envelope());
  CHECK(circ.envelope()->C == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(circ.envelope()->s == doctest::Approx(2.0));
  CHECK(circ.envelope()->certified);

  auto star = torus_spectrum(TorusNorm::star, 1.5, 2.0, 0.0, 1.0);
  REQUIRE(star.envelope());
  CHECK(star.envelope()->C ==
        doctest::Approx(std::pow(3.0 / pi, 1.5)).epsilon(1e-12));

  // The certificate must actually dominate: sigma(n) * n^s <= C.
  for (std::uint64_t n = 2; n <= 2000; ++n)
    CHECK(star.value(n) * std::pow(double(n), 1.5) <=
          star.envelope()->C * (1 + 1e-12));
}

TEST_CASE("torus parameter validation") {
  CHECK_THROWS_AS(torus_spectrum(TorusNorm::hash, 1.0, 0.0, 0.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(torus_spectrum(TorusNorm::hash, 1.0, 1.0, 1.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(torus_spectrum(TorusNorm::hash, 0.0, 1.0, 0.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(torus_spectrum(TorusNorm::circ, 1.5, 1.0, 0.0, 1.0),
                  std::domain_error);
  CHECK_NOTHROW(torus_spectrum(TorusNorm::circ, 3.0, 1.0, 0.0, 1.0));
}

TEST_CASE("jacobi values and envelope") {
  auto s = jacobi_spectrum(0.0, 0.0, 1.0);  // a = 1/2, sigma(n) = 1/(2n-1)
  for (std::uint64_t n = 1; n <= 50; ++n)
    CHECK(s.value(n) == doctest::Approx(1.0 / double(2 * n - 1)).epsilon(1e-15));
  CHECK(s.tie_multiplicity() == 1);
  REQUIRE(s.envelope());
  CHECK(s.envelope()->C == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.envelope()->s == doctest::Approx(1.0));
  CHECK(s.envelope()->certified);

  auto t = jacobi_spectrum(3.0, 0.0, 2.0);  // a = 2
  CHECK(t.value(3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(t.envelope()->C == doctest::Approx(4.0).epsilon(1e-12));
  for (std::uint64_t n = 2; n <= 2000; ++n)
    CHECK(t.value(n) * double(n) * double(n) <= 4.0 * (1 + 1e-12));
}

TEST_CASE("jacobi validation") {
  CHECK_THROWS_AS(jacobi_spectrum(-1.2, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(jacobi_spectrum(0.0, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(jacobi_spectrum(0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("cube H1 frozen values") {
  const double pi = std::acos(-1.0);
  auto s = cube_h1_spectrum(0.0, 1.0);
  CHECK(to_double(s.log_value(1)) == 0.0);
  CHECK(s.value(2) == doctest::Approx(0.303314471053352864).epsilon(1e-15));
  CHECK(logv(s, 2) == doctest::Approx(-1.192985153413410049).epsilon(1e-15));
  for (std::uint64_t n : {3ull, 10ull, 999ull})
    CHECK(logv(s, n) ==
          doctest::Approx(-0.5 * std::log1p(std::pow(double(n - 1) * pi, 2.0)))
              .epsilon(1e-14));
  CHECK(s.tie_multiplicity() == 1);

  REQUIRE(s.envelope());
  CHECK(s.envelope()->C ==
        doctest::Approx(0.606628942106705728).epsilon(1e-13));
  CHECK(s.envelope()->s == doctest::Approx(1.0));
  CHECK(s.envelope()->certified);
  for (std::uint64_t n = 2; n <= 10000; ++n)
    CHECK(s.value(n) * double(n) <= s.envelope()->C * (1 + 1e-12));

  auto wide = cube_h1_spectrum(-1.0, 3.0);  // kappa = pi/4
  CHECK(wide.value(2) ==
        doctest::Approx(1.0 / std::sqrt(1.0 + std::pow(pi / 4.0, 2.0)))
            .epsilon(1e-14));
  CHECK_THROWS_AS(cube_h1_spectrum(1.0, 1.0), std::domain_error);
}

TEST_CASE("cube H2 frozen roots and values") {
  auto roots = find_h2_frequencies(0.0, 1.0, 8);
  REQUIRE(roots.size() == 8);
  CHECK(roots[0].omega == 0.0);
  CHECK(roots[1].omega ==
        doctest::Approx(1.729751999814863381).epsilon(1e-13));
  CHECK(roots[1].branch == 2);
  bool saw_branch1 = false;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    CHECK(roots[i].omega > roots[i - 1].omega);
    CHECK(std::abs(roots[i].residual) <= 1e-12);
    if (roots[i].branch == 1 && !saw_branch1) {
      saw_branch1 = true;
      CHECK(roots[i].omega ==
            doctest::Approx(4.791242127199603485).epsilon(1e-13));
    }
  }
  CHECK(saw_branch1);
  // The branches alternate, advancing by pi / (b - a) per merged step.
  const double pi = std::acos(-1.0);
  for (std::size_t i = 2; i + 1 < roots.size(); ++i)
    CHECK(roots[i + 1].omega - roots[i].omega ==
          doctest::Approx(pi).epsilon(0.06));

  auto s = cube_h2_spectrum(0.0, 1.0);
  CHECK(to_double(s.log_value(1)) == 0.0);
  CHECK(s.value(2) == doctest::Approx(0.2779455694751951621).epsilon(1e-13));
  CHECK(logv(s, 2) == doctest::Approx(-1.280329977716195217).epsilon(1e-13));
  const double w = roots[2].omega;
  CHECK(logv(s, 3) ==
        doctest::Approx(-0.5 * std::log(1.0 + w * w + w * w * w * w))
            .epsilon(1e-13));
  CHECK(s.tie_multiplicity() == 1);

  REQUIRE(s.envelope());
  CHECK(s.envelope()->C == doctest::Approx(0.607).epsilon(1e-12));
  CHECK(s.envelope()->s == doctest::Approx(1.0));
  CHECK(s.envelope()->certified);
  for (std::uint64_t n = 2; n <= 3000; ++n)
    CHECK(s.value(n) * double(n) <= 0.607 * (1 + 1e-12));
}

TEST_CASE("cube H2 rescaled interval") {
  auto s = cube_h2_spectrum(0.0, 2.0);
  // The weight 1 + w^2 + w^4 breaks scale invariance, so roots on [0, 2]
  // are not half the unit-interval roots; they are smaller though.
  auto unit = find_h2_frequencies(0.0, 1.0, 6);
  auto wide = find_h2_frequencies(0.0, 2.0, 6);
  for (std::size_t i = 1; i < 6; ++i) {
    CHECK(wide[i].omega < unit[i].omega);
    CHECK(std::abs(wide[i].residual) <= 1e-12);
  }
  CHECK(s.value(2) > s.value(3));
  REQUIRE(s.envelope());
  CHECK(!s.envelope()->certified);  // fitted, not the unit-interval constant
  CHECK(s.envelope()->s == doctest::Approx(2.0));
  for (std::uint64_t n = 2; n <= 2000; ++n)
    CHECK(s.value(n) * std::pow(double(n), 2.0) <=
          s.envelope()->C * (1 + 1e-12));
}

TEST_CASE("periodic spectrum interlaces the nonperiodic one") {
  // sigma(n+1) <= sigma~(n) <= sigma(n) for the unit interval, s = 1.
  auto periodic = torus_spectrum(TorusNorm::circ, 1.0, 1.0, 0.0, 1.0);
  auto cube = cube_h1_spectrum(0.0, 1.0);
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    const xreal slack = tie_slack(cube.log_value(n), periodic.log_value(n));
    CHECK(periodic.log_value(n) <= cube.log_value(n) + slack);
    CHECK(cube.log_value(n + 1) <= periodic.log_value(n) + slack);
  }
}

TEST_CASE("dyadic staircase") {
  auto s = dyadic_spectrum();
  CHECK(s.value(1) == 1.0);
  CHECK(s.value(2) == 0.5);
  CHECK(s.value(3) == 0.5);
  CHECK(s.value(4) == 0.25);
  CHECK(s.value(1023) == doctest::Approx(std::pow(2.0, -9.0)).epsilon(1e-15));
  CHECK(s.value(1024) == doctest::Approx(std::pow(2.0, -10.0)).epsilon(1e-15));
  CHECK(s.tie_multiplicity() == 2);
  REQUIRE(s.envelope());
  CHECK(s.envelope()->C == doctest::Approx(2.0));
  CHECK(s.envelope()->s == doctest::Approx(1.0));
  CHECK(s.envelope()->certified);
}

TEST_CASE("custom spectra: prefix, tail, finite rank") {
  auto bare = custom_spectrum({1.0, 0.5});
  CHECK(bare.value(2) == 0.5);
  CHECK(!bare.envelope());
  CHECK_THROWS_AS(bare.log_value(3), std::out_of_range);

  auto tail = custom_spectrum({1.0, 0.5}, TailRule{1.5, 1.0});
  CHECK(tail.value(3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tail.value(6) == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(tail.envelope());
  CHECK(tail.envelope()->C == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(tail.envelope()->certified);

  auto fin = custom_spectrum({1.0, 0.5, 0.5, 0.125}, std::nullopt, true);
  CHECK(fin.rank() == 4);
  CHECK(fin.value(5) == 0.0);
  CHECK(fin.log_value(5) == neg_inf());
  CHECK(fin.tie_multiplicity() == 2);

  auto rank1 = custom_spectrum({0.5}, std::nullopt, true);
  CHECK(rank1.rank() == 1);
  CHECK(!rank1.tie_multiplicity());  // sigma(2) = 0, the class never ends
}

TEST_CASE("custom validation") {
  CHECK_THROWS_AS(custom_spectrum({}), std::domain_error);
  CHECK_THROWS_AS(custom_spectrum({0.5}), std::domain_error);
  CHECK_THROWS_AS(custom_spectrum({1.0, 1.1}), std::domain_error);
  CHECK_THROWS_AS(custom_spectrum({1.0, -0.5}), std::domain_error);
  CHECK_THROWS_AS(custom_spectrum({1.0, 0.0}), std::domain_error);
  CHECK_NOTHROW(custom_spectrum({1.0, 0.0}, std::nullopt, true));
  // Tail must continue below the prefix at the seam.
  CHECK_THROWS_AS(custom_spectrum({1.0, 0.5}, TailRule{3.0, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(custom_spectrum({1.0, 0.5}, TailRule{1.5, 0.0}),
                  std::domain_error);
}

TEST_CASE("last-index queries") {
  auto s = jacobi_spectrum(0.0, 0.0, 1.0);  // log sigma(n) = -ln(2n-1)
  const xreal t = -log(xreal(9.0));
  CHECK(s.last_index_not_below(t) == 5);
  CHECK(s.last_index_above(t) == 4);
  CHECK(s.last_index_not_below(xreal(0.5)) == 0);
  CHECK(s.last_index_not_below(
            std::numeric_limits<xreal>::infinity()) == 0);
  CHECK_THROWS_AS(s.last_index_not_below(neg_inf()), std::domain_error);

  auto fin = custom_spectrum({1.0, 0.5, 0.25}, std::nullopt, true);
  CHECK(fin.last_index_above(neg_inf()) == 3);
  CHECK(fin.last_index_not_below(-log(xreal(3.0))) == 2);

  auto bare = custom_spectrum({1.0, 0.5});
  CHECK_THROWS_AS(bare.last_index_not_below(-log(xreal(100.0))),
                  std::out_of_range);
}

TEST_CASE("family descriptors round trip") {
  FamilyDescriptor fam;
  fam.kind = FamilyKind::dyadic;
  auto s = make_spectrum(fam);
  CHECK(s.value(4) == 0.25);
  CHECK(fam.name() == s.label());

  FamilyDescriptor tor;
  tor.kind = FamilyKind::torus;
  tor.norm = TorusNorm::star;
  tor.smoothness = 1.5;
  tor.gamma = 2.0;
  tor.lo = 0.0;
  tor.hi = 1.0;
  auto ts = make_spectrum(tor);
  CHECK(ts.log_value(5) ==
        torus_spectrum(TorusNorm::star, 1.5, 2.0, 0.0, 1.0).log_value(5));
  CHECK(tor.name().find("star") != std::string::npos);

  FamilyDescriptor cus;
  cus.kind = FamilyKind::custom;
  cus.prefix = {1.0, 0.25};
  cus.tail = TailRule{0.9, 2.0};
  auto cs = make_spectrum(cus);
  CHECK(cs.value(3) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("precision switch") {
  const Precision saved = active_precision();
  set_active_precision(Precision::dbl);
  CHECK(tie_epsilon() == doctest::Approx(1e-13));
  auto s = jacobi_spectrum(0.25, 0.25, 1.5);
  const xreal lv = s.log_value(7);
  CHECK(xreal(to_double(lv)) == lv);  // double backend stores doubles exactly

  set_active_precision(Precision::extended);
  CHECK(tie_epsilon() == doctest::Approx(1e-24));
  auto e = jacobi_spectrum(0.25, 0.25, 1.5);
  CHECK(xreal(to_double(e.log_value(7))) != e.log_value(7));

  set_active_precision(saved);
}

}  // TEST_SUITE("spectra")
