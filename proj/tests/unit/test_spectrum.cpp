#include <doctest.h>

#include <cmath>

#include "fvcs/spectrum.hpp"
#include "oracles/oracles.hpp"

using namespace fvcs;

TEST_CASE("eps and chi at lambda = 1, n = 1") {
  const auto ec = eps_chi(SpectrumKind::rotator(1.0), 1);
  CHECK(ec.eps == doctest::Approx(1.015051765128217805).epsilon(1e-15));
  CHECK(ec.chi == doctest::Approx(-0.174155349874503262).epsilon(1e-15));
  CHECK(ec.eps * ec.eps == doctest::Approx(1.030330085889910643).epsilon(1e-15));
  CHECK(eps_chi(SpectrumKind::rotator(8.0), 1).eps ==
        doctest::Approx(1.037241487601724161).epsilon(1e-15));
}

TEST_CASE("eps and chi agree with direct substitution") {
  for (double l : {1e-6, 0.1, 1.0, 8.0, 50.0}) {
    const auto kind = SpectrumKind::rotator(l);
    for (int n : {1, 2, 10, 100, 1000}) {
      const auto ec = eps_chi(kind, n);
      CHECK(std::abs(ec.eps - static_cast<double>(oracle::eps_direct(l, n))) < 1e-15);
      CHECK(std::abs(ec.chi - static_cast<double>(oracle::chi_direct(l, n))) < 1e-15);
      CHECK(std::abs(std::log(ec.eps) - log_eps(kind, n)) < 1e-15);
    }
  }
}

TEST_CASE("hyperbolic identity eps^2 - chi^2 = 1") {
  double worst = 0.0;
  for (double l : {0.1, 1.0, 8.0}) {
    for (const auto& kind : {SpectrumKind::rotator(l), SpectrumKind::magnetic(l, 0.0),
                             SpectrumKind::magnetic(l, 0.5), SpectrumKind::magnetic(l, 2.0)}) {
      for (int n = 1; n <= 1000; ++n) {
        const auto ec = eps_chi(kind, n);
        worst = std::max(worst, std::abs(ec.eps * ec.eps - ec.chi * ec.chi - 1.0));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("domain errors and the undeformed kind") {
  CHECK_THROWS_AS(eps_chi(SpectrumKind::free(1.0), 1), DomainError);
  CHECK_THROWS_AS(eps_chi(SpectrumKind::rotator(1.0), 0), DomainError);
  CHECK_THROWS_AS(energy(SpectrumKind::rotator(1.0), -1), DomainError);
  CHECK_THROWS_AS(SpectrumKind::rotator(0.0), DomainError);
  const auto u = eps_chi(SpectrumKind::rotator(8.0).undeformed(), 5);
  CHECK(u.eps == 1.0);
  CHECK(u.chi == 0.0);
}

TEST_CASE("nonrelativistic limit eps -> 1") {
  const auto kind = SpectrumKind::rotator(1e-6);
  double worst = 0.0;
  for (int n = 1; n <= 1000; ++n) worst = std::max(worst, std::abs(eps_chi(kind, n).eps - 1.0));
  CHECK(worst < 1e-9);
}

TEST_CASE("level gap and magnetic energies") {
  const auto kind = SpectrumKind::rotator(1e-6);
  CHECK(level_gap(kind, 3) == doctest::Approx(1e-12).epsilon(1e-6));
  const auto m = SpectrumKind::magnetic(0.5, 2.0);
  CHECK(energy(m, 3) == doctest::Approx(std::sqrt(1 + 4 + 2 * 0.25 * 3.5)).epsilon(1e-15));
  CHECK(energy_free(0.75) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("large-n coefficient of eps - 1") {
  for (double l : {0.5, 1.0, 8.0}) {
    const auto c = eps_asymptote_check(l, 100000);
    CHECK(c.measured_coefficient == doctest::Approx(1.0 / 32.0).epsilon(1e-4));
  }
  // With the printed coefficient the residual only falls like 1/n^2.
  const auto a = eps_asymptote_check(1.0, 10000);
  const auto b = eps_asymptote_check(1.0, 20000);
  CHECK(b.residual / a.residual == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(a.printed_coefficient == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("eps factorial, table and bounds") {
  const auto kind = SpectrumKind::rotator(1.0);
  oracle::ld prod = 1.0L;
  for (int n = 1; n <= 50; ++n) prod *= oracle::eps_direct(1.0L, n);
  CHECK(eps_factorial(kind, 50) == doctest::Approx(static_cast<double>(prod)).epsilon(1e-14));
  CHECK(eps_factorial(kind, 0) == 1.0);

  const EpsTable t(kind, 200);
  for (int n : {1, 17, 200}) {
    CHECK(t.log_eps(n) == log_eps(kind, n));
    CHECK(t.log_eps_factorial(n) == doctest::Approx(log_eps_factorial(kind, n)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(t.log_eps(201), DomainError);

  for (double l : {0.1, 1.0, 8.0}) {
    const auto b = eps_factorial_bounds(SpectrumKind::rotator(l), 10000);
    CHECK(b.bracketed);
    CHECK(b.a > 0.0);
    CHECK(b.a < b.b);
    CHECK(std::abs(eps_factorial(SpectrumKind::rotator(l), 10000) - std::exp(b.log_limit)) <
          2 * b.tail);
  }
}

TEST_CASE("eps of two arguments") {
  const auto kind = SpectrumKind::rotator(2.0);
  CHECK(eps_two_arg(kind, 4, 4) == 1.0);
  CHECK(eps_two_arg(kind, 3, 4) == doctest::Approx(eps_chi(kind, 4).eps).epsilon(1e-15));
  CHECK(eps_two_arg(kind, 2, 9) == eps_two_arg(kind, 9, 2));
}

TEST_CASE("normalization series") {
  const auto kind = SpectrumKind::rotator(1.0);
  const auto n = normalization(kind, 1.0);
  CHECK(n.value == doctest::Approx(2.659329613607664990).epsilon(1e-14));
  CHECK(n.value == doctest::Approx(static_cast<double>(oracle::normalization_direct(1.0L, 1.0L))).epsilon(1e-14));
  CHECK(normalization(kind.undeformed(), 2.0).value == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
  CHECK(normalization(kind, 0.0).value == 1.0);
  CHECK(normalization(SpectrumKind::rotator(8.0), 40.0).value ==
        doctest::Approx(static_cast<double>(oracle::normalization_direct(8.0L, 40.0L))).epsilon(1e-13));
}
