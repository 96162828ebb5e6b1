#include <doctest.h>

#include <numbers>
#include <vector>

#include "fvcs/rotator.hpp"
#include "oracles/oracles.hpp"

using namespace fvcs;

TEST_CASE("coherent coefficients") {
  const auto kind = SpectrumKind::rotator(1.0);
  const auto s = build_state({{0.6, -0.8}}, kind, 64);
  double norm = 0.0;
  for (auto c : s.coeffs) norm += std::norm(c);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(eigen_residual(s) < 1e-14);
  CHECK(s.norm == doctest::Approx(2.659329613607664990).epsilon(1e-14));
  CHECK_THROWS_AS(build_state({{4.0, 0.0}}, kind, 16), TruncationError);
  try {
    build_state({{4.0, 0.0}}, kind, 16);
  } catch (const TruncationError& e) {
    CHECK_NOTHROW(build_state({{4.0, 0.0}}, kind, e.suggested_n_max()));
  }
}

TEST_CASE("Glauber limit") {
  const std::complex<double> alpha(1.2, -1.5);
  const auto s = build_state({alpha}, SpectrumKind::rotator(1e-6), 80);
  double worst = 0.0;
  std::complex<double> g = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < 80; ++n) {
    if (n > 0) g *= alpha / std::sqrt(static_cast<double>(n));
    worst = std::max(worst, std::abs(s.coeffs[n] - g));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("occupation weights are normalized") {
  const auto w = occupation_weights(SpectrumKind::rotator(8.0), 8.0);
  double total = 0.0;
  for (double x : w.w) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.tail < 1e-16);
  CHECK(occupation_weights(SpectrumKind::rotator(1.0), 0.0).w.size() == 1);
}

TEST_CASE("mean annihilator: series against closed form and the nonrelativistic limit") {
  std::vector<double> t;
  for (int i = 0; i <= 100; ++i) t.push_back(2 * std::numbers::pi * i / 100);
  const CoherentLabel label{{1.0, 0.0}};
  const auto s = evolve_mean_a(build_state(label, SpectrumKind::rotator(1e-6), 32), t);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    worst = std::max(worst, std::abs(s[i] - std::polar(1.0, -t[i])));
  }
  CHECK(worst < 1e-6);

  // closed form drops O(lambda^4 n^2) frequency terms: on a fixed window the
  // gap falls ~16x when lambda halves
  auto gap = [&](double l) {
    const auto a = evolve_mean_a(build_state(label, SpectrumKind::rotator(l), 32), t);
    const auto c = evolve_mean_a_closed(label, l, t);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(a[i] - c[i]));
    return worst;
  };
  const double g1 = gap(0.1), g2 = gap(0.05);
  CHECK(g2 < 5e-4);
  CHECK(g1 / g2 > 12.0);
  const auto c = evolve_mean_a_closed(label, 0.05, t);

  // negative charge: conjugate rotation sense, opposite sign
  const CoherentLabel neg{{1.0, 0.0}, Charge::negative};
  const auto n = evolve_mean_a_closed(neg, 0.05, t);
  CHECK(std::abs(n[10] + std::conj(c[10])) < 1e-15);
}

TEST_CASE("gyration radius statistics") {
  const auto kind = SpectrumKind::rotator(8.0);
  const auto r0 = radius_stats(kind, 0.0);
  CHECK(r0.dispersion == 1.0);
  CHECK(r0.expected_R2 == 1.0);
  const auto r = radius_stats(kind, 8.0);
  CHECK(r.dispersion == doctest::Approx(0.981448208005126201).epsilon(1e-12));
  // dispersion = <2n+1> - 2|alpha|^2 with weights from the oracle
  const auto w = occupation_weights(kind, 8.0);
  double mean = 0.0;
  for (std::size_t n = 0; n < w.w.size(); ++n) mean += w.w[n] * (2.0 * n + 1.0);
  CHECK(r.dispersion == doctest::Approx(mean - 16.0).epsilon(1e-12));
  // Glauber: dispersion 1 + 2|alpha|^2 - ... = 1 exactly for all alpha
  CHECK(radius_stats(kind.undeformed(), 5.0).dispersion == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("R^2 is conserved under the evolution") {
  const auto s = build_state({{1.0, 1.0}}, SpectrumKind::rotator(1.0), 64);
  std::vector<double> t{0.0, 1.0, 10.0, 123.4};
  const auto r2 = evolve_mean_R2(s, t);
  for (double v : r2) CHECK(std::abs(v - r2[0]) < 1e-12);
  CHECK(r2[0] == doctest::Approx(radius_stats(s.kind, 2.0).expected_R2).epsilon(1e-12));
}

TEST_CASE("moments of the resolution of unity") {
  const auto kind = SpectrumKind::rotator(1.0);
  const std::vector<int> ns{0, 1, 5};
  const auto m = unity_moments_log(kind, ns);
  CHECK(m[0] == 0.0);
  CHECK(m[1] == doctest::Approx(std::log(1.030330085889910643)).epsilon(1e-14));

  const double h = 0.01;
  std::vector<double> w;
  for (int i = 0; i <= 16000; ++i) w.push_back(std::exp(-h * i));
  const auto plain = verify_weight(w, 0.0, h, kind.undeformed(), 15);
  CHECK(plain.max_relative_error < 1e-8);
  CHECK_FALSE(plain.negative_weight);
  const auto gap = verify_weight(w, 0.0, h, kind, 15);
  CHECK(gap.relative_errors[1] > 1e-2);
  CHECK(gap.relative_errors[0] < 1e-8);

  std::vector<double> short_grid(w.begin(), w.begin() + 1001);
  CHECK_THROWS_AS(verify_weight(short_grid, 0.0, h, kind, 15), ConvergenceError);
}

TEST_CASE("figure tables") {
  std::vector<double> t{0.0, 100.0, 200.0};
  const auto& p = kFig3Presets[1];
  const auto tab = fig3_data(p.lambda, {p.q / std::numbers::sqrt2, p.p / std::numbers::sqrt2}, t, 64);
  CHECK(tab.rows.size() == 3);
  CHECK(tab.rows[0][1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(tab.rows[0][2] == doctest::Approx(tab.rows[0][1]).epsilon(1e-13));

  std::vector<double> omegas{0.01, 1.0, 10.0};
  std::vector<double> radii{0.0, 1.0};
  const auto f4 = fig4_data(omegas, radii, 2);
  CHECK(f4.columns.size() == 6);
  CHECK(f4.failed_rows() == 0);
  // R = 0 coincides with the nonlocal theory
  for (const auto& row : f4.rows) CHECK(row[2] == doctest::Approx(row[3]).epsilon(1e-12));
}
