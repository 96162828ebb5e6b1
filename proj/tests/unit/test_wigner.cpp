#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "fvcs/wigner.hpp"
#include "oracles/oracles.hpp"

using namespace fvcs;

namespace {

double gaussian(double q, double p, double cq, double cp) {
  return std::exp(-(q - cq) * (q - cq) - (p - cp) * (p - cp)) / std::numbers::pi;
}

double max_gauss_dev(const PhaseSpaceGrid& g, double cq, double cp) {
  double worst = 0.0;
  for (int j = 0; j < g.spec.np; ++j) {
    for (int i = 0; i < g.spec.nq; ++i) {
      worst = std::max(worst, std::abs(g.values(j, i) - gaussian(g.spec.q(i), g.spec.p(j), cq, cp)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("grid_around is symmetric") {
  const auto s = grid_around(1.0, -2.0, 4.3, 4.3, 0.5);
  CHECK(s.nq == 19);
  CHECK(s.q(9) == doctest::Approx(1.0));
  CHECK(s.p(9) == doctest::Approx(-2.0));
}

TEST_CASE("free kernel: Glauber limit, marginals, mass") {
  const auto st = make_free_state({{0.5, 1.0}}, 1e-8);
  const double cq = std::numbers::sqrt2 * 0.5, cp = std::numbers::sqrt2;
  const auto g = wigner_free(st, grid_around(cq, cp, 4.5, 4.5, 0.1));
  CHECK(max_gauss_dev(g, cq, cp) < 1e-6);
  CHECK(g.flagged.empty());

  for (double l : {0.5, 2.0, 8.0}) {
    const auto s2 = make_free_state({{0.0, 0.7}}, l);
    const double c = std::numbers::sqrt2 * 0.7;
    // coarse q step is enough: the q-sum only has to resolve x = 0
    const double hq = free_q_tail_halfwidth(l);
    const int nq = 2 * static_cast<int>(std::ceil(hq / 0.5)) + 1;
    const auto w = wigner_free(s2, {-0.25 * (nq - 1), 0.25 * (nq - 1), nq, c - 6.0, c + 6.0, 121});
    const auto m = marginals(w);
    double worst = 0.0;
    for (int j = 0; j < w.spec.np; ++j) {
      const double p = w.spec.p(j);
      worst = std::max(worst, std::abs(m.p_marginal[j] - std::exp(-(p - c) * (p - c)) / std::sqrt(std::numbers::pi)));
    }
    CHECK(worst < 1e-6);
    CHECK(m.total_mass == doctest::Approx(1.0).epsilon(1e-4));
  }
  CHECK_THROWS_AS(wigner_free(st, grid_around(0.0, 0.0, 2.0, 2.0, 0.1)), DomainError);
}

TEST_CASE("rotator kernel: vacuum, Glauber limit, direct triple sum") {
  const auto vac = build_state({{0.0, 0.0}}, SpectrumKind::rotator(2.0), 16);
  const auto g0 = wigner_rotator(vac, grid_around(0.0, 0.0, 4.5, 4.5, 0.25));
  CHECK(max_gauss_dev(g0, 0.0, 0.0) < 1e-15);
  CHECK_FALSE(negativity(g0).any);
  CHECK(negativity(g0).negative_fraction == 0.0);

  const std::complex<double> alpha(1.0, 0.0);
  const auto gl = wigner_rotator(build_state({alpha}, SpectrumKind::rotator(1e-8), 32),
                                 grid_around(std::numbers::sqrt2, 0.0, 4.5, 4.5, 0.25));
  CHECK(max_gauss_dev(gl, std::numbers::sqrt2, 0.0) < 1e-6);
  CHECK(gl.max_imag < 1e-10);

  const std::complex<double> a2(0.6, 0.9);
  const auto st = build_state({a2}, SpectrumKind::rotator(2.0), 32);
  const auto g = wigner_rotator(st, grid_around(std::numbers::sqrt2 * 0.6, std::numbers::sqrt2 * 0.9, 4.5, 4.5, 0.75));
  for (int j = 0; j < g.spec.np; j += 3) {
    for (int i = 0; i < g.spec.nq; i += 3) {
      const double q = g.spec.q(i), p = g.spec.p(j);
      if (q * q + p * p < 0.05) continue;
      const double ref = static_cast<double>(oracle::wigner_rotator_direct(2.0L, a2, q, p, 30));
      CHECK(std::abs(g.values(j, i) - ref) < 1e-12);
    }
  }
  CHECK(g.max_imag < 1e-10);
}

TEST_CASE("figure presets show negative regions around the origin") {
  const auto f5 = make_free_state({{0.0, 1.0 / std::numbers::sqrt2}}, 8.0);
  const auto g5 = wigner_free(f5, grid_around(0.0, 1.0, 5.0, 5.0, 0.05));
  const auto n5 = negativity(g5);
  CHECK(n5.any);
  CHECK(n5.box_contains(0.0, 0.0));
  CHECK(n5.min_value < -0.01);

  const std::complex<double> a6(std::numbers::sqrt2, std::numbers::sqrt2);
  const auto s6 = build_state({a6}, SpectrumKind::rotator(8.0), 64);
  const auto g6 = wigner_rotator(s6, grid_around(2.0, 2.0, 5.0, 5.0, 0.05));
  const auto n6 = negativity(g6);
  CHECK(n6.any);
  CHECK(n6.box_contains(0.0, 0.0));
  CHECK(g6.max_imag < 1e-10);
}

TEST_CASE("grid export") {
  const auto vac = build_state({{0.0, 0.0}}, SpectrumKind::rotator(2.0), 16);
  const auto g = wigner_rotator(vac, {-4.5, 4.5, 3, -4.5, 4.5, 2});
  const auto dir = std::filesystem::temp_directory_path() / "fvcs_test_wigner";
  std::filesystem::create_directories(dir);
  write_grid_csv(dir / "w.csv", g);
  write_grid_meta(dir / "w.json", g);
  std::ifstream in(dir / "w.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "q,p,value");
  CHECK(first.rfind("-4.5,-4.5,", 0) == 0);
  CHECK(g.meta["units"]["p_to_mc"] == 2.0);
}
