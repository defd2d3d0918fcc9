#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "nls/soliton.hpp"

using namespace nls;

TEST_CASE("1d closed form: amplitudes and symmetry") {
  Problem p1{1, 1.0, 1.0}, p2{1, 2.0, 1.0};
  CHECK(soliton::closed_form_1d(p1, 0.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(soliton::closed_form_1d(p2, 0.0) ==
        doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-12));
  for (double x : {0.3, 1.7, 5.0})
    CHECK(soliton::closed_form_1d(p2, x) ==
          doctest::Approx(soliton::closed_form_1d(p2, -x)).epsilon(1e-14));
  Problem p3{3, 1.0, 1.0};
  CHECK_THROWS_AS(soliton::closed_form_1d(p3, 0.0), UnsupportedDimension);
}

TEST_CASE("1d closed form satisfies the profile equation") {
  // First integral of R'' - lambda R + R^{2 sigma + 1} = 0 with E = 0:
  // (R')^2 = lambda R^2 - R^{2 sigma + 2}/(sigma + 1), an independent
  // substitution oracle, exact for the homoclinic orbit.
  for (double sig : {1.0, 2.0, 2.1, 2.5, 3.0}) {
    Problem p{1, sig, 1.0};
    for (double x : {0.0, 0.4, 1.3, 3.0, 8.0}) {
      double R = soliton::closed_form_1d(p, x);
      double Rp = soliton::closed_form_1d_deriv(p, x);
      double res = Rp * Rp - R * R + std::pow(R, 2 * sig + 2) / (sig + 1);
      CHECK(std::abs(res) < 1e-12);
    }
    // And R' is the derivative of R (Richardson-extrapolated difference).
    double x = 0.9, h = 1e-3;
    double d1 = (soliton::closed_form_1d(p, x + h) -
                 soliton::closed_form_1d(p, x - h)) /
                (2 * h);
    double d2 = (soliton::closed_form_1d(p, x + h / 2) -
                 soliton::closed_form_1d(p, x - h / 2)) /
                h;
    double extrap = (4 * d2 - d1) / 3;
    CHECK(std::abs(extrap - soliton::closed_form_1d_deriv(p, x)) < 1e-10);
  }
}

TEST_CASE("1d numerical ground state matches the closed form") {
  for (double sig : {2.0, 2.1, 2.5, 3.0}) {
    Problem p{1, sig, 1.0};
    auto R = soliton::solve_ground_state(p, {30.0, 1e-12});
    CHECK(std::abs(R.b0 - soliton::closed_form_1d(p, 0.0)) < 1e-12);
    double sup = 0.0;
    for (int i = 0; i <= 600; ++i) {
      double x = 30.0 * i / 600;
      sup = std::max(sup, std::abs(R(x) - soliton::closed_form_1d(p, x)));
    }
    CHECK(sup < 1e-9);
    CHECK(std::abs(R.decay_slope + 1.0) < 1e-3);
  }
}

TEST_CASE("3d cubic ground state") {
  Problem p{3, 1.0, 1.0};
  auto R = soliton::solve_ground_state(p, {40.0, 1e-12});
  CHECK(R.b0 == doctest::Approx(4.3373876800).epsilon(1e-7));
  CHECK(R.residual < 1e-10);
  CHECK(std::abs(R.decay_slope + 1.0) < 1e-3);
  CHECK(R.deriv(0.0) == 0.0);
  // Monotone hump.
  double prev = R(0.0);
  for (int i = 1; i <= 400; ++i) {
    double r = 40.0 * i / 400.0;
    CHECK(R(r) < prev);
    CHECK(R(r) > 0.0);
    prev = R(r);
  }
  // r e^r R(r) asymptotically constant in the tail.
  double c1 = 12.0 * std::exp(12.0) * R(12.0);
  double c2 = 15.0 * std::exp(15.0) * R(15.0);
  CHECK(c1 == doctest::Approx(c2).epsilon(1e-3));
}

TEST_CASE("artificial boundary condition mismatch decays below 1e-8") {
  Problem p3{3, 1.0, 1.0};
  auto R3 = soliton::solve_ground_state(p3, {40.0, 1e-12});
  auto mis = soliton::check_artificial_bc(R3);
  CHECK(std::abs(mis.back().second) < 1e-8);
  // Envelope decays along the curve (the spliced tail satisfies the Robin
  // relation exactly, so the far end is identically zero).
  double early = std::abs(mis.front().second);
  CHECK(std::abs(mis[mis.size() / 2].second) <= early + 1e-12);

  Problem p1{1, 2.0, 1.0};
  auto R1 = soliton::solve_ground_state(p1, {30.0, 1e-12});
  auto mis1 = soliton::check_artificial_bc(R1);
  CHECK(std::abs(mis1.back().second) < 1e-8);
}

TEST_CASE("settings validation") {
  Problem p{3, 1.0, 1.0};
  CHECK_THROWS_AS(soliton::solve_ground_state(p, {40.0, 1e-6}), InvalidConfig);
  Problem bad{2, 1.0, 1.0};
  CHECK_THROWS_AS(soliton::solve_ground_state(bad, {40.0, 1e-12}),
                  UnsupportedDimension);
}
