#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "nls/mourre.hpp"

using namespace nls;

namespace {

ops::PotentialSet& pot3d() {
  static soliton::Profile R =
      soliton::solve_ground_state({3, 1.0, 1.0}, {40.0, 1e-12});
  static ops::PotentialSet p(R);
  return p;
}

mourre::DerivFn zero_pot() {
  return [](double, double out[4]) { out[0] = out[1] = out[2] = out[3] = 0.0; };
}

mourre::DerivFn scaled(const ops::PotentialSet& p, ops::Sign s, double c) {
  return [&p, s, c](double r, double out[4]) {
    p.derivs(s, r, out);
    for (int i = 0; i < 4; ++i) out[i] *= c;
  };
}

}  // namespace

TEST_CASE("zero potentials: C1 = C2 = 0, mu0 = lambda, alpha0 = 0") {
  mourre::MourreReport rep;
  mourre::large_eigenvalue_bound(zero_pot(), zero_pot(), 3, 1.0, 16.0, rep);
  CHECK(rep.F_sup == 0.0);
  CHECK(rep.C1 == 0.0);
  CHECK(rep.C2 == 0.0);
  CHECK(rep.mu0_applicable);
  CHECK(rep.mu0 == doctest::Approx(1.0).epsilon(1e-12));
  mourre::harmonic_bound(zero_pot(), zero_pot(), 3, 1.0, 16.0, rep);
  CHECK(rep.harmonic_applicable);
  CHECK(rep.alpha0 == 0.0);
  CHECK(rep.k_cutoff == 0);
}

TEST_CASE("3d cubic bounds") {
  auto rep = mourre::evaluate(pot3d());
  CHECK(rep.F_sup == doctest::Approx(5135.91).epsilon(1e-2));
  CHECK(rep.C1 == doctest::Approx(1283.98).epsilon(1e-2));
  CHECK(rep.C2 == doctest::Approx(40.2677).epsilon(1e-2));
  CHECK_FALSE(rep.mu0_applicable);
  CHECK(rep.harmonic_applicable);
  CHECK(rep.alpha0 == doctest::Approx(3.472580).epsilon(1e-2));
  CHECK(rep.k_cutoff == 4);
}

TEST_CASE("1d bounds for every sigma") {
  struct Row {
    double sig, C1, C2;
  };
  const Row rows[] = {{2.0, 71.9944, 7.67743},
                      {2.1, 84.5677, 8.23085},
                      {2.5, 152.29, 10.6364},
                      {3.0, 287.05, 14.0753}};
  for (const Row& row : rows) {
    auto R = soliton::solve_ground_state({1, row.sig, 1.0}, {30.0, 1e-12});
    ops::PotentialSet pot(R);
    auto rep = mourre::evaluate(pot);
    CHECK(rep.C1 == doctest::Approx(row.C1).epsilon(1e-2));
    CHECK(rep.C2 == doctest::Approx(row.C2).epsilon(1e-2));
    CHECK_FALSE(rep.mu0_applicable);
  }
}

TEST_CASE("scaling monotonicity of the bounds") {
  auto Vm = scaled(pot3d(), ops::Sign::minus, 1.0);
  auto Vp = scaled(pot3d(), ops::Sign::plus, 1.0);
  mourre::MourreReport one, twice, half;
  mourre::large_eigenvalue_bound(Vm, Vp, 3, 1.0, 16.0, one);
  mourre::harmonic_bound(Vm, Vp, 3, 1.0, 16.0, one);
  mourre::large_eigenvalue_bound(scaled(pot3d(), ops::Sign::minus, 2.0),
                                 scaled(pot3d(), ops::Sign::plus, 2.0), 3, 1.0,
                                 16.0, twice);
  mourre::harmonic_bound(scaled(pot3d(), ops::Sign::minus, 2.0),
                         scaled(pot3d(), ops::Sign::plus, 2.0), 3, 1.0, 16.0,
                         twice);
  mourre::large_eigenvalue_bound(scaled(pot3d(), ops::Sign::minus, 0.5),
                                 scaled(pot3d(), ops::Sign::plus, 0.5), 3, 1.0,
                                 16.0, half);
  // C2 is a sum of sup norms of single terms, hence monotone under scaling.
  // C1 is not (F mixes signed linear and quadratic terms).
  CHECK(twice.C2 > one.C2);
  CHECK(twice.alpha0 >= one.alpha0);
  CHECK(half.C2 < one.C2);
}
