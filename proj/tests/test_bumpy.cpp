#include <cmath>

#include "doctest.h"
#include "hvp/bumpy.hpp"
#include "hvp/util.hpp"
#include "hvp/vper.hpp"

using namespace hvp;

TEST_CASE("prototype bump: shape and closed-form derivatives") {
  BumpPrototype p = make_bump();
  CHECK(p.c > 0);
  CHECK(p.max_value == doctest::Approx(p.c * std::exp(-8.0)).epsilon(1e-12));
  CHECK(BumpPrototype::b(0.0) == 0);
  CHECK(BumpPrototype::b(1.0) == 0);
  CHECK(BumpPrototype::b(-0.3) == 0);
  CHECK(BumpPrototype::b(0.3) == BumpPrototype::b(0.7));  // symmetry
  // derivative formulas vs central differences
  for (double u : {0.2, 0.45, 0.6, 0.85}) {
    double h = 1e-6;
    double d_fd = (BumpPrototype::b(u + h) - BumpPrototype::b(u - h)) / (2 * h);
    CHECK(BumpPrototype::db(u) == doctest::Approx(d_fd).epsilon(1e-6));
    double d2_fd = (BumpPrototype::db(u + h) - BumpPrototype::db(u - h)) /
                   (2 * h);
    CHECK(BumpPrototype::d2b(u) == doctest::Approx(d2_fd).epsilon(1e-5));
  }
}

TEST_CASE("prototype normalization: largest order-<=2 partial is 0.99") {
  BumpPrototype p = make_bump();
  CHECK(p.max_partial(2048) == doctest::Approx(0.99).epsilon(1e-12));
  // independent oracle: dense 2D scan of all six partials
  double worst = 0;
  int n = 600;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double x = (i + 0.5) / n, z = (j + 0.5) / n;
      double bx = BumpPrototype::b(x), bz = BumpPrototype::b(z);
      double dx = BumpPrototype::db(x), dz = BumpPrototype::db(z);
      double d2x = BumpPrototype::d2b(x), d2z = BumpPrototype::d2b(z);
      for (double v : {bx * bz, dx * bz, bx * dz, d2x * bz, bx * d2z, dx * dz})
        worst = std::max(worst, std::fabs(p.c * v));
    }
  CHECK(worst == doctest::Approx(0.99).epsilon(0.01));
}

TEST_CASE("calibration: window constants and 2D quadrature cross-check") {
  BumpPrototype proto = make_bump();
  Calibration cal = calibrate(proto);
  CHECK(cal.eta > 0);
  CHECK(cal.r < cal.R);
  CHECK(cal.rho >= 8);
  CHECK(cal.rho == (long long)std::ceil(std::max(
                       {8.0, 12.0 / (std::pow(2.0, cal.r) * cal.eta),
                        40.0 * std::pow(2.0, cal.s) / cal.eta})));
  // η is the minimum of the profile over [r, R]
  for (size_t i = 0; i < cal.phi_profile.a.size(); ++i) {
    double a = cal.phi_profile.a[i];
    if (a >= cal.r - 1e-12 && a <= cal.R + 1e-12)
      CHECK(cal.phi_profile.v[i] >= cal.eta - 1e-15);
  }
  // separable profile vs full 2D quadrature of the periodized prototype
  FunctionField phi(
      [&](double x, double z) {
        return proto.c * BumpPrototype::b(x - std::floor(x)) *
               BumpPrototype::b(z - std::floor(z));
      },
      {0, 1, 0, 1}, true, 0.05, 0.05);
  for (double a : {cal.r, 0.5 * (cal.r + cal.R), cal.R}) {
    double sep = 0;
    // nearest tabulated point
    double bestd = 1e9;
    for (size_t i = 0; i < cal.phi_profile.a.size(); ++i) {
      double d = std::fabs(cal.phi_profile.a[i] - a);
      if (d < bestd) { bestd = d; sep = cal.phi_profile.v[i]; }
    }
    CHECK(vpp(phi, {0, 1, 0, 1}, a) == doctest::Approx(sep).epsilon(0.02));
  }
}

TEST_CASE("layered field: sup bound, periodicity, stage consistency") {
  BumpyParams bp; bp.alpha = 2; bp.rho = 8; bp.layers = 2; bp.grid = 512;
  BumpyBuild bld = build(bp);
  const BumpyField& f = *bld.psi;
  SplitMix64 g(21);
  for (int i = 0; i < 4000; ++i) {
    double x = g.unit_in(0, 1), z = g.unit_in(0, 1);
    double v = f.eval(x, z);
    CHECK(std::fabs(v) <= f.sup_abs());
    CHECK(v >= 0);  // sum of nonnegative bumps
    CHECK(f.eval(x + 1, z) == doctest::Approx(v).epsilon(1e-12));
    CHECK(f.eval(x, z + 1) == doctest::Approx(v).epsilon(1e-9));
    // stages accumulate: ψ_L = ψ_{L-1} + contribution of the last layer
    CHECK(f.eval_stage(2, x, z) >= f.eval_stage(1, x, z) - 1e-15);
  }
  CHECK(bld.stage(1)->eval(0.5, 0.5) ==
        doctest::Approx(f.eval_stage(1, 0.5, 0.5)).epsilon(1e-12));
}

TEST_CASE("flow coordinate: table and on-the-fly integration agree") {
  // same surface, two resolutions: layer 2 (64 columns) is tabulated at
  // grid 512 and integrated on demand at grid 128
  BumpyParams tb; tb.alpha = 2; tb.rho = 8; tb.layers = 3; tb.grid = 512;
  BumpyParams fl = tb; fl.grid = 128;
  BumpyField ftab(tb, make_bump()), ffly(fl, make_bump());
  REQUIRE(ftab.layer_tabulated(2));
  REQUIRE(!ffly.layer_tabulated(2));
  SplitMix64 g(22);
  double worst_T = 0, worst_psi = 0;
  for (int i = 0; i < 300; ++i) {
    double x = g.unit_in(0, 1), z = g.unit_in(0, 1);
    worst_T = std::max(worst_T, std::fabs(ftab.flow_T(2, x, z) -
                                          ffly.flow_T(2, x, z)));
    worst_psi = std::max(worst_psi, std::fabs(ftab.eval(x, z) -
                                              ffly.eval(x, z)));
  }
  CHECK(worst_T < 1e-7);
  CHECK(worst_psi < 1e-6);
}

TEST_CASE("flow coordinate: z-derivative near 1 and monotone inversion") {
  BumpyParams bp; bp.alpha = 2; bp.rho = 8; bp.layers = 2; bp.grid = 512;
  BumpyBuild bld = build(bp);
  SplitMix64 g(23);
  for (int i = 0; i < 500; ++i) {
    double x = g.unit_in(0, 1), z = g.unit_in(0, 1);
    double d = bld.psi->flow_dTdz(1, x, z);
    CHECK(d > 0.75);
    CHECK(d < 4.0 / 3.0);
  }
  // T_i(x, ·) strictly increasing (sampled)
  for (int i = 0; i < 100; ++i) {
    double x = g.unit_in(0, 1), z = g.unit_in(0, 0.9);
    CHECK(bld.psi->flow_T(1, x, z + 0.01) > bld.psi->flow_T(1, x, z));
  }
}

TEST_CASE("layer amplitudes and cell heights follow the geometric laws") {
  BumpyParams bp; bp.alpha = 3; bp.rho = 9; bp.layers = 2; bp.grid = 256;
  BumpyField f(bp, make_bump());
  CHECK(f.layer_amp(0) == doctest::Approx(make_bump().max_value / 9.0));
  CHECK(f.layer_amp(1) == doctest::Approx(f.layer_amp(0) / 9.0));
  CHECK(f.cell_dz(0) == doctest::Approx(1.0 / 9.0));
  CHECK(f.cell_dz(1) == doctest::Approx(1.0 / 9.0 / 81.0));
  CHECK_THROWS(BumpyField({2, 7, 2, 256}, make_bump()));  // rho < 8
}
