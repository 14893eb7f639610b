#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "hvp/field.hpp"
#include "hvp/util.hpp"

using namespace hvp;

namespace {
Rect kU{0, 1, 0, 1};
FunctionField affine_field(double c0, double c1) {
  // ψ(x,z) = c0 + c1·x (z-independent)
  return FunctionField([=](double x, double) { return c0 + c1 * x; },
                       {-10, 10, -10, 10}, false, 0.1, 0.1);
}
}  // namespace

TEST_CASE("grid field reproduces smooth data; bicubic beats bilinear") {
  auto f = [](double x, double z) {
    return std::sin(3 * x + 1) * std::cos(2 * z);
  };
  GridField bl = GridField::sampled(257, 257, kU, false, Interp::Bilinear, f);
  GridField bc = GridField::sampled(257, 257, kU, false, Interp::Bicubic, f);
  SplitMix64 g(11);
  double e_bl = 0, e_bc = 0;
  for (int i = 0; i < 3000; ++i) {
    double x = g.unit_in(0.05, 0.95), z = g.unit_in(0.05, 0.95);
    e_bl = std::max(e_bl, std::fabs(bl.eval(x, z) - f(x, z)));
    e_bc = std::max(e_bc, std::fabs(bc.eval(x, z) - f(x, z)));
    CHECK(std::fabs(bl.eval(x, z)) <= bl.sup_abs() + 1e-15);
  }
  CHECK(e_bl < 4e-5);
  CHECK(e_bc < 1e-7);
  // nodes are interpolated exactly (bilinear)
  CHECK(bl.eval(0.25, 0.5) == doctest::Approx(f(0.25, 0.5)).epsilon(1e-12));
}

TEST_CASE("periodic grid field wraps") {
  auto f = [](double x, double z) {
    return std::sin(2 * M_PI * x) * std::sin(2 * M_PI * z);
  };
  GridField p = GridField::sampled(128, 128, kU, true, Interp::Bilinear, f);
  SplitMix64 g(12);
  for (int i = 0; i < 500; ++i) {
    double x = g.unit_in(0, 1), z = g.unit_in(0, 1);
    CHECK(p.eval(x, z) == doctest::Approx(p.eval(x + 3, z - 2)).epsilon(1e-12));
  }
}

TEST_CASE("field file roundtrip is bitwise") {
  auto f = [](double x, double z) { return x * x - 0.3 * z + 0.1 * x * z; };
  GridField a = GridField::sampled(33, 17, {-1, 2, 0.5, 3}, false,
                                   Interp::Bicubic, f);
  std::string path = "roundtrip_test.hvpfield";
  a.save(path);
  GridField b = GridField::load(path);
  std::remove(path.c_str());
  REQUIRE(b.nx() == a.nx());
  REQUIRE(b.nz() == a.nz());
  CHECK(b.periodic() == a.periodic());
  CHECK(b.interp() == a.interp());
  CHECK(b.window().x0 == a.window().x0);
  CHECK(b.window().z1 == a.window().z1);
  for (size_t i = 0; i < a.samples().size(); ++i)
    CHECK(a.samples()[i] == b.samples()[i]);
}

TEST_CASE("characteristic flow: closed forms") {
  // ψ = c constant: g(t) = z0 − c·(t − t_s)
  FunctionField fc = affine_field(0.7, 0);
  CharCurve c = flow_char(fc, 0.2, 1.0, -2, 3, 0.01);
  for (double t : {-1.9, 0.0, 0.2, 1.3, 2.9}) {
    CHECK(c.eval(t) == doctest::Approx(1.0 - 0.7 * (t - 0.2)).epsilon(1e-10));
    CHECK(c.deriv(t) == doctest::Approx(-0.7).epsilon(1e-10));
  }
  // ψ = z: g′ = −g ⇒ g(t) = z0·exp(−(t−t_s))
  FunctionField fz([](double, double z) { return z; }, {-10, 10, -10, 10},
                   false, 0.1, 0.1);
  CharCurve e = flow_char(fz, 0.0, 2.0, -1, 2, 0.005);
  for (double t : {-0.9, 0.0, 0.8, 1.9})
    CHECK(e.eval(t) == doctest::Approx(2.0 * std::exp(-t)).epsilon(1e-9));
}

TEST_CASE("characteristic flow: reversibility and RK4 order") {
  FunctionField f([](double x, double z) { return 0.4 * std::sin(3 * x) +
                                                  0.3 * std::cos(2 * z); },
                  {-10, 10, -10, 10}, false, 0.05, 0.05);
  CharCurve fwd = flow_char(f, -1.0, 0.3, -1, 2, 0.01);
  double z_end = fwd.eval(2.0);
  CharCurve back = flow_char(f, 2.0, z_end, -1, 2, 0.01);
  CHECK(back.eval(-1.0) == doctest::Approx(0.3).epsilon(1e-10));

  // Richardson: halving the step should shrink error ~16× (order 4)
  double ref = flow_char(f, -1.0, 0.3, -1, 2, 0.0005).eval(2.0);
  double e1 = std::fabs(flow_char(f, -1.0, 0.3, -1, 2, 0.04).eval(2.0) - ref);
  double e2 = std::fabs(flow_char(f, -1.0, 0.3, -1, 2, 0.02).eval(2.0) - ref);
  CHECK(e1 / e2 > 8.0);
}

TEST_CASE("graph points and derivative operators") {
  FunctionField f([](double x, double z) { return x * z; },
                  {-10, 10, -10, 10}, false, 0.05, 0.05);
  Pt p = graph_point(f, 0.5, 2.0);
  CHECK(p.x == 0.5);
  CHECK(p.y == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p.z == doctest::Approx(2.0 + 0.25 * 1.0).epsilon(1e-13));
  CHECK(project_v0(p).z == doctest::Approx(2.0).epsilon(1e-13));
  // ∂_ψψ = ∂ψ/∂x − ψ·∂ψ/∂z = z − xz·x
  CHECK(f.horiz_deriv(0.5, 2.0) ==
        doctest::Approx(2.0 - 1.0 * 0.5).epsilon(1e-6));
}

TEST_CASE("lipschitz estimate and area energy on flat data") {
  FunctionField flat = affine_field(0.3, 0);
  CHECK(lipschitz_estimate(flat, kU, 2000, 5) == doctest::Approx(0).epsilon(1e-12));
  FunctionField zero = affine_field(0, 0);
  CHECK(area_energy(zero, kU, 64, 64) == doctest::Approx(1.0).epsilon(1e-12));
  // tilted plane ψ = c1·x: ∂_ψψ = c1 everywhere
  FunctionField tilt = affine_field(0, 0.8);
  CHECK(area_energy(tilt, kU, 64, 64) ==
        doctest::Approx(std::sqrt(1 + 0.64)).epsilon(1e-10));
  CHECK(lipschitz_estimate(tilt, kU, 2000, 5) > 0.1);
}
