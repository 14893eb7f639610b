#include <cmath>

#include "doctest.h"
#include "hvp/corona.hpp"
#include "hvp/util.hpp"

using namespace hvp;

namespace {
FunctionField flat(double c) {
  FunctionField f([=](double, double) { return c; }, {-40, 40, -40, 40},
                  false, 0.1, 0.1);
  f.set_sup_abs(std::fabs(c) + 1e-12);
  return f;
}
}  // namespace

TEST_CASE("pseudoquad over a constant surface is an exact parallelogram") {
  FunctionField f = flat(0.5);
  Pseudoquad Q = make_pseudoquad(f, -1, 1, 0.0, 2.0);
  // characteristics g′ = −0.5: straight lines; model is exact
  CHECK(Q.rectilinearity < 1e-10);
  CHECK(Q.delta_x == doctest::Approx(2.0));
  CHECK(Q.delta_z == doctest::Approx(2.0));
  CHECK(Q.d == doctest::Approx(1.0));
  CHECK(Q.area == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(Q.aspect == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(Q.h(0.5) == doctest::Approx(1.0 - 0.5 * 0.5).epsilon(1e-10));
  CHECK(Q.contains(0.0, 1.0));
  CHECK(!Q.contains(0.0, 3.5));
  // concentric region stays inside the traced span
  RegionV0 r2 = Q.region(2);
  CHECK(r2.bbox.x0 == doctest::Approx(-2.0));
  CHECK(r2.inside(0.0, 1.0));
}

TEST_CASE("paramonotone verdict on a plane, with forced half-gap") {
  FunctionField f = flat(0.0);
  Pseudoquad Q = make_pseudoquad(f, 0, 1, 0.0, 1.0);
  ParamonoResult pr = is_paramonotone(f, Q, 0.05, 4.0, 2.0, 128, 3);
  CHECK(pr.paramonotone);
  CHECK(pr.density == 0.0);
  Pseudoquad Qf = make_pseudoquad(f, 0, 1, 0.0, 1.0, 0.25);
  CHECK(Qf.d == doctest::Approx(0.25));
  CHECK(Qf.delta_z == doctest::Approx(0.5));
}

TEST_CASE("affine surface: all cuts horizontal, Carleson ratio zero") {
  FunctionField f = flat(0.3);
  Pseudoquad root = make_pseudoquad(f, -0.5, 0.5, -0.5, 0.5);
  PatchworkTree T = subdivide(f, root, 0.05, 4.0, 2.0, 4, 1e-4, 64, 3);
  REQUIRE(T.nodes.size() == 31);  // full binary tree of depth 4
  for (const auto& n : T.nodes) {
    CHECK(n.cut != 'v');
    if (n.cut == 'h') {
      const auto& c0 = T.nodes[n.child[0]].Q;
      const auto& c1 = T.nodes[n.child[1]].Q;
      // sibling half-gaps are exactly half the parent's
      CHECK(c0.d == n.Q.d / 2);
      CHECK(c1.d == n.Q.d / 2);
    }
  }
  CHECK(carleson_ratio(T) == 0.0);
  CHECK(vper_bound_check(T, f) == 0.0);
  // weights: horizontal children tile, so each level carries equal |Q|
  double wl0 = weight(T, [](const PatchNode& n) { return n.depth == 0; });
  double wl3 = weight(T, [](const PatchNode& n) { return n.depth == 3; });
  CHECK(wl0 > 0);
  // aspect doubles per horizontal cut: α⁴ grows 4× per level while total
  // area is preserved ⇒ level weight drops 4×
  CHECK(wl3 == doctest::Approx(wl0 / 64.0).epsilon(1e-6));
}

TEST_CASE("vertical cut on the exact unit square: child weight is 8x") {
  FunctionField f = flat(0.0);
  // unit square as a pseudoquad: aspect 1, α = δx/√δz = 1
  Pseudoquad Q = make_pseudoquad(f, 0, 1, 0.0, 1.0);
  CHECK(Q.aspect == doctest::Approx(1.0));
  double wq = Q.area / std::pow(Q.aspect, 4);
  // vertical child: half the width, same heights ⇒ area/2, aspect/... the
  // half-gap is forced to the parent's, so α_child = (δx/2)/√δz = 1/2 and
  // weight_child = (area/2)/(1/2)⁴ = 8·weight
  Pseudoquad C = make_pseudoquad(f, 0, 0.5, 0.0, 1.0, Q.d);
  double wc = C.area / std::pow(C.aspect, 4);
  CHECK(wc / wq == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("tree invariants: parent/child links, depths, weight identity") {
  FunctionField f([](double x, double z) { return 0.2 * std::sin(2 * x) *
                                                  std::sin(3 * z); },
                  {-40, 40, -40, 40}, false, 0.05, 0.05);
  f.set_sup_abs(0.2);
  Pseudoquad root = make_pseudoquad(f, -0.5, 0.5, -0.4, 0.4);
  PatchworkTree T = subdivide(f, root, 0.01, 2.0, 1.5, 3, 1e-4, 64, 9);
  double total = 0;
  for (size_t i = 0; i < T.nodes.size(); ++i) {
    const auto& n = T.nodes[i];
    if (n.parent >= 0) {
      const auto& p = T.nodes[n.parent];
      CHECK(n.depth == p.depth + 1);
      CHECK((p.child[0] == int(i) || p.child[1] == int(i)));
    }
    CHECK(n.weight ==
          doctest::Approx(n.Q.area / std::pow(n.Q.aspect, 4)).epsilon(1e-12));
    if (n.cut == 'l') total += 1;
  }
  CHECK(weight(T, [](const PatchNode&) { return true; }) ==
        doctest::Approx(weight(T, [](const PatchNode& n) { return n.cut != 'l'; }) +
                        weight(T, [](const PatchNode& n) { return n.cut == 'l'; }))
            .epsilon(1e-12));
  // deterministic: same seed reproduces the tree bitwise
  PatchworkTree T2 = subdivide(f, root, 0.01, 2.0, 1.5, 3, 1e-4, 64, 9);
  REQUIRE(T2.nodes.size() == T.nodes.size());
  for (size_t i = 0; i < T.nodes.size(); ++i) {
    CHECK(T2.nodes[i].cut == T.nodes[i].cut);
    CHECK(T2.nodes[i].density == T.nodes[i].density);
  }
}

TEST_CASE("approximating planes: affine surfaces have zero residual") {
  FunctionField f([](double x, double) { return 0.1 + 0.2 * x; },
                  {-40, 40, -40, 40}, false, 0.1, 0.1);
  f.set_sup_abs(10.0);
  Pseudoquad Q = make_pseudoquad(f, -0.5, 0.5, -0.3, 0.3);
  PlaneFit p = approx_plane(f, Q);
  CHECK(p.a == doctest::Approx(0.1).epsilon(1e-8));
  CHECK(p.b == doctest::Approx(0.2).epsilon(1e-8));
  CHECK(p.residual < 1e-9);
}
