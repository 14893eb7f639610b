#pragma once
// Pseudoquads, the greedy vertical/horizontal subdivision into patchwork
// trees, weights, the weighted Carleson diagnostic, approximating planes,
// and the patchwork-to-vpP bound check.
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hvp/field.hpp"
#include "hvp/nonmono.hpp"

namespace hvp {

// Region bounded by two vertical lines x = a, x = b and two characteristic
// curves g1 < g2, with a parabolic model h ± d (h quadratic, gap constant).
struct Pseudoquad {
  double a = 0, b = 0;   // base interval I
  double xc = 0;         // (a+b)/2; model is centered here
  CharCurve g1, g2;      // traced over 4I
  double hc[3] = {0, 0, 0};  // h(t) = hc0 + hc1·u + hc2·u², u = t − xc
  double d = 0;          // half-gap: h1 = h − d, h2 = h + d

  double delta_x = 0, delta_z = 0;  // b − a, 2d
  double aspect = 0;                // δx/√δz
  double area = 0;                  // ∫_I (g2 − g1)
  double rectilinearity = 0;        // sup_{4I} max(|g1−h1|,|g2−h2|)/δz

  double h(double t) const {
    double u = t - xc;
    return hc[0] + hc[1] * u + hc[2] * u * u;
  }
  double mid(double t) const { return 0.5 * (g1.eval(t) + g2.eval(t)); }
  bool contains(double x, double z) const {
    return x >= a && x <= b && z >= g1.eval(x) && z <= g2.eval(x);
  }
  // concentric rQ: x in rI, z within r·d of the mid-curve (r ≤ 4 so the
  // traced curves cover it)
  RegionV0 region(double r = 1) const;
};

// Curves are flowed through (center, seed) over 4I; h is a least-squares
// quadratic to the mid-curve on I; d is the mean half-gap unless forced
// (horizontal cuts force d = parent d/2 so sibling heights match exactly).
Pseudoquad make_pseudoquad(const ScalarField& f, double a, double b,
                           double lower_seed, double upper_seed,
                           double forced_d = -1);

// Ω^P_{Γ⁺, R·δx(Q)}(rQ)/|Q| ≤ η/α(Q)⁴ ? Returns the verdict and the
// measured density (with its stderr scaled the same way).
struct ParamonoResult {
  bool paramonotone = false;
  double density = 0;
  double density_stderr = 0;
};
ParamonoResult is_paramonotone(const ScalarField& f, const Pseudoquad& Q,
                               double eta, double R, double r,
                               long long nsamples = 256, uint64_t seed = 11);

struct PatchNode {
  Pseudoquad Q;
  int parent = -1;
  int child[2] = {-1, -1};
  char cut = 'l';  // 'v' vertical, 'h' horizontal, 'l' leaf
  int depth = 0;
  double density = 0;         // measured Ω^P density (per |Q|)
  double weight = 0;          // |Q|/α(Q)⁴
  // σ-approximating plane (filled by annotate_planes)
  double plane_a = 0, plane_b = 0, plane_residual = -1;
};

struct PatchworkTree {
  std::vector<PatchNode> nodes;  // nodes[0] is the root
  double eta = 0, R = 0, r = 0;
  uint64_t seed = 0;
  std::string json() const;
};

// Greedy: paramonotone nodes are cut horizontally through the midpoint of
// the two boundary midpoints on the center vertical line, others vertically
// at x = (a+b)/2; stops at max_depth or δx < min_width.
PatchworkTree subdivide(const ScalarField& f, const Pseudoquad& root,
                        double eta, double R, double r, int max_depth,
                        double min_width, long long node_samples = 256,
                        uint64_t seed = 11);

// Σ |Q_w|/α(Q_w)⁴ over nodes selected by the predicate.
double weight(const PatchworkTree& tree,
              const std::function<bool(const PatchNode&)>& select);

// max over v of W(D(v) ∩ V_V)/|Q_v|, D(v) = v and its descendants,
// V_V = vertically cut nodes.
double carleson_ratio(const PatchworkTree& tree);

// Least-squares affine F(w) = a + b·x(w) on the model region 10Q; the
// σ-residual is ‖F−ψ‖_{L1(10Q)}·δx(Q)/(|Q|·δz(Q)).
struct PlaneFit {
  double a = 0, b = 0;
  double residual = 0;
};
PlaneFit approx_plane(const ScalarField& f, const Pseudoquad& Q);

// Fills plane_a/plane_b/plane_residual on every node.
void annotate_planes(const ScalarField& f, PatchworkTree& tree);

// ‖vpP_{Q,f}‖_{L4([t0, t0+span])} / (σ̂·|Q|^{3/4}·W(V(Δ))^{1/4}) with
// t0 = −log₄ δz(root), span covering the tree's δz range, σ̂ the max plane
// residual over horizontally cut nodes.
double vper_bound_check(const PatchworkTree& tree, const ScalarField& f);

}  // namespace hvp
