#pragma once
// Recursive maximally-bumpy surface ψ_L = Σ β_i: prototype bump, calibration
// of the vpP window constants (η, r, R) and the scale ratio ρ, flow-aligned
// layer gluing, and numeric verification of the internal bounds.
#include <memory>
#include <vector>

#include "hvp/field.hpp"
#include "hvp/vper.hpp"

namespace hvp {

// β(x,z) = c·b(x)·b(z), b(u) = exp(−1/(u(1−u))) on (0,1), zero elsewhere.
// c is pinned once so the largest order-≤2 partial derivative on a 2048²
// grid equals 0.99 (all partials then lie in [−1,1]).
struct BumpPrototype {
  double c = 0;
  double max_value = 0;  // sup β = c·b(½)²

  static double b(double u);
  static double db(double u);
  static double d2b(double u);
  double beta(double x, double z) const { return c * b(x) * b(z); }
  double beta_dx(double x, double z) const { return c * db(x) * b(z); }
  double beta_dz(double x, double z) const { return c * b(x) * db(z); }
  // largest |∂^{(i,j)}β| over an n² grid, i+j ≤ 2 (normalization oracle)
  double max_partial(int n) const;
};

BumpPrototype make_bump();

struct Calibration {
  double eta = 0;   // vpP_{U,φ} ≥ η on [r,R]
  double r = 0, R = 0;
  double s = 0;     // max(|r|,|R|)
  long long rho = 0;  // ⌈max{8, 12/(2^r·η), 40·2^s/η}⌉
  ScaleProfile phi_profile;  // tabulated vpP of the periodic extension φ
};

// Tabulates vpP_{U,φ} on a dense a-grid (the product form of β makes the
// spatial integral separable; cross-checked in tests against 2D midpoint),
// picks the window maximizing η·min(1, R−r), then applies the ceiling
// formula. a-grid spacing is 1/steps_per_unit.
Calibration calibrate(const BumpPrototype& proto, int steps_per_unit = 64,
                      int quad_n = 4096);

struct BumpyParams {
  int alpha = 2;
  long long rho = 8;   // desk default; pass Calibration.rho for paper scale
  int layers = 3;      // capped at α⁴
  int grid = 2048;     // user-facing resolution (snapshots, table floor)
};

// ψ as a layered semi-analytic field: each layer contribution is the closed
// -form β composed with the layer's flow coordinate T_i(x,z) (the z-value of
// the ψ_i characteristic through (x,z) at its cell column's left edge).
// T_i is tabulated per column when ρ^i ≤ grid/4, else integrated on demand
// (the flow distance is ≤ ρ^{-i}, so this is both cheap and accurate).
class BumpyField : public ScalarField {
 public:
  BumpyField(const BumpyParams& p, const BumpPrototype& proto);

  double eval(double x, double z) const override;
  double eval_stage(int stage, double x, double z) const;  // ψ_stage
  bool periodic() const override { return true; }
  Rect window() const override { return {0, 1, 0, 1}; }
  double dx_hint() const override { return dxh_; }
  double dz_hint() const override { return dzh_; }
  // Σ_i α⁻²ρ⁻ⁱ·supβ < supβ·α⁻²·ρ/(ρ−1)
  double sup_abs() const override {
    return proto_.max_value / double(p_.alpha * p_.alpha) * double(p_.rho) /
           (double(p_.rho) - 1);
  }

  const BumpyParams& params() const { return p_; }
  const BumpPrototype& proto() const { return proto_; }
  // flow coordinate of layer i at (x,z); T_0 ≡ z
  double flow_T(int layer, double x, double z) const;
  // ∂T_i/∂z by finite difference at the layer's natural scale
  double flow_dTdz(int layer, double x, double z) const;
  double layer_amp(int i) const;     // α⁻²ρ⁻ⁱ·max β
  double cell_dz(int i) const;       // α⁻²ρ⁻²ⁱ
  bool layer_tabulated(int i) const;

 private:
  friend struct BumpyBuilder;
  struct Table {
    // per-column flow coordinates: value T − z on nodes
    // (column m, local x index 0..px, z index 0..nz−1, z periodic)
    int cols = 0, px = 0, nz = 0;
    std::vector<float> d;  // offsets T−z are tiny and smooth: float is ample
    double at(int m, int ix, int iz) const {
      return d[(size_t(m) * (px + 1) + ix) * nz + iz];
    }
  };
  double layer_contrib(int i, double x, double z) const;
  double fly_T(int layer, double x, double z) const;
  void build_table(int layer);

  BumpyParams p_;
  BumpPrototype proto_;
  std::vector<Table> tables_;  // index = layer (empty table if on-the-fly)
  double dxh_, dzh_;
};

// ψ_i view (i fixed) for derivative/energy machinery.
class BumpyStage : public ScalarField {
 public:
  BumpyStage(std::shared_ptr<const BumpyField> f, int stage);
  double eval(double x, double z) const override;
  bool periodic() const override { return true; }
  Rect window() const override { return {0, 1, 0, 1}; }
  double dx_hint() const override { return dxh_; }
  double dz_hint() const override { return dzh_; }
  double sup_abs() const override { return f_->sup_abs(); }
  int stage() const { return stage_; }

 private:
  std::shared_ptr<const BumpyField> f_;
  int stage_;
  double dxh_, dzh_;
};

struct BumpyBuild {
  BumpyParams params;
  std::shared_ptr<const BumpyField> psi;  // ψ_L
  std::shared_ptr<const BumpyStage> stage(int i) const;  // ψ_i, 0 ≤ i ≤ L
};

// Builds the layer tables bottom-up. Layer count is capped at α⁴; the flow
// tables auto-refine in z so each resolves the features of its ψ_i
// (the z-spacing guard), independent of the snapshot resolution.
BumpyBuild build(const BumpyParams& params);

struct LayerReport {
  int layer = 0;             // i in 1..L for stage bounds, 0..L−1 for D_i
  double sup_dpsi_dz = 0;    // vs 2ρ^{i−1}
  double dtdz_min = 1, dtdz_max = 1;  // ∂T/∂z ∈ (3/4, 4/3) ⇔ ∂z/∂t bound
  double sup_D = 0;          // ‖D_i‖∞ vs 3α⁻²
  double l2_horiz = 0;       // ‖∂_{ψ_i}ψ_i‖_{L2(U)}
};

struct InternalReport {
  std::vector<LayerReport> layers;       // indexed by stage i = 1..L
  std::vector<std::vector<double>> gram; // |⟨D_m,D_n⟩_U|
  double sup_psi = 0;       // vs α⁻²/(ρ−1)
  double c_ortho = 0;       // max |⟨D_m,D_n⟩|·α⁴·ρ^{n−m}
  double c_prime = 0;       // max ‖∂_{ψ_i}ψ_i‖_L2 / (√i·α⁻²)
};

// Report-only numeric check of the internal bounds; assertions live in the
// acceptance suite.
InternalReport verify_internal(const BumpyBuild& bld, long long budget = 200000,
                               uint64_t seed = 7);

}  // namespace hvp
