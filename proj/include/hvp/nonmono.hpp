#pragma once
// Interval decompositions of line traces, the ω̂ endpoint measures, the
// parametric line measure N_P, and the Monte-Carlo nonmonotonicity Ω^P.
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hvp/field.hpp"

namespace hvp {

// A subset of the line: optional rays at either end plus sorted disjoint
// closed intervals of positive length. Sub-floor intervals (< eps_min) are
// merged during construction — interpolation ripple near a tangency would
// otherwise inject spurious endpoint mass.
struct IntervalSet {
  struct Iv {
    double a, b;
  };
  std::vector<Iv> iv;    // sorted, disjoint, b − a > eps_min
  bool ray_lo = false;   // (−∞, ray_lo_end] ⊂ S
  bool ray_hi = false;   // [ray_hi_start, +∞) ⊂ S
  double ray_lo_end = 0, ray_hi_start = 0;

  static constexpr double eps_min = 2e-10;  // 2× the root tolerance

  // Build from alternating boundary points: S is the union of the pieces of
  // ℝ∖{cuts} selected by `first_in` (membership left of the first cut).
  // Short pieces are merged into their neighbours.
  static IntervalSet from_cuts(std::vector<double> cuts, bool first_in);
  static IntervalSet whole_line();
  static IntervalSet single(double a, double b);

  bool contains(double t) const;
  double total_length() const;  // +∞ when a ray is present
  bool empty() const { return iv.empty() && !ray_lo && !ray_hi; }
};

struct OmegaEstimate {
  double value = 0;    // Ω^P estimate (≥ 0)
  double stderrv = 0;  // Monte-Carlo standard error of `value`
  long long nsamples = 0;
  // sampling box over line parameters (m, y0, z0)
  double m_max = 0, y0_lo = 0, y0_hi = 0, z0_lo = 0, z0_hi = 0;
  uint64_t seed = 0;
  std::string json() const;
};

// Region of the vertical plane V0: bounding box + membership predicate.
struct RegionV0 {
  Rect bbox;
  std::function<bool(double, double)> contains;  // (x, z); null ⇒ whole box
  double area = 0;
  static RegionV0 rect(Rect r);
  bool inside(double x, double z) const {
    return x >= bbox.x0 && x <= bbox.x1 && z >= bbox.z0 && z <= bbox.z1 &&
           (!contains || contains(x, z));
  }
};

// Explicit (m, y0, z0) sampling box; omega_p derives one from the field and
// region when not supplied (the scaling tests pair runs via matched boxes).
struct OmegaBox {
  double m_max = 0;
  double y0_lo = 0, y0_hi = 0;
  double z0_lo = 0, z0_hi = 0;
  double volume() const {
    return 2 * m_max * (y0_hi - y0_lo) * (z0_hi - z0_lo);
  }
};

// {t ∈ t_span : y(ρ_L(t)) > ψ(Π(ρ_L(t)))}: sign-change scan of
// h(t) = (y0 + m·t) − ψ(t, g_L(t)) at spacing dx_hint/2 plus bisection to
// 1e−10. Stretches where |y0 + m·t| > sup|ψ| are resolved without scanning.
// Pieces touching the span ends are reported as rays (extent unknown).
IntervalSet line_trace(const ScalarField& f, const HorizontalLine& L,
                       double t0, double t1);

// ω̂_{S,R}(window) = ½[ω_{S,R} + ω_{ℝ∖S,R}](window): each endpoint of each
// bounded interval (of S or its complement) of length ≤ R carries that
// length; rays carry nothing; only endpoints inside `window` are counted.
double omega_hat(const IntervalSet& S, double R, const IntervalSet& window);

// Monte-Carlo (1/R)∫ ω̂^P_{E,R}(U, L) dN_P(L) over the epigraph E = Γ_ψ⁺,
// N_P = Lebesgue(dm × dy0 × dz0) on the box. Stratified over (m, y0) with
// z0 uniform per stratum; deterministic per seed, thread-count independent.
OmegaEstimate omega_p(const ScalarField& f, const RegionV0& U, double R,
                      long long nsamples, uint64_t seed,
                      const OmegaBox* box = nullptr);

// Default box: |m| ≤ m_max (2λ̂/√(1−λ̂²) from lipschitz_estimate), y0 within
// the ψ-range padded by m_max × reach, z0 in the g_L-feasible band for U.
OmegaBox default_box(const ScalarField& f, const RegionV0& U, double R);

}  // namespace hvp
