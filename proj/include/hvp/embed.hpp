#pragma once
// Cut-metric construction over the periodized bumpy surface: λ_p cut
// indicators, the semimetrics ℓ, M, Λ, Δ, and the word-ball comparison
// harness.
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hvp/field.hpp"

namespace hvp {

struct CutMetricConfig {
  long long k = 1 << 16;  // scale budget (> 1)
  int alpha = 0;          // 0 ⇒ auto: unique integer in [log_ρ(k/8)^{1/4}, +1)
  long long rho = 8;
  std::shared_ptr<const ScalarField> psi;  // periodic surface
  double a_lo = 0, a_hi = 0;  // Λ window [r − log₂ρ, R + log₂ρ]
  int theta_n = 32;           // rotation trapezoid nodes
  int a_n = 64;               // scale trapezoid nodes
  long long ell_nodes = 32;   // fundamental-domain points per (θ,a) node
  double y_reach = 24;        // covers ‖(x,y)‖ of every argument handled
  uint64_t seed = 77;

  // fills alpha (auto), the window from the vpP window constants (r, R)
  // of the single-layer prototype and the layer count (windows sit at
  // log₂(αρⁿ) + [r, R]; the ±log₂ρ expansion glues them), validates psi
  static CutMetricConfig standard(std::shared_ptr<const ScalarField> psi,
                                  double r, double R, long long rho,
                                  long long k = 1 << 16, int layers = 1);
};

// |1_{p⁻¹Γ⁺}(h1) − 1_{p⁻¹Γ⁺}(h2)|: membership via y(p·h) > ψ(Π(p·h)).
int lambda_cut(const Pt& p, const Pt& h1, const Pt& h2, const ScalarField& f);

// MC ∫_P λ_p(h1,h2) dp over the fundamental domain p = X^x Z^c Y^b,
// (x,c) ∈ [0,1)², b over the exact support band (stratified). Deterministic
// per seed.
double ell(const Pt& h1, const Pt& h2, const ScalarField& f, long long budget,
           uint64_t seed);

// Δ(h1,h2) = kα·Λ(s_{1/(kα)}h1, s_{1/(kα)}h2) + ‖π(h1) − π(h2)‖ with
// Λ = ∫ 2ᵃ·M(s_{2^{−a}}·) da (trapezoid) and M the rotation average of ℓ.
// Every (θ,a) node owns a fixed fundamental-domain sample set shared by all
// argument pairs, so Δ is a deterministic function and the triangle
// inequality survives the sampling exactly (λ_p obeys it pointwise).
double big_delta(const Pt& h1, const Pt& h2, const CutMetricConfig& cfg);

// Δ(𝟎, Z^c) through the identity Δ = kα·2^{−t}·∫_window vpP_{U,ψ}(t+a) da
// with t = log₂(kα) − log₄c: on the center, ℓ is rotation-invariant and
// reduces to the vertical perimeter, so the cut integral collapses to a
// deterministic quadrature of vpP (the MC path cannot resolve the tiny
// center cut probabilities). `CenterProfile` caches vpP on an s-grid wide
// enough for every t in the requested c-range.
struct CenterProfile {
  std::vector<double> s, v;  // vpP samples, uniform grid
  double integral(double lo, double hi) const;  // clipped trapezoid
};
CenterProfile center_profile(const CutMetricConfig& cfg, double c_lo,
                             double c_hi, int ns = 360,
                             long long quad_pts = 1 << 14);
double big_delta_center(double c, const CutMetricConfig& cfg,
                        const CenterProfile& pr);

struct DistortionRow {
  Pt g, h;
  double delta = 0, formula = 0, ratio = 0;
};

struct DistortionReport {
  int n = 0;
  long long npairs = 0;
  double min_ratio = 0, max_ratio = 0;
  uint64_t seed = 0;
  std::vector<DistortionRow> rows;
  std::string csv() const;
  std::string json_summary() const;
};

// Word-ball B_n comparison: Δ(g,h) against the closed-form side
// |x−χ| + |y−υ| + √|2z−2ζ−xυ+yχ|/α on all pairs (or max_pairs sampled).
DistortionReport distortion_harness(int n, const CutMetricConfig& cfg,
                                    long long max_pairs = 10000);

}  // namespace hvp
