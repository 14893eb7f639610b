#pragma once
// Parametric vertical perimeter vpP_{E,ψ}(a) = 2ᵃ∫_E |ψ(v)−ψ(vZ^{−2^{−2a}})|dv,
// scale profiles, Lq norms, and the stretch/shear transformation laws.
#include <string>
#include <vector>

#include "hvp/field.hpp"

namespace hvp {

struct QuadSpec {
  enum class Kind { Auto, GridMidpoint, Lattice };
  Kind kind = Kind::Auto;
  long long npts = 1 << 20;  // lattice budget
  int nx = 0, nz = 0;        // midpoint resolution override
  uint64_t seed = 1234;      // lattice shift seed
};

struct ScaleProfile {
  std::vector<double> a;      // increasing scale parameters
  std::vector<double> v;      // vpP at each a (all ≥ 0)
  Rect region;
  std::string quad;           // "midpoint" | "lattice"
  bool bicubic_used = false;  // sub-cell shifts forced bicubic sampling
};

double vpp(const ScalarField& f, Rect E, double a, const QuadSpec& q = {});

ScaleProfile profile(const ScalarField& f, Rect E, double a_min, double a_max,
                     int steps, const QuadSpec& q = {});

// Trapezoid value of (∫_{window} vpP(a)^p da)^{1/p} on the tabulated grid.
double lq_norm(const ScaleProfile& p, double q, double w0, double w1);

// A priori envelope min{2^{a+1}·‖ψ‖∞, 2^{−a}·‖∂ψ/∂z‖∞}·|E| at one scale,
// given the two sup-norms.
double vpp_envelope(double a, double sup_psi, double sup_dz, double areaE);

// Max relative deviation of the measured profile of the transformed
// field/region from the law: stretch s_{a,b} gives
// vpP′(t) = |ab|^{3/2}·vpP(t + log₂√|ab|); shear leaves vpP unchanged.
// Only Stretch and Shear are meaningful here.
double scaling_check(const ScalarField& f, Rect E,
                     const std::vector<double>& a_grid, const Automorphism& A,
                     const QuadSpec& q = {});

}  // namespace hvp
