#pragma once
// Exact Heisenberg group arithmetic, automorphisms, projections,
// horizontal-line parametrization, metric bounds, discrete word metric.
#include <cmath>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

namespace hvp {

struct Pt {
  double x = 0, y = 0, z = 0;
};

// (x,y,z)(χ,υ,ζ) = (x+χ, y+υ, z+ζ+(xυ−yχ)/2)
inline Pt mul(const Pt& p, const Pt& q) {
  return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - p.y * q.x)};
}
inline Pt inv(const Pt& p) { return {-p.x, -p.y, -p.z}; }

// Π(x,y,z) = (x, 0, z − xy/2): projection to the xz-plane along Y-cosets.
inline Pt project_v0(const Pt& p) { return {p.x, 0.0, p.z - 0.5 * p.x * p.y}; }

inline Pt Xgen(double t) { return {t, 0, 0}; }
inline Pt Ygen(double t) { return {0, t, 0}; }
inline Pt Zgen(double t) { return {0, 0, t}; }

struct Stretch {
  double a, b;
};
struct Shear {
  double b;
};
struct Rotate {
  double theta;
};
struct LeftTranslate {
  Pt g;
};
using Automorphism = std::variant<Stretch, Shear, Rotate, LeftTranslate>;

Pt apply(const Automorphism& f, const Pt& p);
// Π ∘ f restricted to V0 (closed forms: stretch (ax,0,abz), shear
// (x,0,z−bx²/2), left-translation (x+x0, 0, z+z0−x·y0−x0·y0/2)).
Pt induced_v0(const Automorphism& f, const Pt& v);

// Ball-box bounds: lower ≤ d(0,p) ≤ upper with
// upper = |x|+|y|+4√|z|, lower = max(‖(x,y)‖, upper/4).
std::pair<double, double> cc_bounds(const Pt& p);

// Horizontal line L = (0,y0,z0)·⟨X+mY⟩ with ρ_L(t) = (t, y0+mt, z0 − y0·t/2),
// so x(ρ_L(t)) = t, and the projected height is
// g_L(t) = z(Π(ρ_L(t))) = −(m/2)t² − y0·t + z0, with y(ρ_L(t)) = −g_L′(t).
struct HorizontalLine {
  double y0 = 0, z0 = 0, m = 0;
  Pt rho(double t) const { return {t, y0 + m * t, z0 - 0.5 * y0 * t}; }
  double gL(double t) const { return -0.5 * m * t * t - y0 * t + z0; }
  double yAt(double t) const { return y0 + m * t; }
};

// Word metric on the integer lattice H_Z (z stored doubled to stay integral).
struct WordBallEntry {
  int64_t x, y, two_z;
  int dist;
};
// BFS ball of radius n with generators ±X, ±Y; throws std::length_error past
// the element guard.
std::vector<WordBallEntry> word_ball(int n, std::size_t guard = 10'000'000);

}  // namespace hvp
