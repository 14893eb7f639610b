#pragma once
// Sampled intrinsic-graph data ψ on the vertical plane V0: evaluation,
// horizontal derivative, characteristic-curve flow, Lipschitz estimation,
// area energy, and the field file format.
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hvp/heis.hpp"

namespace hvp {

struct Rect {
  double x0 = 0, x1 = 1, z0 = 0, z1 = 1;
  double area() const { return (x1 - x0) * (z1 - z0); }
};

enum class Interp { Bilinear, Bicubic };

// Abstract scalar field ψ(x,z). Everything downstream (vper, nonmono, corona,
// embed) works against this interface; GridField is the file-backed
// realization, layered bumpy surfaces provide their own.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double eval(double x, double z) const = 0;
  virtual bool periodic() const { return false; }
  virtual Rect window() const = 0;
  // Feature scales used to pick finite-difference steps and scan densities.
  virtual double dx_hint() const = 0;
  virtual double dz_hint() const = 0;
  // Guaranteed bound on sup|ψ| (+∞ when unknown). Line tracing uses it to
  // skip stretches where a line's y-value puts it on a known side of Γ.
  virtual double sup_abs() const { return INFINITY; }
  // ∂ψ/∂z by central difference; overridden where a closed form exists.
  virtual double dpsi_dz(double x, double z) const;
  double dpsi_dx(double x, double z) const;
  // ∂_ψψ = ∂ψ/∂x − ψ·∂ψ/∂z
  double horiz_deriv(double x, double z) const;
};

class GridField : public ScalarField {
 public:
  GridField(int nx, int nz, Rect win, bool periodic, Interp interp,
            std::vector<double> samples);
  static GridField sampled(int nx, int nz, Rect win, bool periodic,
                           Interp interp,
                           const std::function<double(double, double)>& f);

  double eval(double x, double z) const override;
  bool periodic() const override { return periodic_; }
  Rect window() const override { return win_; }
  double dx_hint() const override { return dx_; }
  double dz_hint() const override { return dz_; }
  // bilinear stays within node range; bicubic can overshoot, margin 2×
  double sup_abs() const override {
    return interp_ == Interp::Bilinear ? max_abs_node_ : 2 * max_abs_node_;
  }

  int nx() const { return nx_; }
  int nz() const { return nz_; }
  Interp interp() const { return interp_; }
  void set_interp(Interp i) { interp_ = i; }
  // Evaluate with an explicit interpolation rule (vper switches to bicubic
  // for sub-cell vertical shifts without copying the samples).
  double eval_as(Interp ip, double x, double z) const;
  const std::vector<double>& samples() const { return s_; }
  double node(int ix, int iz) const { return s_[size_t(iz) * nx_ + ix]; }

  // Field file: one JSON header line, then raw little-endian f64 row-major.
  void save(const std::string& path) const;
  static GridField load(const std::string& path);

 private:
  int nx_, nz_;
  Rect win_;
  bool periodic_;
  Interp interp_;
  std::vector<double> s_;
  double dx_, dz_;
  double max_abs_node_ = 0;
  double interp1(const double* row0, double fx, int ix) const;
};

// Closed-form field for tests and transformed views.
class FunctionField : public ScalarField {
 public:
  FunctionField(std::function<double(double, double)> f, Rect win,
                bool periodic, double dxh, double dzh,
                std::function<double(double, double)> dz = nullptr)
      : f_(std::move(f)), win_(win), per_(periodic), dxh_(dxh), dzh_(dzh),
        dz_(std::move(dz)) {}
  double eval(double x, double z) const override { return f_(x, z); }
  bool periodic() const override { return per_; }
  Rect window() const override { return win_; }
  double dx_hint() const override { return dxh_; }
  double dz_hint() const override { return dzh_; }
  double dpsi_dz(double x, double z) const override {
    return dz_ ? dz_(x, z) : ScalarField::dpsi_dz(x, z);
  }
  double sup_abs() const override { return sup_abs_; }
  void set_sup_abs(double s) { sup_abs_ = s; }

 private:
  std::function<double(double, double)> f_;
  Rect win_;
  bool per_;
  double dxh_, dzh_;
  std::function<double(double, double)> dz_;
  double sup_abs_ = INFINITY;
};

// Characteristic curve: graph of g with g′(t) = −ψ(t, 0, g(t)).
struct CharCurve {
  std::vector<double> xs;   // strictly increasing, uniform
  std::vector<double> gs;   // curve heights
  std::vector<double> dgs;  // g′ samples = −ψ(t, g(t))
  double eval(double t) const;   // cubic Hermite between nodes
  double deriv(double t) const;
  double x0() const { return xs.front(); }
  double x1() const { return xs.back(); }
};

// RK4 flow of g′(t) = −ψ(t,0,g(t)) over [t0,t1] through (x_start, z_start),
// integrating both directions from the start. step ≤ 0 is an error.
CharCurve flow_char(const ScalarField& f, double x_start, double z_start,
                    double t0, double t1, double step);

// v·Y^{ψ(v)} = (x, ψ(v), z + x·ψ(v)/2)
Pt graph_point(const ScalarField& f, double x, double z);

// Lower estimate of the intrinsic Lipschitz constant λ: max over sampled
// graph-point pairs of |Δy| / cc_upper (an upper bound on d gives a valid
// lower bound on λ). Deterministic per seed.
double lipschitz_estimate(const ScalarField& f, Rect region, long long npairs,
                          uint64_t seed);

// Midpoint-rule ∫√(1+(∂_ψψ)²) over the region (area-formula constant c = 1;
// downstream checks only ever use ratios).
double area_energy(const ScalarField& f, Rect region, int nx = 0, int nz = 0);

}  // namespace hvp
