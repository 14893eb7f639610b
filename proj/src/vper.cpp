#include "hvp/vper.hpp"

#include <cmath>
#include <stdexcept>

#include "hvp/util.hpp"

namespace hvp {

namespace {

struct VppPlan {
  bool lattice;
  int nx, nz;
  bool bicubic;
};

VppPlan plan_for(const ScalarField& f, Rect E, double delta,
                 const QuadSpec& q) {
  VppPlan p{false, q.nx, q.nz, false};
  const GridField* g = dynamic_cast<const GridField*>(&f);
  if (q.kind == QuadSpec::Kind::Lattice) {
    p.lattice = true;
    return p;
  }
  if (g) {
    if (p.nx <= 0) p.nx = g->nx();
    if (p.nz <= 0) p.nz = g->nz();
    // Sub-cell vertical shift: bilinear differences are O(spacing) noise.
    if (g->interp() == Interp::Bilinear && delta < 2 * g->dz_hint())
      p.bicubic = true;
    return p;
  }
  double w = E.x1 - E.x0, h = E.z1 - E.z0;
  double cx = w / f.dx_hint(), cz = h / f.dz_hint();
  if (q.kind == QuadSpec::Kind::GridMidpoint ||
      (p.nx > 0 && p.nz > 0) ||
      (cx * cz > 0 && cx * cz < 4e6)) {
    if (p.nx <= 0) p.nx = std::max(8, int(std::lround(cx)));
    if (p.nz <= 0) p.nz = std::max(8, int(std::lround(cz)));
    return p;
  }
  p.lattice = true;
  return p;
}

void check_domain(const ScalarField& f, Rect E, double delta) {
  if (f.periodic()) return;
  Rect w = f.window();
  if (E.x0 < w.x0 - 1e-12 || E.x1 > w.x1 + 1e-12 || E.z1 > w.z1 + 1e-12 ||
      E.z0 - delta < w.z0 - 1e-12)
    throw std::domain_error("vpp: region (or its Z-shift) outside domain");
}

}  // namespace

double vpp(const ScalarField& f, Rect E, double a, const QuadSpec& q) {
  double delta = std::pow(2.0, -2.0 * a);
  check_domain(f, E, delta);
  VppPlan pl = plan_for(f, E, delta, q);
  const GridField* g = dynamic_cast<const GridField*>(&f);
  auto value = [&](double x, double z) {
    if (g && pl.bicubic)
      return std::fabs(g->eval_as(Interp::Bicubic, x, z) -
                       g->eval_as(Interp::Bicubic, x, z - delta));
    return std::fabs(f.eval(x, z) - f.eval(x, z - delta));
  };
  double acc = 0;
  if (pl.lattice) {
    Lattice2D lat(q.npts, q.seed);
    double x, z;
    for (long long i = 0; i < lat.n; ++i) {
      lat.point(i, x, z);
      acc += value(E.x0 + (E.x1 - E.x0) * x, E.z0 + (E.z1 - E.z0) * z);
    }
    acc /= double(lat.n);
    acc *= E.area();
  } else {
    double hx = (E.x1 - E.x0) / pl.nx, hz = (E.z1 - E.z0) / pl.nz;
    for (int iz = 0; iz < pl.nz; ++iz)
      for (int ix = 0; ix < pl.nx; ++ix)
        acc += value(E.x0 + (ix + 0.5) * hx, E.z0 + (iz + 0.5) * hz);
    acc *= hx * hz;
  }
  return std::pow(2.0, a) * acc;
}

ScaleProfile profile(const ScalarField& f, Rect E, double a_min, double a_max,
                     int steps, const QuadSpec& q) {
  if (steps < 2) throw std::invalid_argument("profile: need ≥ 2 steps");
  ScaleProfile p;
  p.region = E;
  p.a.resize(steps);
  p.v.resize(steps);
  for (int i = 0; i < steps; ++i) {
    p.a[i] = a_min + (a_max - a_min) * i / (steps - 1);
    p.v[i] = vpp(f, E, p.a[i], q);
    double delta = std::pow(2.0, -2.0 * p.a[i]);
    VppPlan pl = plan_for(f, E, delta, q);
    if (pl.bicubic) p.bicubic_used = true;
    p.quad = pl.lattice ? "lattice" : "midpoint";
  }
  return p;
}

double lq_norm(const ScaleProfile& p, double q, double w0, double w1) {
  if (!(q > 0)) throw std::invalid_argument("lq_norm: q must be > 0");
  if (p.a.size() < 2 || w1 <= w0 || w1 < p.a.front() || w0 > p.a.back())
    throw std::invalid_argument("lq_norm: empty window");
  auto at = [&](double a) {
    // linear interp inside the tabulated grid
    if (a <= p.a.front()) return p.v.front();
    if (a >= p.a.back()) return p.v.back();
    size_t i = size_t((a - p.a.front()) / (p.a[1] - p.a[0]));
    i = std::min(i, p.a.size() - 2);
    double f = (a - p.a[i]) / (p.a[i + 1] - p.a[i]);
    return p.v[i] * (1 - f) + p.v[i + 1] * f;
  };
  double lo = std::max(w0, p.a.front()), hi = std::min(w1, p.a.back());
  double acc = 0;
  size_t i0 = 0;
  std::vector<double> xs;
  xs.push_back(lo);
  for (size_t i = 0; i < p.a.size(); ++i)
    if (p.a[i] > lo && p.a[i] < hi) xs.push_back(p.a[i]);
  xs.push_back(hi);
  (void)i0;
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    acc += 0.5 * (std::pow(at(xs[i]), q) + std::pow(at(xs[i + 1]), q)) *
           (xs[i + 1] - xs[i]);
  return std::pow(acc, 1.0 / q);
}

double vpp_envelope(double a, double sup_psi, double sup_dz, double areaE) {
  return std::min(std::pow(2.0, a + 1) * sup_psi, std::pow(2.0, -a) * sup_dz) *
         areaE;
}

double scaling_check(const ScalarField& f, Rect E,
                     const std::vector<double>& a_grid, const Automorphism& A,
                     const QuadSpec& q) {
  double max_dev = 0;
  if (auto* s = std::get_if<Stretch>(&A)) {
    double a = s->a, b = s->b;
    double ab = std::fabs(a * b);
    // ψ̂(x,z) = b·ψ(x/a, z/(ab)), Ê = s_{a,b}(E)
    Rect w = f.window();
    Rect hw{std::min(a * w.x0, a * w.x1), std::max(a * w.x0, a * w.x1),
            std::min(a * b * w.z0, a * b * w.z1),
            std::max(a * b * w.z0, a * b * w.z1)};
    FunctionField hat(
        [&f, a, b](double x, double z) {
          return b * f.eval(x / a, z / (a * b));
        },
        hw, f.periodic(), std::fabs(a) * f.dx_hint(), ab * f.dz_hint());
    Rect Eh{std::min(a * E.x0, a * E.x1), std::max(a * E.x0, a * E.x1),
            std::min(a * b * E.z0, a * b * E.z1),
            std::max(a * b * E.z0, a * b * E.z1)};
    double shift = std::log2(std::sqrt(ab));
    for (double t : a_grid) {
      double lhs = vpp(hat, Eh, t, q);
      double rhs = std::pow(ab, 1.5) * vpp(f, E, t + shift, q);
      if (rhs != 0) max_dev = std::max(max_dev, std::fabs(lhs / rhs - 1));
      else max_dev = std::max(max_dev, std::fabs(lhs));
    }
    return max_dev;
  }
  if (auto* s = std::get_if<Shear>(&A)) {
    double b = s->b;
    // ψ̂(x,w) = ψ(x, w + bx²/2) + bx; the z-columns shift but the vertical
    // difference and the area element are untouched, so vpP is invariant.
    Rect w = f.window();
    // column offsets only matter over the x-range vpp will touch (E)
    double off0 = 0.5 * b * std::min(E.x0 * E.x0, E.x1 * E.x1);
    double off1 = 0.5 * b * std::max(E.x0 * E.x0, E.x1 * E.x1);
    if (E.x0 < 0 && E.x1 > 0) off0 = std::min(off0, 0.0);
    if (off1 < off0) std::swap(off0, off1);
    Rect hw{w.x0, w.x1, w.z0 - off0, w.z1 - off1};
    FunctionField hat(
        [&f, b](double x, double ww) {
          return f.eval(x, ww + 0.5 * b * x * x) + b * x;
        },
        hw, f.periodic(), f.dx_hint(), f.dz_hint());
    // reference side: the same column substitution without the +bx term —
    // vpP over the sheared image of E by change of variables, so the law
    // vpP′ = vpP is probed at paired quadrature points
    FunctionField ref(
        [&f, b](double x, double ww) {
          return f.eval(x, ww + 0.5 * b * x * x);
        },
        hw, f.periodic(), f.dx_hint(), f.dz_hint());
    for (double t : a_grid) {
      double lhs = vpp(hat, E, t, q);
      double rhs = vpp(ref, E, t, q);
      if (rhs != 0) max_dev = std::max(max_dev, std::fabs(lhs / rhs - 1));
      else max_dev = std::max(max_dev, std::fabs(lhs));
    }
    return max_dev;
  }
  throw std::invalid_argument("scaling_check: stretch or shear only");
}

}  // namespace hvp
