#include "hvp/field.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hvp/util.hpp"

namespace hvp {

double ScalarField::dpsi_dz(double x, double z) const {
  double h = dz_hint();
  Rect w = window();
  if (!periodic()) {
    if (z + h > w.z1) return (eval(x, z) - eval(x, z - h)) / h;
    if (z - h < w.z0) return (eval(x, z + h) - eval(x, z)) / h;
  }
  return (eval(x, z + h) - eval(x, z - h)) / (2 * h);
}

double ScalarField::dpsi_dx(double x, double z) const {
  double h = dx_hint();
  Rect w = window();
  if (!periodic()) {
    if (x + h > w.x1) return (eval(x, z) - eval(x - h, z)) / h;
    if (x - h < w.x0) return (eval(x + h, z) - eval(x, z)) / h;
  }
  return (eval(x + h, z) - eval(x - h, z)) / (2 * h);
}

double ScalarField::horiz_deriv(double x, double z) const {
  return dpsi_dx(x, z) - eval(x, z) * dpsi_dz(x, z);
}

GridField::GridField(int nx, int nz, Rect win, bool periodic, Interp interp,
                     std::vector<double> samples)
    : nx_(nx), nz_(nz), win_(win), periodic_(periodic), interp_(interp),
      s_(std::move(samples)) {
  if (nx_ < 2 || nz_ < 2) throw std::invalid_argument("grid too small");
  if (s_.size() != size_t(nx_) * nz_)
    throw std::invalid_argument("sample count mismatch");
  dx_ = (win_.x1 - win_.x0) / (periodic_ ? nx_ : nx_ - 1);
  dz_ = (win_.z1 - win_.z0) / (periodic_ ? nz_ : nz_ - 1);
  for (double v : s_) max_abs_node_ = std::max(max_abs_node_, std::fabs(v));
}

GridField GridField::sampled(int nx, int nz, Rect win, bool periodic,
                             Interp interp,
                             const std::function<double(double, double)>& f) {
  std::vector<double> s(size_t(nx) * nz);
  double dx = (win.x1 - win.x0) / (periodic ? nx : nx - 1);
  double dz = (win.z1 - win.z0) / (periodic ? nz : nz - 1);
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix)
      s[size_t(iz) * nx + ix] = f(win.x0 + ix * dx, win.z0 + iz * dz);
  return GridField(nx, nz, win, periodic, interp, std::move(s));
}

namespace {
// 1D stencil: node indices + weights for linear or 4-point Lagrange cubic.
struct Stencil {
  int idx[4];
  double w[4];
  int n;
};

Stencil make_stencil(double coord, double origin, double step, int nnode,
                     bool periodic, Interp interp) {
  Stencil st{};
  double u = (coord - origin) / step;
  if (periodic) {
    double wrapped = u - std::floor(u / nnode) * nnode;
    if (interp == Interp::Bilinear) {
      int i0 = int(std::floor(wrapped));
      double f = wrapped - i0;
      i0 %= nnode;
      st.n = 2;
      st.idx[0] = i0;
      st.idx[1] = (i0 + 1) % nnode;
      st.w[0] = 1 - f;
      st.w[1] = f;
    } else {
      int i0 = int(std::floor(wrapped));
      double f = wrapped - i0;
      st.n = 4;
      for (int k = 0; k < 4; ++k)
        st.idx[k] = ((i0 - 1 + k) % nnode + nnode) % nnode;
      st.w[0] = -f * (f - 1) * (f - 2) / 6;
      st.w[1] = (f + 1) * (f - 1) * (f - 2) / 2;
      st.w[2] = -(f + 1) * f * (f - 2) / 2;
      st.w[3] = (f + 1) * f * (f - 1) / 6;
    }
    return st;
  }
  const double slack = 1e-9 * (nnode - 1);
  if (u < -slack || u > nnode - 1 + slack)
    throw std::domain_error("GridField: evaluation outside window");
  u = std::min(std::max(u, 0.0), double(nnode - 1));
  if (interp == Interp::Bilinear) {
    int i0 = std::min(int(std::floor(u)), nnode - 2);
    double f = u - i0;
    st.n = 2;
    st.idx[0] = i0;
    st.idx[1] = i0 + 1;
    st.w[0] = 1 - f;
    st.w[1] = f;
  } else {
    int base = std::min(std::max(int(std::floor(u)) - 1, 0), nnode - 4);
    double f = u - base;  // in [0,3]; Lagrange on nodes base..base+3
    st.n = 4;
    for (int k = 0; k < 4; ++k) {
      st.idx[k] = base + k;
      double w = 1;
      for (int j = 0; j < 4; ++j)
        if (j != k) w *= (f - j) / (k - j);
      st.w[k] = w;
    }
  }
  return st;
}
}  // namespace

double GridField::eval(double x, double z) const {
  return eval_as(interp_, x, z);
}

double GridField::eval_as(Interp ip, double x, double z) const {
  Stencil sx = make_stencil(x, win_.x0, dx_, nx_, periodic_, ip);
  Stencil sz = make_stencil(z, win_.z0, dz_, nz_, periodic_, ip);
  double acc = 0;
  for (int kz = 0; kz < sz.n; ++kz) {
    const double* row = &s_[size_t(sz.idx[kz]) * nx_];
    double r = 0;
    for (int kx = 0; kx < sx.n; ++kx) r += sx.w[kx] * row[sx.idx[kx]];
    acc += sz.w[kz] * r;
  }
  return acc;
}

void GridField::save(const std::string& path) const {
  nlohmann::json h = {
      {"nx", nx_},       {"nz", nz_},
      {"x0", win_.x0},   {"x1", win_.x1},
      {"z0", win_.z0},   {"z1", win_.z1},
      {"periodic", periodic_},
      {"interp", interp_ == Interp::Bilinear ? "bilinear" : "bicubic"},
      {"dtype", "f64"},  {"byte_order", "LE"}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << h.dump() << "\n";
  out.write(reinterpret_cast<const char*>(s_.data()),
            std::streamsize(s_.size() * sizeof(double)));
}

GridField GridField::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string header;
  std::getline(in, header);
  auto h = nlohmann::json::parse(header);
  int nx = h.at("nx"), nz = h.at("nz");
  Rect w{h.at("x0"), h.at("x1"), h.at("z0"), h.at("z1")};
  bool per = h.at("periodic");
  Interp ip =
      h.at("interp") == "bicubic" ? Interp::Bicubic : Interp::Bilinear;
  std::vector<double> s(size_t(nx) * nz);
  in.read(reinterpret_cast<char*>(s.data()),
          std::streamsize(s.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated field file " + path);
  return GridField(nx, nz, w, per, ip, std::move(s));
}

double CharCurve::eval(double t) const {
  if (xs.size() < 2) return gs.empty() ? 0 : gs.front();
  double h = xs[1] - xs[0];
  // Linear extension beyond the stored span keeps region predicates usable
  // at the very edge of 4I without blowing up.
  if (t <= xs.front()) return gs.front() + dgs.front() * (t - xs.front());
  if (t >= xs.back()) return gs.back() + dgs.back() * (t - xs.back());
  int i = std::min(int((t - xs.front()) / h), int(xs.size()) - 2);
  double f = (t - xs[i]) / h;
  double h00 = (1 + 2 * f) * (1 - f) * (1 - f), h10 = f * (1 - f) * (1 - f);
  double h01 = f * f * (3 - 2 * f), h11 = f * f * (f - 1);
  return h00 * gs[i] + h10 * h * dgs[i] + h01 * gs[i + 1] +
         h11 * h * dgs[i + 1];
}

double CharCurve::deriv(double t) const {
  if (xs.size() < 2) return dgs.empty() ? 0 : dgs.front();
  double h = xs[1] - xs[0];
  if (t <= xs.front()) return dgs.front();
  if (t >= xs.back()) return dgs.back();
  int i = std::min(int((t - xs.front()) / h), int(xs.size()) - 2);
  double f = (t - xs[i]) / h;
  double d00 = (6 * f * f - 6 * f) / h, d10 = 3 * f * f - 4 * f + 1;
  double d01 = (6 * f - 6 * f * f) / h, d11 = 3 * f * f - 2 * f;
  return d00 * gs[i] + d10 * dgs[i] + d01 * gs[i + 1] + d11 * dgs[i + 1];
}

namespace {
inline double rk4_step(const ScalarField& f, double t, double g, double h) {
  auto F = [&](double tt, double gg) { return -f.eval(tt, gg); };
  double k1 = F(t, g);
  double k2 = F(t + h / 2, g + h / 2 * k1);
  double k3 = F(t + h / 2, g + h / 2 * k2);
  double k4 = F(t + h, g + h * k3);
  return g + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}
}  // namespace

CharCurve flow_char(const ScalarField& f, double x_start, double z_start,
                    double t0, double t1, double step) {
  if (step <= 0) throw std::invalid_argument("flow_char: step must be > 0");
  if (t1 <= t0) throw std::invalid_argument("flow_char: empty span");
  if (x_start < t0 - 1e-12 || x_start > t1 + 1e-12)
    throw std::invalid_argument("flow_char: start outside span");
  int n = std::max(1, int(std::ceil((t1 - t0) / step - 1e-12)));
  double h = (t1 - t0) / n;
  CharCurve c;
  c.xs.resize(n + 1);
  c.gs.resize(n + 1);
  c.dgs.resize(n + 1);
  for (int i = 0; i <= n; ++i) c.xs[i] = t0 + i * h;
  // integrate forward from the start to the next node, then node to node
  int i_right = std::min(n, int(std::ceil((x_start - t0) / h - 1e-12)));
  double t = x_start, g = z_start;
  for (int i = i_right; i <= n; ++i) {
    double target = c.xs[i];
    if (target > t + 1e-15) {
      // one partial step at most (first node), then exact node steps
      g = rk4_step(f, t, g, target - t);
      t = target;
    }
    c.gs[i] = g;
  }
  // backward
  t = x_start;
  g = z_start;
  for (int i = i_right - 1; i >= 0; --i) {
    double target = c.xs[i];
    g = rk4_step(f, t, g, target - t);
    t = target;
    c.gs[i] = g;
  }
  for (int i = 0; i <= n; ++i) c.dgs[i] = -f.eval(c.xs[i], c.gs[i]);
  return c;
}

Pt graph_point(const ScalarField& f, double x, double z) {
  double psi = f.eval(x, z);
  return {x, psi, z + 0.5 * x * psi};
}

double lipschitz_estimate(const ScalarField& f, Rect region, long long npairs,
                          uint64_t seed) {
  if (npairs <= 0 || region.area() <= 0)
    throw std::invalid_argument("lipschitz_estimate: empty region");
  SplitMix64 g(mix_seed(seed, 0x11b5));
  double lam = 0;
  for (long long i = 0; i < npairs; ++i) {
    double x1 = g.unit_in(region.x0, region.x1);
    double z1 = g.unit_in(region.z0, region.z1);
    double x2 = g.unit_in(region.x0, region.x1);
    double z2 = g.unit_in(region.z0, region.z1);
    Pt p = graph_point(f, x1, z1), q = graph_point(f, x2, z2);
    double up = cc_bounds(mul(inv(p), q)).second;
    if (up > 1e-12) lam = std::max(lam, std::fabs(q.y - p.y) / up);
  }
  return lam;
}

double area_energy(const ScalarField& f, Rect region, int nx, int nz) {
  if (nx <= 0)
    nx = std::max(8, int(std::lround((region.x1 - region.x0) / f.dx_hint())));
  if (nz <= 0)
    nz = std::max(8, int(std::lround((region.z1 - region.z0) / f.dz_hint())));
  double hx = (region.x1 - region.x0) / nx, hz = (region.z1 - region.z0) / nz;
  double acc = 0;
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix) {
      double x = region.x0 + (ix + 0.5) * hx, z = region.z0 + (iz + 0.5) * hz;
      acc += std::sqrt(1 + sqr(f.horiz_deriv(x, z)));
    }
  return acc * hx * hz;
}

}  // namespace hvp
