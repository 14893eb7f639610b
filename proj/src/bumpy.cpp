#include "hvp/bumpy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hvp/util.hpp"

namespace hvp {

double BumpPrototype::b(double u) {
  if (u <= 0 || u >= 1) return 0;
  return std::exp(-1.0 / (u * (1 - u)));
}
double BumpPrototype::db(double u) {
  if (u <= 0 || u >= 1) return 0;
  double w = u * (1 - u), wp = 1 - 2 * u;
  return b(u) * wp / (w * w);
}
double BumpPrototype::d2b(double u) {
  if (u <= 0 || u >= 1) return 0;
  double w = u * (1 - u), wp = 1 - 2 * u;
  double f1 = wp / (w * w);
  double f2 = -2.0 / (w * w) - 2.0 * wp * wp / (w * w * w);
  return b(u) * (f1 * f1 + f2);
}

namespace {
// The product form β = c·b(x)·b(z) makes every order-≤2 partial a product
// b^{(i)}(x)·b^{(j)}(z), so the grid max is a product of 1D grid maxima.
double max_partial_unnormalized(int n) {
  double M[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    double u = (i + 0.5) / n;
    M[0] = std::max(M[0], std::fabs(BumpPrototype::b(u)));
    M[1] = std::max(M[1], std::fabs(BumpPrototype::db(u)));
    M[2] = std::max(M[2], std::fabs(BumpPrototype::d2b(u)));
  }
  double best = 0;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; i + j <= 2; ++j) best = std::max(best, M[i] * M[j]);
  return best;
}
}  // namespace

double BumpPrototype::max_partial(int n) const {
  return c * max_partial_unnormalized(n);
}

BumpPrototype make_bump() {
  static BumpPrototype cached = [] {
    BumpPrototype p;
    p.c = 0.99 / max_partial_unnormalized(2048);
    p.max_value = p.c * BumpPrototype::b(0.5) * BumpPrototype::b(0.5);
    return p;
  }();
  return cached;
}

Calibration calibrate(const BumpPrototype& proto, int steps_per_unit,
                      int quad_n) {
  // vpP_{U,φ}(a) = 2ᵃ·c·(∫b)·∫|b_per(z) − b_per(z−δ)|dz by the product form.
  std::vector<double> bg(quad_n);
  double bint = 0;
  for (int i = 0; i < quad_n; ++i) {
    bg[i] = BumpPrototype::b((i + 0.5) / quad_n);
    bint += bg[i];
  }
  bint /= quad_n;
  auto Iz = [&](double delta) {
    double dfrac = delta - std::floor(delta);
    long long off = std::llround(dfrac * quad_n);  // midpoint-to-midpoint shift
    double frac = dfrac * quad_n - off;
    double acc = 0;
    for (int i = 0; i < quad_n; ++i) {
      long long j = i - off;
      j -= (long long)std::floor(double(j) / quad_n) * quad_n;
      long long j2 = (j - 1 + quad_n) % quad_n;
      double shifted = bg[j] * (1 - frac) + bg[j2] * frac;
      acc += std::fabs(bg[i] - shifted);
    }
    return acc / quad_n;
  };
  const double a_lo = -4, a_hi = 10;
  int n = int((a_hi - a_lo) * steps_per_unit) + 1;
  Calibration cal;
  cal.phi_profile.region = {0, 1, 0, 1};
  cal.phi_profile.quad = "separable-midpoint";
  cal.phi_profile.a.resize(n);
  cal.phi_profile.v.resize(n);
  for (int i = 0; i < n; ++i) {
    double a = a_lo + double(i) / steps_per_unit;
    cal.phi_profile.a[i] = a;
    cal.phi_profile.v[i] =
        std::pow(2.0, a) * proto.c * bint * Iz(std::pow(2.0, -2 * a));
  }
  if (*std::max_element(cal.phi_profile.v.begin(), cal.phi_profile.v.end()) <=
      0)
    throw std::runtime_error("calibrate: vpP profile is numerically zero");
  // window [r,R] maximizing η·min(1, R−r), η = min over the window
  double best = -1;
  for (int i = 0; i < n; ++i) {
    double eta = cal.phi_profile.v[i];
    for (int j = i + 1; j < n; ++j) {
      eta = std::min(eta, cal.phi_profile.v[j]);
      double len = double(j - i) / steps_per_unit;
      double score = eta * std::min(1.0, len);
      if (score > best) {
        best = score;
        cal.r = cal.phi_profile.a[i];
        cal.R = cal.phi_profile.a[j];
        cal.eta = eta;
      }
    }
  }
  cal.s = std::max(std::fabs(cal.r), std::fabs(cal.R));
  double want = std::max(
      {8.0, 12.0 / (std::pow(2.0, cal.r) * cal.eta),
       40.0 * std::pow(2.0, cal.s) / cal.eta});
  cal.rho = (long long)std::ceil(want);
  return cal;
}

BumpyField::BumpyField(const BumpyParams& p, const BumpPrototype& proto)
    : p_(p), proto_(proto) {
  long long cap = 1;
  for (int k = 0; k < 4; ++k) cap *= p_.alpha;
  if (p_.layers > cap) p_.layers = int(cap);
  if (p_.rho < 8) throw std::invalid_argument("bumpy: rho must be ≥ 8");
  if (p_.layers < 1) throw std::invalid_argument("bumpy: need ≥ 1 layer");
  int L = p_.layers;
  // 16 nodes across the finest column: β(s_rel) has unit-scale variation in
  // the column coordinate, so this already oversamples
  dxh_ = std::pow(double(p_.rho), -(L - 1)) / 16.0;
  dzh_ = cell_dz(L - 1) / 64.0;
  tables_.resize(L);
  for (int j = 1; j < L; ++j) build_table(j);
}

double BumpyField::layer_amp(int i) const {
  return std::pow(double(p_.rho), -i) / sqr(double(p_.alpha)) *
         proto_.max_value;
}
double BumpyField::cell_dz(int i) const {
  return std::pow(double(p_.rho), -2.0 * i) / sqr(double(p_.alpha));
}
bool BumpyField::layer_tabulated(int i) const {
  return i >= 1 && i < int(tables_.size()) && tables_[i].cols > 0;
}

double BumpyField::fly_T(int layer, double x, double z) const {
  double cols = std::pow(double(p_.rho), layer);
  double xf = x - std::floor(x);
  double m = std::floor(xf * cols);
  double edge = m / cols;
  double dist = xf - edge;
  if (dist <= 0) return z;
  int nsteps = 4;
  double h = -dist / nsteps;
  double t = xf, g = z;
  for (int s = 0; s < nsteps; ++s) {
    auto F = [&](double tt, double gg) { return -eval_stage(layer, tt, gg); };
    double k1 = F(t, g);
    double k2 = F(t + h / 2, g + h / 2 * k1);
    double k3 = F(t + h / 2, g + h / 2 * k2);
    double k4 = F(t + h, g + h * k3);
    g += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return g;
}

double BumpyField::flow_T(int layer, double x, double z) const {
  if (layer == 0) return z;
  if (!layer_tabulated(layer)) return fly_T(layer, x, z);
  const Table& tb = tables_[layer];
  double xf = x - std::floor(x);
  double u = xf * tb.cols;
  int m = std::min(int(u), tb.cols - 1);
  double xl = (u - m) * tb.px;
  int ix = std::min(int(xl), tb.px - 1);
  double fx = xl - ix;
  double zf = z - std::floor(z);
  double v = zf * tb.nz;
  int iz = std::min(int(v), tb.nz - 1);
  double fz = v - iz;
  int iz1 = (iz + 1) % tb.nz;
  double off =
      (1 - fz) * ((1 - fx) * tb.at(m, ix, iz) + fx * tb.at(m, ix + 1, iz)) +
      fz * ((1 - fx) * tb.at(m, ix, iz1) + fx * tb.at(m, ix + 1, iz1));
  return z + off;
}

double BumpyField::flow_dTdz(int layer, double x, double z) const {
  if (layer == 0) return 1;
  double h = cell_dz(layer - 1) / 64.0;
  return (flow_T(layer, x, z + h) - flow_T(layer, x, z - h)) / (2 * h);
}

double BumpyField::layer_contrib(int j, double x, double z) const {
  double cols = std::pow(double(p_.rho), j);
  double xf = x - std::floor(x);
  double u = xf * cols;
  double m = std::floor(u);
  double s_rel = u - m;
  if (s_rel <= 0 || s_rel >= 1) return 0;
  double bs = BumpPrototype::b(s_rel);
  if (bs == 0) return 0;
  double T = flow_T(j, xf, z);
  double w = T / cell_dz(j);
  double t_rel = w - std::floor(w);
  return proto_.c / sqr(double(p_.alpha)) / cols * bs *
         BumpPrototype::b(t_rel);
}

double BumpyField::eval_stage(int stage, double x, double z) const {
  double acc = 0;
  for (int j = 0; j < stage; ++j) acc += layer_contrib(j, x, z);
  return acc;
}

double BumpyField::eval(double x, double z) const {
  return eval_stage(p_.layers, x, z);
}

void BumpyField::build_table(int j) {
  double colsd = std::pow(double(p_.rho), j);
  if (colsd > p_.grid / 4.0) return;  // on-the-fly regime
  Table tb;
  tb.cols = int(colsd);
  tb.px = std::min(1024, std::max(4, p_.grid / tb.cols));
  double zfeat = 64.0 * sqr(double(p_.alpha)) *
                 std::pow(double(p_.rho), 2.0 * (j - 1));
  tb.nz = std::max(p_.grid, int(std::min(zfeat, double(1 << 20))));
  size_t bytes = size_t(tb.cols) * (tb.px + 1) * tb.nz * sizeof(float);
  if (bytes > size_t(1) << 30) return;  // memory guard: fall back to fly
  tb.d.assign(size_t(tb.cols) * (tb.px + 1) * tb.nz, 0.f);
  double amp = proto_.max_value / sqr(double(p_.alpha)) * double(p_.rho) /
               (double(p_.rho) - 1);  // ‖ψ_j‖∞ bound
  int marg = int(std::ceil(amp / colsd * tb.nz)) + 2;
  double colw = 1.0 / tb.cols, hx = colw / tb.px;
  int ncur = tb.nz + 2 * marg + 1;
  std::vector<double> t0(ncur), zcur(ncur);
  for (int m = 0; m < tb.cols; ++m) {
    double xe = double(m) / tb.cols;
    for (int k = 0; k < ncur; ++k) t0[k] = double(k - marg) / tb.nz;
    zcur = t0;
    for (int ix = 0; ix <= tb.px; ++ix) {
      double xcur = xe + ix * hx;
      // invert t ↦ z(t) onto the regular z grid (curves never cross)
      int k = 0;
      for (int iz = 0; iz < tb.nz; ++iz) {
        double zt = double(iz) / tb.nz;
        while (k + 1 < ncur - 1 && zcur[k + 1] <= zt) ++k;
        double span = zcur[k + 1] - zcur[k];
        double T = t0[k] + (t0[k + 1] - t0[k]) * (zt - zcur[k]) / span;
        tb.d[(size_t(m) * (tb.px + 1) + ix) * tb.nz + iz] = float(T - zt);
      }
      if (ix == tb.px) break;
      // advance all curves by one x sample (RK4; the step is far below the
      // finest feature scale of ψ_j, so one step is ample)
      double h = hx, t = xcur;
      for (int kk = 0; kk < ncur; ++kk) {
        double g = zcur[kk];
        auto F = [&](double tt, double gg) { return -eval_stage(j, tt, gg); };
        double k1 = F(t, g);
        double k2 = F(t + h / 2, g + h / 2 * k1);
        double k3 = F(t + h / 2, g + h / 2 * k2);
        double k4 = F(t + h, g + h * k3);
        zcur[kk] = g + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
    }
  }
  tables_[j] = std::move(tb);
}

BumpyStage::BumpyStage(std::shared_ptr<const BumpyField> f, int stage)
    : f_(std::move(f)), stage_(stage) {
  int i = std::max(1, stage_);
  dxh_ = std::pow(double(f_->params().rho), -(i - 1)) / 16.0;
  dzh_ = f_->cell_dz(i - 1) / 64.0;
}
double BumpyStage::eval(double x, double z) const {
  return f_->eval_stage(stage_, x, z);
}

std::shared_ptr<const BumpyStage> BumpyBuild::stage(int i) const {
  return std::make_shared<BumpyStage>(psi, i);
}

BumpyBuild build(const BumpyParams& params) {
  // Table construction is the dominant cost, and the field is immutable:
  // memoize identical parameter sets.
  static std::vector<std::pair<BumpyParams, std::shared_ptr<BumpyField>>>
      cache;
  BumpyBuild b;
  for (auto& [p, f] : cache)
    if (p.alpha == params.alpha && p.rho == params.rho &&
        p.layers == params.layers && p.grid == params.grid) {
      b.psi = f;
      b.params = f->params();
      return b;
    }
  auto f = std::make_shared<BumpyField>(params, make_bump());
  cache.emplace_back(params, f);
  b.psi = f;
  b.params = f->params();
  return b;
}

InternalReport verify_internal(const BumpyBuild& bld, long long budget,
                               uint64_t seed) {
  const BumpyField& F = *bld.psi;
  int L = F.params().layers;
  double a2 = sqr(double(F.params().alpha));
  InternalReport rep;
  rep.layers.resize(L);
  Lattice2D lat(budget, mix_seed(seed, 0xbd));
  // horizontal derivatives of every stage at shared sample points
  std::vector<std::vector<double>> hd(L + 1,
                                      std::vector<double>(size_t(lat.n)));
  std::vector<std::shared_ptr<const BumpyStage>> stages;
  for (int i = 0; i <= L; ++i) stages.push_back(bld.stage(i));
  for (long long s = 0; s < lat.n; ++s) {
    double x, z;
    lat.point(s, x, z);
    for (int i = 0; i <= L; ++i) hd[i][size_t(s)] = stages[i]->horiz_deriv(x, z);
    rep.sup_psi = std::max(rep.sup_psi, std::fabs(F.eval(x, z)));
  }
  for (int i = 1; i <= L; ++i) {
    LayerReport& lr = rep.layers[i - 1];
    lr.layer = i;
    double l2 = 0;
    for (long long s = 0; s < lat.n; ++s) {
      double x, z;
      lat.point(s, x, z);
      lr.sup_dpsi_dz =
          std::max(lr.sup_dpsi_dz, std::fabs(stages[i]->dpsi_dz(x, z)));
      l2 += sqr(hd[i][size_t(s)]);
      if (i < L) {
        double dt = F.flow_dTdz(i, x, z);
        lr.dtdz_min = std::min(lr.dtdz_min, dt);
        lr.dtdz_max = std::max(lr.dtdz_max, dt);
      }
      if (i >= 1) {
        double D = hd[i][size_t(s)] - hd[i - 1][size_t(s)];
        lr.sup_D = std::max(lr.sup_D, std::fabs(D));
      }
    }
    lr.l2_horiz = std::sqrt(l2 / double(lat.n));
    if (i >= 1)
      rep.c_prime = std::max(rep.c_prime,
                             lr.l2_horiz / (std::sqrt(double(i)) / a2));
  }
  // Gram matrix of the increments D_m = ∂_{m+1}ψ_{m+1} − ∂_mψ_m
  rep.gram.assign(L, std::vector<double>(L, 0.0));
  for (int m = 0; m < L; ++m)
    for (int nidx = m; nidx < L; ++nidx) {
      double acc = 0;
      for (long long s = 0; s < lat.n; ++s)
        acc += (hd[m + 1][size_t(s)] - hd[m][size_t(s)]) *
               (hd[nidx + 1][size_t(s)] - hd[nidx][size_t(s)]);
      double v = std::fabs(acc / double(lat.n));
      rep.gram[m][nidx] = rep.gram[nidx][m] = v;
      rep.c_ortho = std::max(
          rep.c_ortho, v * sqr(a2) * std::pow(double(F.params().rho),
                                              double(nidx - m)));
    }
  return rep;
}

}  // namespace hvp
