#include "hvp/embed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hvp/util.hpp"
#include "hvp/vper.hpp"
#include "json.hpp"

namespace hvp {

CutMetricConfig CutMetricConfig::standard(
    std::shared_ptr<const ScalarField> psi, double r, double R, long long rho,
    long long k, int layers) {
  if (!psi || !psi->periodic())
    throw std::invalid_argument("cut metric needs a periodic surface");
  if (k <= 1) throw std::invalid_argument("cut metric: k must exceed 1");
  if (layers < 1) throw std::invalid_argument("cut metric: layers must be >= 1");
  CutMetricConfig cfg;
  cfg.k = k;
  cfg.rho = rho;
  cfg.psi = std::move(psi);
  double x = std::pow(std::log(double(k) / 8) / std::log(double(rho)), 0.25);
  cfg.alpha = int(std::ceil(x));
  if (std::floor(x) == x) cfg.alpha = int(x);
  double l2r = std::log2(double(rho));
  double l2a = std::log2(double(cfg.alpha));
  cfg.a_lo = l2a + r - l2r;
  cfg.a_hi = l2a + double(layers - 1) * l2r + R + l2r;
  return cfg;
}

int lambda_cut(const Pt& p, const Pt& h1, const Pt& h2, const ScalarField& f) {
  auto above = [&](const Pt& h) {
    Pt q = mul(p, h);
    Pt v = project_v0(q);
    return q.y > f.eval(v.x, v.z);
  };
  return above(h1) != above(h2) ? 1 : 0;
}

namespace {

// shared core: MC over p = X^x Z^c Y^b with an explicit b band
double ell_band(const Pt& h1, const Pt& h2, const ScalarField& f, double b_lo,
                double b_hi, long long budget, uint64_t stream) {
  if (budget <= 0) throw std::invalid_argument("ell: zero budget");
  if (!(b_hi > b_lo)) return 0;
  SplitMix64 rng(stream);
  long long hits = 0;
  for (long long i = 0; i < budget; ++i) {
    double xa = rng.unit(), c = rng.unit();
    double b = b_lo + (b_hi - b_lo) * (double(i) + rng.unit()) / double(budget);
    // X^x Z^c Y^b = (x, b, c + x·b/2); Π of it is (x, 0, c)
    Pt p{xa, b, c + 0.5 * xa * b};
    hits += lambda_cut(p, h1, h2, f);
  }
  return (b_hi - b_lo) * double(hits) / double(budget);
}

}  // namespace

double ell(const Pt& h1, const Pt& h2, const ScalarField& f, long long budget,
           uint64_t seed) {
  double sup = f.sup_abs();
  if (!std::isfinite(sup))
    throw std::invalid_argument("ell: field needs a finite sup bound");
  // λ_p can only be 1 when some b + y(h_i) lies in the ψ range
  double ymin = std::min(h1.y, h2.y), ymax = std::max(h1.y, h2.y);
  double b_lo = -ymax - sup - 1e-9, b_hi = -ymin + sup + 1e-9;
  return ell_band(h1, h2, f, b_lo, b_hi, budget, mix_seed(seed, 0xe11));
}

double big_delta(const Pt& h1, const Pt& h2, const CutMetricConfig& cfg) {
  if (!cfg.psi) throw std::invalid_argument("big_delta: no surface");
  double sup = cfg.psi->sup_abs();
  double t = 1.0 / (double(cfg.k) * cfg.alpha);
  Pt g1 = apply(Stretch{t, t}, h1), g2 = apply(Stretch{t, t}, h2);
  double lam = 0;
  double da = (cfg.a_hi - cfg.a_lo) / (cfg.a_n - 1);
  for (int ai = 0; ai < cfg.a_n; ++ai) {
    double a = cfg.a_lo + da * ai;
    double sc = std::pow(2.0, -a);
    Pt u1 = apply(Stretch{sc, sc}, g1), u2 = apply(Stretch{sc, sc}, g2);
    // per-node constant b band: |y(R_θ u)| ≤ 2^{−a}·t·y_reach for every
    // argument this config handles, so all pairs share one band per node
    double band = sup + sc * t * cfg.y_reach + 1e-9;
    double M = 0;
    for (int j = 0; j < cfg.theta_n; ++j) {
      double theta = 2 * M_PI * j / cfg.theta_n;
      Pt w1 = apply(Rotate{theta}, u1), w2 = apply(Rotate{theta}, u2);
      uint64_t stream = mix_seed(cfg.seed, uint64_t(ai) * 0x10000u + j);
      M += ell_band(w1, w2, *cfg.psi, -band, band, cfg.ell_nodes, stream);
    }
    M /= cfg.theta_n;  // rotation average
    double wtrap = (ai == 0 || ai == cfg.a_n - 1) ? 0.5 : 1.0;
    lam += wtrap * std::pow(2.0, a) * M * da;
  }
  double dx = h1.x - h2.x, dy = h1.y - h2.y;
  return double(cfg.k) * cfg.alpha * lam + std::sqrt(dx * dx + dy * dy);
}

double CenterProfile::integral(double lo, double hi) const {
  double sum = 0;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    double x0 = std::max(s[i], lo), x1 = std::min(s[i + 1], hi);
    if (x1 <= x0) continue;
    double h = s[i + 1] - s[i];
    auto at = [&](double x) {
      double u = (x - s[i]) / h;
      return v[i] * (1 - u) + v[i + 1] * u;
    };
    sum += 0.5 * (at(x0) + at(x1)) * (x1 - x0);
  }
  return sum;
}

CenterProfile center_profile(const CutMetricConfig& cfg, double c_lo,
                             double c_hi, int ns, long long quad_pts) {
  if (!cfg.psi) throw std::invalid_argument("center_profile: no surface");
  if (!(c_hi >= c_lo && c_lo > 0))
    throw std::invalid_argument("center_profile: bad c range");
  double lka = std::log2(double(cfg.k) * cfg.alpha);
  double t_hi = lka - 0.5 * std::log2(c_lo);  // t decreases with c
  double t_lo = lka - 0.5 * std::log2(c_hi);
  CenterProfile pr;
  pr.s.resize(ns);
  pr.v.resize(ns);
  double s0 = t_lo + cfg.a_lo, s1 = t_hi + cfg.a_hi;
  QuadSpec q;
  q.npts = quad_pts;
  Rect U{0, 1, 0, 1};
  for (int i = 0; i < ns; ++i) {
    pr.s[i] = s0 + (s1 - s0) * i / (ns - 1);
    pr.v[i] = vpp(*cfg.psi, U, pr.s[i], q);
  }
  return pr;
}

double big_delta_center(double c, const CutMetricConfig& cfg,
                        const CenterProfile& pr) {
  if (!(c > 0)) throw std::invalid_argument("big_delta_center: c must be > 0");
  double ka = double(cfg.k) * cfg.alpha;
  double t = std::log2(ka) - 0.5 * std::log2(c);
  return ka * std::pow(2.0, -t) * pr.integral(t + cfg.a_lo, t + cfg.a_hi);
}

DistortionReport distortion_harness(int n, const CutMetricConfig& cfg,
                                    long long max_pairs) {
  auto ball = word_ball(n);
  std::vector<Pt> pts;
  pts.reserve(ball.size());
  double reach = 0;
  for (auto& e : ball) {
    Pt p{double(e.x), double(e.y), double(e.two_z) / 2};
    reach = std::max(reach, std::hypot(p.x, p.y));
    pts.push_back(p);
  }
  CutMetricConfig c2 = cfg;
  c2.y_reach = std::max(cfg.y_reach, reach + 1);
  DistortionReport rep;
  rep.n = n;
  rep.seed = cfg.seed;
  rep.min_ratio = INFINITY;
  rep.max_ratio = 0;
  auto formula_side = [&](const Pt& g, const Pt& h) {
    return std::fabs(g.x - h.x) + std::fabs(g.y - h.y) +
           std::sqrt(std::fabs(2 * g.z - 2 * h.z - g.x * h.y + g.y * h.x)) /
               c2.alpha;
  };
  auto handle = [&](const Pt& g, const Pt& h) {
    double fs = formula_side(g, h);
    if (fs == 0) return;
    double dl = big_delta(g, h, c2);
    double r = dl / fs;
    rep.rows.push_back({g, h, dl, fs, r});
    rep.min_ratio = std::min(rep.min_ratio, r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  };
  long long total = (long long)pts.size() * ((long long)pts.size() - 1) / 2;
  if (total <= max_pairs) {
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) handle(pts[i], pts[j]);
  } else {
    SplitMix64 rng(mix_seed(cfg.seed, 0xba11));
    for (long long s = 0; s < max_pairs; ++s) {
      size_t i = size_t(rng.next() % pts.size());
      size_t j = size_t(rng.next() % pts.size());
      if (i == j) continue;
      handle(pts[i], pts[j]);
    }
  }
  rep.npairs = (long long)rep.rows.size();
  return rep;
}

std::string DistortionReport::csv() const {
  std::ostringstream os;
  os << "gx,gy,gz,hx,hy,hz,delta,formula_side,ratio\n";
  os.precision(17);
  for (auto& r : rows)
    os << r.g.x << ',' << r.g.y << ',' << r.g.z << ',' << r.h.x << ','
       << r.h.y << ',' << r.h.z << ',' << r.delta << ',' << r.formula << ','
       << r.ratio << '\n';
  return os.str();
}

std::string DistortionReport::json_summary() const {
  nlohmann::json j{{"n", n},
                   {"npairs", npairs},
                   {"min_ratio", min_ratio},
                   {"max_ratio", max_ratio},
                   {"seed", seed}};
  return j.dump();
}

}  // namespace hvp
