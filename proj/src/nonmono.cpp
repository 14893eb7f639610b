#include "hvp/nonmono.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hvp/util.hpp"
#include "json.hpp"

namespace hvp {

IntervalSet IntervalSet::from_cuts(std::vector<double> cuts, bool first_in) {
  std::sort(cuts.begin(), cuts.end());
  // near-coincident boundary pairs are blips below the length floor: cancel
  std::vector<double> clean;
  for (size_t i = 0; i < cuts.size();) {
    if (i + 1 < cuts.size() && cuts[i + 1] - cuts[i] < eps_min)
      i += 2;
    else
      clean.push_back(cuts[i++]);
  }
  IntervalSet s;
  if (clean.empty()) return first_in ? whole_line() : s;
  bool cur = first_in;
  if (cur) {
    s.ray_lo = true;
    s.ray_lo_end = clean.front();
  }
  cur = !cur;
  for (size_t i = 0; i + 1 < clean.size(); ++i) {
    if (cur && clean[i + 1] - clean[i] >= eps_min)
      s.iv.push_back({clean[i], clean[i + 1]});
    cur = !cur;
  }
  if (cur) {
    s.ray_hi = true;
    s.ray_hi_start = clean.back();
  }
  return s;
}

IntervalSet IntervalSet::whole_line() {
  IntervalSet s;
  s.ray_lo = s.ray_hi = true;
  s.ray_lo_end = INFINITY;
  s.ray_hi_start = -INFINITY;
  return s;
}

IntervalSet IntervalSet::single(double a, double b) {
  IntervalSet s;
  if (b - a >= eps_min) s.iv.push_back({a, b});
  return s;
}

bool IntervalSet::contains(double t) const {
  if (ray_lo && t <= ray_lo_end) return true;
  if (ray_hi && t >= ray_hi_start) return true;
  auto it = std::lower_bound(iv.begin(), iv.end(), t,
                             [](const Iv& I, double v) { return I.b < v; });
  return it != iv.end() && it->a <= t;
}

double IntervalSet::total_length() const {
  if (ray_lo || ray_hi) return INFINITY;
  double s = 0;
  for (auto& I : iv) s += I.b - I.a;
  return s;
}

double omega_hat(const IntervalSet& S, double R, const IntervalSet& window) {
  double mass = 0;
  auto add = [&](double a, double b) {
    double len = b - a;
    if (!(len > 0) || len > R) return;
    if (window.contains(a)) mass += len / 2;
    if (window.contains(b)) mass += len / 2;
  };
  for (auto& I : S.iv) add(I.a, I.b);
  // bounded complement pieces: gaps between consecutive components
  bool have_prev = S.ray_lo;
  double prev = S.ray_lo_end;
  for (auto& I : S.iv) {
    if (have_prev) add(prev, I.a);
    prev = I.b;
    have_prev = true;
  }
  if (S.ray_hi && have_prev) add(prev, S.ray_hi_start);
  return mass;
}

namespace {
constexpr double kRootTol = 1e-10;

double bisect_sign(const std::function<double(double)>& h, double a, double b,
                   bool a_pos) {
  while (b - a > kRootTol) {
    double m = 0.5 * (a + b);
    if ((h(m) > 0) == a_pos)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}
}  // namespace

IntervalSet line_trace(const ScalarField& f, const HorizontalLine& L,
                       double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("line_trace: empty span");
  double sup = f.sup_abs();
  std::function<double(double)> h = [&](double t) {
    return L.yAt(t) - f.eval(t, L.gL(t));
  };
  // crossing zone: |y0 + m·t| ≤ sup|ψ|; outside it sign(h) = sign(y)
  double zlo = t0, zhi = t1;
  if (std::isfinite(sup)) {
    double cap = sup * (1 + 1e-12) + 1e-12;
    if (L.m != 0) {
      double ta = (-cap - L.y0) / L.m, tb = (cap - L.y0) / L.m;
      if (ta > tb) std::swap(ta, tb);
      zlo = std::max(t0, ta);
      zhi = std::min(t1, tb);
    } else if (std::fabs(L.y0) > cap) {
      zhi = zlo - 1;  // no crossing possible
    }
  }
  if (!(zhi > zlo))
    return L.yAt(0.5 * (t0 + t1)) > 0 ? IntervalSet::whole_line()
                                      : IntervalSet{};
  double sp = f.dx_hint() / 2;
  long long nsteps = (long long)std::ceil((zhi - zlo) / sp);
  nsteps = std::max(nsteps, (long long)8);
  std::vector<double> cuts;
  double tprev = zlo;
  bool sprev = h(zlo) > 0;
  // At the zone edge |y| = sup ≥ |ψ|, so the sign there matches sign(y):
  // membership at t0 is therefore consistent whether or not t0 < zlo.
  bool first_in = (t0 < zlo) ? (L.yAt(t0) > 0) : sprev;
  for (long long i = 1; i <= nsteps; ++i) {
    double t = zlo + (zhi - zlo) * double(i) / double(nsteps);
    bool s = h(t) > 0;
    if (s != sprev) cuts.push_back(bisect_sign(h, tprev, t, sprev));
    tprev = t;
    sprev = s;
  }
  IntervalSet S = IntervalSet::from_cuts(std::move(cuts), first_in);
  // pieces touching the span ends behave as rays (extent beyond unknown/
  // analytically constant); from_cuts already produced exactly that shape
  return S;
}

RegionV0 RegionV0::rect(Rect r) {
  RegionV0 u;
  u.bbox = r;
  u.area = r.area();
  return u;
}

namespace {

// {t ∈ [x0,x1] : zlo ≤ g_L(t) ≤ zhi} for the quadratic g_L: exact roots,
// membership decided at segment midpoints.
IntervalSet window_rect(const HorizontalLine& L, const Rect& b) {
  std::vector<double> nodes{b.x0, b.x1};
  auto roots = [&](double c) {
    double A = -0.5 * L.m, B = -L.y0, C = L.z0 - c;
    if (std::fabs(A) < 1e-14) {
      if (std::fabs(B) > 1e-300) {
        double t = -C / B;
        if (t > b.x0 && t < b.x1) nodes.push_back(t);
      }
    } else {
      double disc = B * B - 4 * A * C;
      if (disc > 0) {
        double sq = std::sqrt(disc);
        // numerically stable pair
        double q = -0.5 * (B + (B >= 0 ? sq : -sq));
        for (double t : {q / A, C / q})
          if (std::isfinite(t) && t > b.x0 && t < b.x1) nodes.push_back(t);
      }
    }
  };
  roots(b.z0);
  roots(b.z1);
  std::sort(nodes.begin(), nodes.end());
  IntervalSet W;
  double open = 0;
  bool in_prev = false;
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    double mid = 0.5 * (nodes[i] + nodes[i + 1]);
    double g = L.gL(mid);
    bool in = g >= b.z0 && g <= b.z1;
    if (in && !in_prev) open = nodes[i];
    if (!in && in_prev && nodes[i] - open >= IntervalSet::eps_min)
      W.iv.push_back({open, nodes[i]});
    in_prev = in;
  }
  if (in_prev && nodes.back() - open >= IntervalSet::eps_min)
    W.iv.push_back({open, nodes.back()});
  return W;
}

// generic region: membership scan along the line + boolean bisection
IntervalSet window_generic(const RegionV0& U, const HorizontalLine& L) {
  const Rect& b = U.bbox;
  int n = 2048;
  auto in_at = [&](double t) { return U.inside(t, L.gL(t)); };
  std::vector<double> cuts;
  double tprev = b.x0;
  bool sprev = in_at(b.x0);
  bool first = sprev;
  for (int i = 1; i <= n; ++i) {
    double t = b.x0 + (b.x1 - b.x0) * double(i) / n;
    bool s = in_at(t);
    if (s != sprev) {
      double lo = tprev, hi = t;
      while (hi - lo > 1e-9) {
        double m = 0.5 * (lo + hi);
        if (in_at(m) == sprev)
          lo = m;
        else
          hi = m;
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    tprev = t;
    sprev = s;
  }
  IntervalSet W;
  bool cur = first;
  double open = b.x0;
  for (double c : cuts) {
    if (cur && c - open >= IntervalSet::eps_min) W.iv.push_back({open, c});
    open = c;
    cur = !cur;
  }
  if (cur && b.x1 - open >= IntervalSet::eps_min)
    W.iv.push_back({open, b.x1});
  return W;
}

IntervalSet window_set(const RegionV0& U, const HorizontalLine& L) {
  return U.contains ? window_generic(U, L) : window_rect(L, U.bbox);
}

}  // namespace

OmegaBox default_box(const ScalarField& f, const RegionV0& U, double R) {
  double lam = std::min(lipschitz_estimate(f, U.bbox, 4000, 2024), 0.9);
  OmegaBox box;
  // cone argument: lines steeper than the Lipschitz slope cross Γ once and
  // contribute nothing; ×2 covers the estimation error; floor keeps the box
  // nonempty so plane fields still report an exact 0
  box.m_max = std::max(2 * lam / std::sqrt(1 - lam * lam), 1e-3);
  // A line contributes only via endpoint mass inside the window, and the
  // endpoints are crossings of Γ at parameters t with Π(ρ_L(t)) ∈ U — the
  // box only has to cover crossings over U itself (R plays no role here).
  (void)R;
  Rect samp = U.bbox;
  double pmin = INFINITY, pmax = -INFINITY;
  int n = 96;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = f.eval(samp.x0 + (samp.x1 - samp.x0) * (i + 0.5) / n,
                        samp.z0 + (samp.z1 - samp.z0) * (j + 0.5) / n);
      pmin = std::min(pmin, v);
      pmax = std::max(pmax, v);
    }
  double pad = 0.05 * (pmax - pmin) + 1e-6;
  pmin -= pad;
  pmax += pad;
  double Tmax = std::max(std::fabs(U.bbox.x0), std::fabs(U.bbox.x1));
  box.y0_lo = pmin - box.m_max * Tmax;
  box.y0_hi = pmax + box.m_max * Tmax;
  double Ymax = std::max(std::fabs(box.y0_lo), std::fabs(box.y0_hi));
  double B = 0.5 * box.m_max * Tmax * Tmax + Ymax * Tmax;
  box.z0_lo = U.bbox.z0 - B;
  box.z0_hi = U.bbox.z1 + B;
  return box;
}

OmegaEstimate omega_p(const ScalarField& f, const RegionV0& U, double R,
                      long long nsamples, uint64_t seed, const OmegaBox* boxp) {
  if (nsamples <= 0) throw std::invalid_argument("omega_p: nsamples = 0");
  if (!(R > 0)) throw std::invalid_argument("omega_p: R must be positive");
  OmegaBox box = boxp ? *boxp : default_box(f, U, R);
  if (boxp && !(box.volume() > 0))
    throw std::invalid_argument("omega_p: empty sampling box");
  OmegaEstimate est;
  est.nsamples = nsamples;
  est.seed = seed;
  est.m_max = box.m_max;
  est.y0_lo = box.y0_lo;
  est.y0_hi = box.y0_hi;
  est.z0_lo = box.z0_lo;
  est.z0_hi = box.z0_hi;
  int Sm = nsamples >= 4096 ? 16 : (nsamples >= 64 ? 4 : 1);
  int Sy = Sm;
  int S = Sm * Sy;
  std::vector<double> sum(S, 0), sumsq(S, 0);
  parallel_chunks(S, 1, [&](int, long long s0, long long) {
    int sid = int(s0);
    int im = sid % Sm, iy = sid / Sm;
    SplitMix64 rng(mix_seed(seed, sid));
    long long cnt = nsamples / S + (sid < nsamples % S ? 1 : 0);
    double mlo = -box.m_max + 2 * box.m_max * im / Sm;
    double mhi = -box.m_max + 2 * box.m_max * (im + 1) / Sm;
    double ylo = box.y0_lo + (box.y0_hi - box.y0_lo) * iy / Sy;
    double yhi = box.y0_lo + (box.y0_hi - box.y0_lo) * (iy + 1) / Sy;
    for (long long k = 0; k < cnt; ++k) {
      HorizontalLine L;
      L.m = rng.unit_in(mlo, mhi);
      L.y0 = rng.unit_in(ylo, yhi);
      L.z0 = rng.unit_in(box.z0_lo, box.z0_hi);
      IntervalSet W = window_set(U, L);
      double mass = 0;
      if (!W.iv.empty()) {
        IntervalSet tr =
            line_trace(f, L, W.iv.front().a - R, W.iv.back().b + R);
        mass = omega_hat(tr, R, W);
      }
      sum[sid] += mass;
      sumsq[sid] += mass * mass;
    }
  });
  double tot = 0, tot2 = 0;
  for (int s = 0; s < S; ++s) {
    tot += sum[s];
    tot2 += sumsq[s];
  }
  double mean = tot / double(nsamples);
  double var = std::max(0.0, tot2 / double(nsamples) - mean * mean);
  double scale = box.volume() / R;
  est.value = scale * mean;
  est.stderrv = scale * std::sqrt(var / double(nsamples));
  return est;
}

std::string OmegaEstimate::json() const {
  nlohmann::json j{{"value", value},
                   {"stderr", stderrv},
                   {"nsamples", nsamples},
                   {"box",
                    {{"m_max", m_max},
                     {"y0", {y0_lo, y0_hi}},
                     {"z0", {z0_lo, z0_hi}}}},
                   {"seed", seed}};
  return j.dump();
}

}  // namespace hvp
