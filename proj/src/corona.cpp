#include "hvp/corona.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hvp/util.hpp"
#include "hvp/vper.hpp"
#include "json.hpp"

namespace hvp {

namespace {
// Simpson weights on n+1 uniform nodes (n even)
double simpson(const std::function<double(double)>& g, double a, double b,
               int n) {
  double h = (b - a) / n, acc = g(a) + g(b);
  for (int i = 1; i < n; ++i) acc += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3;
}
}  // namespace

RegionV0 Pseudoquad::region(double r) const {
  RegionV0 u;
  double hw = 0.5 * r * delta_x;
  u.bbox.x0 = xc - hw;
  u.bbox.x1 = xc + hw;
  double zmin = INFINITY, zmax = -INFINITY;
  for (int i = 0; i <= 64; ++i) {
    double m = mid(u.bbox.x0 + (u.bbox.x1 - u.bbox.x0) * i / 64.0);
    zmin = std::min(zmin, m);
    zmax = std::max(zmax, m);
  }
  u.bbox.z0 = zmin - r * d;
  u.bbox.z1 = zmax + r * d;
  u.area = r * delta_x * r * delta_z;  // model value; not used by omega_p
  Pseudoquad Q = *this;                // capture curves by value
  double rd = r * d;
  u.contains = [Q, rd](double x, double z) {
    return std::fabs(z - Q.mid(x)) <= rd;
  };
  return u;
}

Pseudoquad make_pseudoquad(const ScalarField& f, double a, double b,
                           double lower_seed, double upper_seed,
                           double forced_d) {
  if (!(b > a)) throw std::invalid_argument("pseudoquad: empty base interval");
  Pseudoquad Q;
  Q.a = a;
  Q.b = b;
  Q.xc = 0.5 * (a + b);
  double w = b - a;
  double t0 = Q.xc - 2 * w, t1 = Q.xc + 2 * w;
  double step = std::max(std::min(w / 256, f.dx_hint()), w / 4096);
  Q.g1 = flow_char(f, Q.xc, lower_seed, t0, t1, step);
  Q.g2 = flow_char(f, Q.xc, upper_seed, t0, t1, step);
  // mean half-gap and crossing check on I
  int n = 128;
  double gap_acc = 0, gap_min = INFINITY;
  for (int i = 0; i <= n; ++i) {
    double t = a + w * i / n;
    double gp = Q.g2.eval(t) - Q.g1.eval(t);
    gap_min = std::min(gap_min, gp);
  }
  if (!(gap_min > 0))
    throw std::runtime_error("pseudoquad: characteristic curves cross");
  gap_acc = simpson([&](double t) { return Q.g2.eval(t) - Q.g1.eval(t); }, a,
                    b, n) /
            w;
  Q.d = forced_d > 0 ? forced_d : 0.5 * gap_acc;
  Q.delta_x = w;
  Q.delta_z = 2 * Q.d;
  Q.aspect = w / std::sqrt(Q.delta_z);
  Q.area = simpson([&](double t) { return Q.g2.eval(t) - Q.g1.eval(t); }, a,
                   b, n);
  // centered least-squares quadratic to the mid-curve on I
  double S2 = 0, S4 = 0, Sy = 0, Syu = 0, Syu2 = 0;
  for (int i = 0; i <= n; ++i) {
    double t = a + w * i / n, u = t - Q.xc;
    double y = Q.mid(t);
    S2 += u * u;
    S4 += u * u * u * u;
    Sy += y;
    Syu += y * u;
    Syu2 += y * u * u;
  }
  double S0 = n + 1;
  double det = S0 * S4 - S2 * S2;
  Q.hc[2] = (S0 * Syu2 - S2 * Sy) / det;
  Q.hc[0] = (Sy - Q.hc[2] * S2) / S0;
  Q.hc[1] = Syu / S2;
  // rectilinearity over 4I
  double rect = 0;
  for (int i = 0; i <= 512; ++i) {
    double t = t0 + (t1 - t0) * i / 512.0;
    double hm = Q.h(t);
    rect = std::max(rect, std::max(std::fabs(Q.g1.eval(t) - (hm - Q.d)),
                                   std::fabs(Q.g2.eval(t) - (hm + Q.d))));
  }
  Q.rectilinearity = rect / Q.delta_z;
  return Q;
}

ParamonoResult is_paramonotone(const ScalarField& f, const Pseudoquad& Q,
                               double eta, double R, double r,
                               long long nsamples, uint64_t seed) {
  RegionV0 U = Q.region(r);
  OmegaEstimate est = omega_p(f, U, R * Q.delta_x, nsamples, seed);
  ParamonoResult res;
  res.density = est.value / Q.area;
  res.density_stderr = est.stderrv / Q.area;
  res.paramonotone = res.density <= eta / std::pow(Q.aspect, 4.0);
  return res;
}

namespace {
void subdivide_rec(const ScalarField& f, PatchworkTree& T, Pseudoquad Q,
                   int parent, int depth, int max_depth, double min_width,
                   long long node_samples, uint64_t seed) {
  int id = int(T.nodes.size());
  T.nodes.push_back({});
  PatchNode& nd0 = T.nodes[id];
  nd0.parent = parent;
  nd0.depth = depth;
  nd0.weight = Q.area / std::pow(Q.aspect, 4.0);
  if (parent >= 0) {
    PatchNode& p = T.nodes[parent];
    p.child[p.child[0] < 0 ? 0 : 1] = id;
  }
  ParamonoResult pm =
      is_paramonotone(f, Q, T.eta, T.R, T.r, node_samples, mix_seed(seed, id));
  T.nodes[id].density = pm.density;
  bool leaf = depth >= max_depth || Q.delta_x < min_width;
  if (leaf) {
    T.nodes[id].cut = 'l';
    T.nodes[id].Q = std::move(Q);
    return;
  }
  if (pm.paramonotone) {
    T.nodes[id].cut = 'h';
    double u1 = Q.g1.eval(Q.xc), u2 = Q.g2.eval(Q.xc);
    double m = 0.5 * (u1 + u2);
    double dchild = Q.d / 2;  // siblings share height exactly
    Pseudoquad lo = make_pseudoquad(f, Q.a, Q.b, u1, m, dchild);
    Pseudoquad hi = make_pseudoquad(f, Q.a, Q.b, m, u2, dchild);
    T.nodes[id].Q = std::move(Q);
    subdivide_rec(f, T, std::move(lo), id, depth + 1, max_depth, min_width,
                  node_samples, seed);
    subdivide_rec(f, T, std::move(hi), id, depth + 1, max_depth, min_width,
                  node_samples, seed);
  } else {
    T.nodes[id].cut = 'v';
    double c = Q.xc;
    double cl = 0.5 * (Q.a + c), cr = 0.5 * (c + Q.b);
    // children keep the parent height exactly (α halves exactly)
    Pseudoquad le =
        make_pseudoquad(f, Q.a, c, Q.g1.eval(cl), Q.g2.eval(cl), Q.d);
    Pseudoquad ri =
        make_pseudoquad(f, c, Q.b, Q.g1.eval(cr), Q.g2.eval(cr), Q.d);
    T.nodes[id].Q = std::move(Q);
    subdivide_rec(f, T, std::move(le), id, depth + 1, max_depth, min_width,
                  node_samples, seed);
    subdivide_rec(f, T, std::move(ri), id, depth + 1, max_depth, min_width,
                  node_samples, seed);
  }
}
}  // namespace

PatchworkTree subdivide(const ScalarField& f, const Pseudoquad& root,
                        double eta, double R, double r, int max_depth,
                        double min_width, long long node_samples,
                        uint64_t seed) {
  PatchworkTree T;
  T.eta = eta;
  T.R = R;
  T.r = r;
  T.seed = seed;
  subdivide_rec(f, T, root, -1, 0, max_depth, min_width, node_samples, seed);
  return T;
}

double weight(const PatchworkTree& tree,
              const std::function<bool(const PatchNode&)>& select) {
  double acc = 0;
  for (auto& nd : tree.nodes)
    if (!select || select(nd)) acc += nd.weight;
  return acc;
}

double carleson_ratio(const PatchworkTree& tree) {
  // post-order subtree sums of vertically cut weights (children have larger
  // ids than their parent, so a reverse sweep is a valid post-order)
  std::vector<double> sub(tree.nodes.size(), 0);
  for (int i = int(tree.nodes.size()) - 1; i >= 0; --i) {
    const PatchNode& nd = tree.nodes[i];
    sub[i] = nd.cut == 'v' ? nd.weight : 0.0;
    for (int c : nd.child)
      if (c >= 0) sub[i] += sub[c];
  }
  double best = 0;
  for (size_t i = 0; i < tree.nodes.size(); ++i)
    best = std::max(best, sub[i] / tree.nodes[i].Q.area);
  return best;
}

PlaneFit approx_plane(const ScalarField& f, const Pseudoquad& Q) {
  // model region 10Q: x ∈ 10I (concentric), z = h(x) + s·10d, |s| ≤ 1
  int nx = 96, ns = 96;
  double hw = 5 * Q.delta_x;
  std::vector<double> vals(size_t(nx) * ns), xs(nx);
  double Sx = 0, Sxx = 0, Sy = 0, Sxy = 0;
  for (int i = 0; i < nx; ++i) {
    double x = Q.xc - hw + 2 * hw * (i + 0.5) / nx;
    xs[i] = x;
    for (int j = 0; j < ns; ++j) {
      double s = -1 + 2.0 * (j + 0.5) / ns;
      double v = f.eval(x, Q.h(x) + s * 10 * Q.d);
      vals[size_t(i) * ns + j] = v;
      Sx += x;
      Sxx += x * x;
      Sy += v;
      Sxy += x * v;
    }
  }
  double n = double(nx) * ns;
  double det = n * Sxx - Sx * Sx;
  PlaneFit fit;
  fit.b = (n * Sxy - Sx * Sy) / det;
  fit.a = (Sy - fit.b * Sx) / n;
  double l1 = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ns; ++j)
      l1 += std::fabs(fit.a + fit.b * xs[i] - vals[size_t(i) * ns + j]);
  l1 /= n;                                      // mean |F−ψ| over 10Q
  double area10 = 10 * Q.delta_x * 10 * Q.delta_z;  // |10Q| in the model
  fit.residual = l1 * area10 * Q.delta_x / (Q.area * Q.delta_z);
  return fit;
}

void annotate_planes(const ScalarField& f, PatchworkTree& tree) {
  for (auto& nd : tree.nodes) {
    PlaneFit fit = approx_plane(f, nd.Q);
    nd.plane_a = fit.a;
    nd.plane_b = fit.b;
    nd.plane_residual = fit.residual;
  }
}

double vper_bound_check(const PatchworkTree& tree, const ScalarField& f) {
  const Pseudoquad& Q = tree.nodes[0].Q;
  double log4 = std::log(4.0);
  double t0 = -std::log(Q.delta_z) / log4;
  double dzmin = Q.delta_z;
  double sigma = 0;
  bool need_planes = false;
  for (auto& nd : tree.nodes) {
    dzmin = std::min(dzmin, nd.Q.delta_z);
    if (nd.cut == 'h' && nd.plane_residual < 0) need_planes = true;
  }
  double t1 = -std::log(dzmin) / log4 + 1;
  Rect E{Q.a, Q.b, Q.h(Q.xc) - Q.d, Q.h(Q.xc) + Q.d};
  QuadSpec q;
  q.npts = 1 << 17;
  ScaleProfile prof =
      profile(f, E, t0, t1, int(std::ceil((t1 - t0) * 8)) + 1, q);
  double num = lq_norm(prof, 4, t0, t1);
  if (num == 0) return 0;  // plane fields: nothing to bound
  for (auto& nd : tree.nodes)
    if (nd.cut == 'h') {
      double res =
          nd.plane_residual >= 0 && !need_planes
              ? nd.plane_residual
              : approx_plane(f, nd.Q).residual;
      sigma = std::max(sigma, res);
    }
  if (sigma == 0) return INFINITY;
  double Wv = 0;
  for (auto& nd : tree.nodes) Wv += nd.weight;
  return num / (sigma * std::pow(Q.area, 0.75) * std::pow(Wv, 0.25));
}

std::string PatchworkTree::json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (size_t i = 0; i < nodes.size(); ++i) {
    const PatchNode& nd = nodes[i];
    nlohmann::json j{{"id", i},
                     {"parent", nd.parent},
                     {"cut", std::string(1, nd.cut)},
                     {"x0", nd.Q.a},
                     {"x1", nd.Q.b},
                     {"delta_z", nd.Q.delta_z},
                     {"aspect", nd.Q.aspect},
                     {"area", nd.Q.area},
                     {"omega_density", nd.density},
                     {"weight", nd.weight},
                     {"rectilinearity", nd.Q.rectilinearity}};
    if (nd.plane_residual >= 0)
      j["plane"] = {{"a", nd.plane_a},
                    {"b", nd.plane_b},
                    {"sigma_residual", nd.plane_residual}};
    arr.push_back(std::move(j));
  }
  return arr.dump(1);
}

}  // namespace hvp
