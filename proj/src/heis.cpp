#include "hvp/heis.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace hvp {

Pt apply(const Automorphism& f, const Pt& p) {
  if (auto* s = std::get_if<Stretch>(&f)) {
    if (s->a == 0 || s->b == 0)
      throw std::invalid_argument("degenerate stretch");
    return {s->a * p.x, s->b * p.y, s->a * s->b * p.z};
  }
  if (auto* s = std::get_if<Shear>(&f))
    return {p.x, p.y + s->b * p.x, p.z};
  if (auto* r = std::get_if<Rotate>(&f)) {
    double c = std::cos(r->theta), s = std::sin(r->theta);
    return {c * p.x - s * p.y, s * p.x + c * p.y, p.z};
  }
  return mul(std::get<LeftTranslate>(f).g, p);
}

Pt induced_v0(const Automorphism& f, const Pt& v) {
  return project_v0(apply(f, v));
}

std::pair<double, double> cc_bounds(const Pt& p) {
  double upper =
      std::fabs(p.x) + std::fabs(p.y) + 4.0 * std::sqrt(std::fabs(p.z));
  double lower = std::max(std::hypot(p.x, p.y), 0.25 * upper);
  return {lower, upper};
}

namespace {
// x,y stay within ±n ≤ ±2^11; two_z within ±2^26 for any feasible ball.
inline uint64_t key(int64_t x, int64_t y, int64_t tz) {
  return (uint64_t(x + 2048) << 52) | (uint64_t(y + 2048) << 40) |
         uint64_t(tz + (int64_t(1) << 27));
}
}  // namespace

std::vector<WordBallEntry> word_ball(int n, std::size_t guard) {
  std::vector<WordBallEntry> out;
  std::unordered_map<uint64_t, int> seen;
  out.push_back({0, 0, 0, 0});
  seen.emplace(key(0, 0, 0), 0);
  std::size_t frontier_begin = 0;
  for (int d = 1; d <= n; ++d) {
    std::size_t frontier_end = out.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      WordBallEntry g = out[i];
      // generator order X, X⁻¹, Y, Y⁻¹; in doubled-z coordinates
      // (x,y,tz)·(dx,dy,0) = (x+dx, y+dy, tz + x·dy − y·dx).
      const int64_t dx[4] = {1, -1, 0, 0};
      const int64_t dy[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int64_t x = g.x + dx[k], y = g.y + dy[k];
        int64_t tz = g.two_z + g.x * dy[k] - g.y * dx[k];
        if (seen.emplace(key(x, y, tz), d).second) {
          out.push_back({x, y, tz, d});
          if (out.size() > guard)
            throw std::length_error("word_ball element guard exceeded");
        }
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

}  // namespace hvp
