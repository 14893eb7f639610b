// hvp: command-line front end tying the modules into reproducible
// experiments. Every run echoes its configuration into a JSON sidecar next
// to its outputs; identical config + seed gives byte-identical outputs.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "hvp/bumpy.hpp"
#include "hvp/check.hpp"
#include "hvp/corona.hpp"
#include "hvp/embed.hpp"
#include "hvp/field.hpp"
#include "hvp/nonmono.hpp"
#include "hvp/util.hpp"
#include "hvp/vper.hpp"
#include "json.hpp"

using json = nlohmann::json;
using clk = std::chrono::steady_clock;

namespace {

void sidecar(const std::string& out_path, const json& config, double secs) {
  json j{{"config", config},
         {"wall_seconds", secs},
         {"threads", hvp::thread_count()}};
  std::ofstream o(out_path + ".meta.json");
  o << j.dump(2) << "\n";
}

// Shared field source: either a saved grid file or a bumpy construction.
struct FieldOpts {
  std::string file;
  int alpha = 2;
  long long rho = 8;
  int layers = 3;
  int grid = 2048;

  void attach(CLI::App* cmd) {
    cmd->add_option("--field", file, "saved field file (overrides --alpha..)");
    cmd->add_option("--alpha", alpha, "bumpy aspect parameter");
    cmd->add_option("--rho", rho, "bumpy scale ratio (>= 8)");
    cmd->add_option("--layers", layers, "bumpy layer count");
    cmd->add_option("--grid", grid, "construction grid resolution");
  }
  std::shared_ptr<const hvp::ScalarField> make() const {
    if (!file.empty())
      return std::make_shared<hvp::GridField>(hvp::GridField::load(file));
    return hvp::build(hvp::BumpyParams{alpha, rho, layers, grid}).psi;
  }
  json echo() const {
    return file.empty() ? json{{"alpha", alpha},
                               {"rho", rho},
                               {"layers", layers},
                               {"grid", grid}}
                        : json{{"field", file}};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for intrinsic graphs in the Heisenberg "
               "group"};
  app.require_subcommand(1);

  // ---- surface: build + verify, optional grid snapshot
  auto* c_surf = app.add_subcommand("surface", "bumpy surface build + verify");
  FieldOpts surf_f;
  surf_f.attach(c_surf);
  std::string surf_out;
  long long surf_budget = 200000;
  uint64_t surf_seed = 7;
  c_surf->add_option("--out", surf_out, "write a grid snapshot field file");
  c_surf->add_option("--budget", surf_budget, "verification sample budget");
  c_surf->add_option("--seed", surf_seed, "verification seed");

  // ---- vper: profile + Lq norms
  auto* c_vper = app.add_subcommand("vper", "vertical perimeter profile + Lq");
  FieldOpts vper_f;
  vper_f.attach(c_vper);
  double vp_amin = 0, vp_amax = 8, vp_q = 2;
  int vp_steps = 64;
  long long vp_npts = 1 << 16;
  std::string vp_out = "vper.csv";
  c_vper->add_option("--amin", vp_amin, "profile start scale");
  c_vper->add_option("--amax", vp_amax, "profile end scale");
  c_vper->add_option("--steps", vp_steps, "profile steps");
  c_vper->add_option("--npts", vp_npts, "quadrature budget per scale");
  c_vper->add_option("--lq", vp_q, "norm exponent reported in the sidecar");
  c_vper->add_option("--out", vp_out, "CSV output path");

  // ---- omega: nonmonotonicity estimate
  auto* c_om = app.add_subcommand("omega", "parametric nonmonotonicity");
  FieldOpts om_f;
  om_f.attach(c_om);
  double om_R = 1.0;
  long long om_n = 100000;
  uint64_t om_seed = 1;
  std::string om_out = "omega.json";
  double om_rect[4] = {0, 1, 0, 1};
  c_om->add_option("--radius", om_R, "interval length cutoff R");
  c_om->add_option("--nsamples", om_n, "line sample budget");
  c_om->add_option("--seed", om_seed, "sampling seed");
  c_om->add_option("--x0", om_rect[0], "region x0");
  c_om->add_option("--x1", om_rect[1], "region x1");
  c_om->add_option("--z0", om_rect[2], "region z0");
  c_om->add_option("--z1", om_rect[3], "region z1");
  c_om->add_option("--out", om_out, "JSON output path");

  // ---- corona: subdivision + diagnostics
  auto* c_cor = app.add_subcommand("corona", "patchwork subdivision");
  FieldOpts cor_f;
  cor_f.attach(c_cor);
  double cor_eta = 0.05, cor_R = 8, cor_r = 4, cor_minw = 1e-4;
  double cor_lo = 0.3, cor_hi = 0.7, cor_a = 0, cor_b = 1;
  int cor_depth = 10, cor_node = -1;
  long long cor_ns = 256;
  uint64_t cor_seed = 11;
  std::string cor_out = "corona.json";
  c_cor->add_option("--eta", cor_eta, "paramonotonicity threshold");
  c_cor->add_option("--R", cor_R, "interval cutoff multiplier");
  c_cor->add_option("--r", cor_r, "concentric region multiplier");
  c_cor->add_option("--depth", cor_depth, "max tree depth");
  c_cor->add_option("--min-width", cor_minw, "minimum pseudoquad width");
  c_cor->add_option("--node-samples", cor_ns, "line samples per node");
  c_cor->add_option("--seed", cor_seed, "sampling seed");
  c_cor->add_option("--a", cor_a, "root base left endpoint");
  c_cor->add_option("--b", cor_b, "root base right endpoint");
  c_cor->add_option("--lower-seed", cor_lo, "root lower curve seed height");
  c_cor->add_option("--upper-seed", cor_hi, "root upper curve seed height");
  c_cor->add_option("--node", cor_node,
                    "report W(V_V below v) and the per-scale "
                    "nonmonotonicity sum for this node id");
  c_cor->add_option("--out", cor_out, "JSON output path");

  // ---- embed: distortion harness
  auto* c_emb = app.add_subcommand("embed", "cut-metric distortion harness");
  FieldOpts emb_f;
  emb_f.attach(c_emb);
  int emb_n = 8;
  long long emb_k = 1 << 16, emb_pairs = 2000;
  std::string emb_csv = "harness.csv", emb_json = "harness.json";
  c_emb->add_option("--n", emb_n, "word-ball radius");
  c_emb->add_option("--k", emb_k, "scale budget k");
  c_emb->add_option("--max-pairs", emb_pairs, "pair sample cap");
  c_emb->add_option("--csv", emb_csv, "per-pair CSV path");
  c_emb->add_option("--json", emb_json, "summary JSON path");

  // ---- wordmetric: ball CSV
  auto* c_wm = app.add_subcommand("wordmetric", "integer word-metric ball");
  int wm_n = 5;
  std::string wm_out = "ball.csv";
  c_wm->add_option("--radius", wm_n, "ball radius");
  c_wm->add_option("--out", wm_out, "CSV output path");

  // ---- check: acceptance suite
  auto* c_chk = app.add_subcommand("check", "full acceptance suite");
  std::string chk_fix = "tests/fixtures";
  std::string chk_suite = "core";
  c_chk->add_option("--fixtures", chk_fix, "regression fixture directory");
  c_chk->add_option("--suite", chk_suite, "suite name (core)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help/version exit cleanly; every parse failure is a validation error
    return app.exit(e) == 0 ? 0 : 1;
  }
  auto t0 = clk::now();
  auto secs = [&] {
    return std::chrono::duration<double>(clk::now() - t0).count();
  };

  try {
    if (*c_surf) {
      hvp::BumpyBuild b =
          hvp::build(hvp::BumpyParams{surf_f.alpha, surf_f.rho, surf_f.layers,
                                      surf_f.grid});
      hvp::InternalReport rep = hvp::verify_internal(b, surf_budget, surf_seed);
      json jr{{"sup_psi", rep.sup_psi},
              {"c_ortho", rep.c_ortho},
              {"c_prime", rep.c_prime}};
      for (const auto& l : rep.layers)
        jr["layers"].push_back({{"layer", l.layer},
                                {"sup_dpsi_dz", l.sup_dpsi_dz},
                                {"dtdz_min", l.dtdz_min},
                                {"dtdz_max", l.dtdz_max},
                                {"sup_D", l.sup_D},
                                {"l2_horiz", l.l2_horiz}});
      std::cout << jr.dump(2) << "\n";
      if (!surf_out.empty()) {
        hvp::GridField snap = hvp::GridField::sampled(
            surf_f.grid, surf_f.grid, {0, 1, 0, 1}, true,
            hvp::Interp::Bilinear,
            [&](double x, double z) { return b.psi->eval(x, z); });
        snap.save(surf_out);
        sidecar(surf_out,
                json{{"cmd", "surface"},
                     {"field", surf_f.echo()},
                     {"budget", surf_budget},
                     {"seed", surf_seed}},
                secs());
      }
    } else if (*c_vper) {
      auto f = vper_f.make();
      hvp::QuadSpec q;
      q.npts = vp_npts;
      hvp::ScaleProfile pr =
          hvp::profile(*f, f->window(), vp_amin, vp_amax, vp_steps, q);
      std::ofstream o(vp_out);
      o << "a,vpp\n";
      o.precision(17);
      for (size_t i = 0; i < pr.a.size(); ++i)
        o << pr.a[i] << "," << pr.v[i] << "\n";
      double lq = hvp::lq_norm(pr, vp_q, vp_amin, vp_amax);
      std::cout << "lq_norm(q=" << vp_q << ") = " << lq << "\n";
      sidecar(vp_out,
              json{{"cmd", "vper"},
                   {"field", vper_f.echo()},
                   {"amin", vp_amin},
                   {"amax", vp_amax},
                   {"steps", vp_steps},
                   {"npts", vp_npts},
                   {"quad", pr.quad},
                   {"lq_q", vp_q},
                   {"lq_norm", lq}},
              secs());
    } else if (*c_om) {
      auto f = om_f.make();
      hvp::RegionV0 U = hvp::RegionV0::rect(
          {om_rect[0], om_rect[1], om_rect[2], om_rect[3]});
      hvp::OmegaEstimate e = hvp::omega_p(*f, U, om_R, om_n, om_seed);
      std::ofstream o(om_out);
      o << e.json() << "\n";
      std::cout << e.json() << "\n";
      sidecar(om_out,
              json{{"cmd", "omega"},
                   {"field", om_f.echo()},
                   {"radius", om_R},
                   {"nsamples", om_n},
                   {"seed", om_seed}},
              secs());
    } else if (*c_cor) {
      auto f = cor_f.make();
      hvp::Pseudoquad root =
          hvp::make_pseudoquad(*f, cor_a, cor_b, cor_lo, cor_hi);
      hvp::PatchworkTree T = hvp::subdivide(*f, root, cor_eta, cor_R, cor_r,
                                            cor_depth, cor_minw, cor_ns,
                                            cor_seed);
      hvp::annotate_planes(*f, T);
      double carl = hvp::carleson_ratio(T);
      double vb = hvp::vper_bound_check(T, *f);
      json jr{{"nodes", T.nodes.size()},
              {"carleson_ratio", carl},
              {"vper_bound_ratio", vb},
              {"tree", json::parse(T.json())}};
      if (cor_node >= 0 && cor_node < int(T.nodes.size())) {
        // packing weight below the node vs its own multi-scale
        // nonmonotonicity sum: the two sides of the packing diagnostic
        std::vector<char> below(T.nodes.size(), 0);
        below[cor_node] = 1;
        for (size_t i = 0; i < T.nodes.size(); ++i)
          if (T.nodes[i].parent >= 0 && below[T.nodes[i].parent])
            below[i] = 1;
        double wv = hvp::weight(T, [&](const hvp::PatchNode& n) {
          return below[&n - T.nodes.data()] && n.cut == 'v';
        });
        const hvp::Pseudoquad& Q = T.nodes[cor_node].Q;
        double osum = 0;
        for (int i = 0; i <= 8; ++i) {
          hvp::OmegaEstimate e =
              hvp::omega_p(*f, Q.region(cor_r),
                           std::pow(2.0, -i) * cor_R * Q.delta_x, cor_ns,
                           hvp::mix_seed(cor_seed, 7000 + i));
          osum += e.value;
        }
        jr["node_report"] = {{"node", cor_node},
                             {"weight_v_below", wv},
                             {"omega_scale_sum", osum},
                             {"area", Q.area}};
      }
      std::ofstream o(cor_out);
      o << jr.dump(2) << "\n";
      std::cout << "nodes " << T.nodes.size() << ", carleson " << carl
                << ", vper ratio " << vb << "\n";
      sidecar(cor_out,
              json{{"cmd", "corona"},
                   {"field", cor_f.echo()},
                   {"eta", cor_eta},
                   {"R", cor_R},
                   {"r", cor_r},
                   {"depth", cor_depth},
                   {"min_width", cor_minw},
                   {"node_samples", cor_ns},
                   {"seed", cor_seed}},
              secs());
    } else if (*c_emb) {
      auto f = emb_f.make();
      hvp::Calibration k = hvp::calibrate(hvp::make_bump());
      hvp::CutMetricConfig cfg = hvp::CutMetricConfig::standard(
          f, k.r, k.R, emb_f.rho, emb_k, emb_f.layers);
      hvp::DistortionReport rep =
          hvp::distortion_harness(emb_n, cfg, emb_pairs);
      std::ofstream oc(emb_csv);
      oc << rep.csv();
      std::ofstream oj(emb_json);
      oj << rep.json_summary() << "\n";
      std::cout << rep.json_summary() << "\n";
      sidecar(emb_csv,
              json{{"cmd", "embed"},
                   {"field", emb_f.echo()},
                   {"n", emb_n},
                   {"k", emb_k},
                   {"max_pairs", emb_pairs}},
              secs());
    } else if (*c_wm) {
      auto ball = hvp::word_ball(wm_n);
      std::ofstream o(wm_out);
      o << "x,y,two_z,dist\n";
      for (const auto& e : ball)
        o << e.x << "," << e.y << "," << e.two_z << "," << e.dist << "\n";
      std::cout << "wrote " << ball.size() << " entries\n";
      sidecar(wm_out, json{{"cmd", "wordmetric"}, {"radius", wm_n}}, secs());
    } else if (*c_chk) {
      hvp::CheckSummary s = hvp::run_acceptance(chk_fix, std::cout);
      if (s.failed > 0) return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
