// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dtvar/cli.hpp"
#include "dtvar/dtvar.hpp"
#include "oracles.hpp"
#include "scene.hpp"

using namespace dtvar;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr int kC1Masks = 1000;
constexpr int kC1Side = 64;
constexpr double kC1DensityLo = 0.005;
constexpr double kC1DensityHi = 0.20;
constexpr double kC1Seconds = 5.0;
constexpr int kC2Masks = 200;
constexpr int kC2Side = 32;
constexpr double kC2Tol = 1e-9;
constexpr double kC3Bound = 1.0;
constexpr int kC4Shapes = 100;
constexpr int kC4Sequences = 50;
constexpr int kC4Frames = 20;
constexpr double kC5Rmse = 0.05;
constexpr int kC5Iters = 10000;
constexpr int kC6Trials = 50;
constexpr double kC6Share = 0.90;
constexpr double kC6Tol = 0.5;
constexpr int kC7Samples = 10000;
constexpr double kC7Slack = 1.05;
constexpr double kC7Eta = 0.01;
constexpr double kC7Radius = 3.0;
constexpr int kC8Points = 100;
constexpr double kC8GradTol = 1e-4;
constexpr double kC8SumTol = 1e-9;
constexpr double kC9CoordTol = 1e-9;
constexpr double kC9Rmse = 1e-6;
constexpr double kC10Low = 80.0;
constexpr double kC10High = 100.0;
constexpr double kC11StepTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << "violated: " << what;
    }
  }
};

struct Masks {
  std::vector<BinaryMask> items;
};

const Masks& criterion1_masks() {
  static const Masks m = [] {
    Masks out;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> density(kC1DensityLo, kC1DensityHi);
    for (int i = 0; i < kC1Masks; ++i) out.items.push_back(oracle::random_mask(rng, kC1Side, kC1Side, density(rng)));
    return out;
  }();
  return m;
}

void c1(Outcome& o) {
  const auto& masks = criterion1_masks().items;
  const auto t0 = std::chrono::steady_clock::now();
  int mismatches = 0;
  for (const BinaryMask& m : masks)
    if (!(chamfer_d8(m) == brute_force_dt(m, Metric::chessboard))) ++mismatches;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << masks.size() << " masks, " << mismatches << " mismatches, " << secs << " s (chamfer + brute force)";
  o.require(mismatches == 0, "chamfer differs from brute force");
  o.require(secs < kC1Seconds, "runtime >= 5 s");
}

void c2(Outcome& o) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> density(kC1DensityLo, kC1DensityHi);
  double worst = 0.0;
  for (int i = 0; i < kC2Masks; ++i) {
    const BinaryMask m = oracle::random_mask(rng, kC2Side, kC2Side, density(rng));
    worst = std::max(worst, oracle::max_abs_diff(exact_edt(m).values(), brute_force_dt(m, Metric::euclidean).values()));
  }
  o.detail << kC2Masks << " masks, max |edt - brute| = " << worst;
  o.require(worst <= kC2Tol, "difference above 1e-9");
}

void c3(Outcome& o) {
  double worst = 0.0;
  for (const BinaryMask& m : criterion1_masks().items) worst = std::max(worst, eikonal_residual(chamfer_d8(m)));
  o.detail << "max residual " << worst;
  o.require(worst <= kC3Bound, "residual above 1");
}

void c4(Outcome& o) {
  Rng rng(4);
  int checked_pixels = 0;
  int mismatches = 0;
  for (int i = 0; i < kC4Shapes; ++i) {
    const Shape sh = gen_shape(random_shape_spec(rng.next_u64(), 64, 12));
    const int dr = rng.range(-6, 6);
    const int dc = rng.range(-6, 6);
    const ScalarGrid shifted_dt = translate(chamfer_d8(sh.contour), dr, dc, -1.0);
    const BinaryMask moved_interior = translate<std::uint8_t>(sh.interior, dr, dc);
    const ScalarGrid dt_of_shifted = chamfer_d8(translate<std::uint8_t>(sh.contour, dr, dc));
    for (std::size_t p = 0; p < moved_interior.size(); ++p) {
      if (!moved_interior.values()[p]) continue;
      ++checked_pixels;
      if (shifted_dt.values()[p] != dt_of_shifted.values()[p]) ++mismatches;
    }
  }
  int dt_nonzero = 0;
  int below_texture = 0;
  for (int s = 0; s < kC4Sequences; ++s) {
    const ConstancyResult r = constancy_experiment(random_constancy_config(1000 + s, kC4Frames));
    if (r.dt != 0.0) ++dt_nonzero;
    if (r.dt < r.texture) ++below_texture;
  }
  o.detail << checked_pixels << " interior pixels, " << mismatches << " equivariance mismatches; DT variance 0 in "
           << (kC4Sequences - dt_nonzero) << "/" << kC4Sequences << ", below texture in " << below_texture << "/"
           << kC4Sequences;
  o.require(mismatches == 0, "shifted DT differs from DT of shifted");
  o.require(dt_nonzero == 0, "nonzero DT temporal variance");
  o.require(below_texture == kC4Sequences, "DT variance not below texture");
}

void c5(Outcome& o) {
  ShapeSpec disk;
  disk.kind = ShapeKind::disk;
  disk.size = 64;
  const Shape sh = gen_shape(disk);
  VarianceConfig cfg;
  cfg.iters = kC5Iters;
  const VarianceResult res = maximize_variance(sh.interior, sh.contour, cfg);
  const double rmse = relative_rmse(res.field, exact_edt(sh.contour), sh.interior);

  bool convex_ok = true;
  for (ShapeKind k : {ShapeKind::disk, ShapeKind::rectangle}) {
    ShapeSpec s;
    s.kind = k;
    const Shape c = gen_shape(s);
    const ScalarGrid dt = chamfer_d8(c.contour);
    double peak = 0.0;
    for (std::size_t i = 0; i < dt.size(); ++i)
      if (c.interior.values()[i]) peak = std::max(peak, dt.values()[i]);
    convex_ok &= level_set_histogram(dt, c.interior, static_cast<int>(peak) + 1).non_increasing_after_peak();
  }
  ShapeSpec sq;
  sq.kind = ShapeKind::rectangle;
  const Shape square = gen_shape(sq);
  const bool radial_monotone =
      level_set_histogram(centroid_distance(square.interior), square.interior, 32).non_increasing_after_peak();

  o.detail << "disk rel RMSE " << rmse << " after " << kC5Iters << " iters; convex DT histograms shrink: "
           << (convex_ok ? "yes" : "no") << "; centroid histogram monotone: " << (radial_monotone ? "yes" : "no");
  o.require(rmse <= kC5Rmse, "RMSE above 5%");
  o.require(convex_ok, "convex DT histogram increases past its peak");
  o.require(!radial_monotone, "centroid-distance histogram is monotone");
}

void c6(Outcome& o) {
  TranslationConfig base;
  base.tol = kC6Tol;
  const auto trials = translation_trials(kC6Trials, 6, 128, base);
  int wins = 0;
  for (const auto& t : trials)
    if (t.dt_iterations < t.uniform_iterations) ++wins;

  ShapeSpec rect;
  rect.kind = ShapeKind::rectangle;
  rect.size = 128;
  rect.extent = 0.4;
  const Shape sh = gen_shape(rect);
  const ScalarGrid a = filled_shape(sh, Fill::uniform);
  const ScalarGrid b = shift_bilinear(a, Point2{3.0, -2.0});
  const VectorField g = shift_gradient_map(a, b, Point2{-1.5, 1.5});
  BinaryMask core = sh.interior;
  for (int i = 0; i < 6; ++i) core = erode3x3(core);
  int nonzero = 0;
  for (int r = 0; r < 128; ++r)
    for (int c = 0; c < 128; ++c)
      if (core(r, c) && (g.at(r, c)[0] != 0.0 || g.at(r, c)[1] != 0.0)) ++nonzero;

  o.detail << "DT fill faster in " << wins << "/" << trials.size() << " paired trials; " << nonzero
           << " nonzero uniform interior gradient pixels";
  o.require(wins >= static_cast<int>(std::ceil(kC6Share * kC6Trials)), "DT faster in fewer than 90% of trials");
  o.require(nonzero == 0, "uniform interior gradient not zero");
}

void c7(Outcome& o) {
  ShapeSpec rect;
  rect.kind = ShapeKind::rectangle;
  const Shape sh = gen_shape(rect);
  const Point2 y{32.0, 18.0};
  bool ok = true;
  for (const char* name : {"identity", "sine"}) {
    const BoundEstimates b = estimate_bounds(RemapFunction::parse(name), sh, y, kC7Samples, 7);
    const double ratio = b.alpha_hat / (4.0 * b.k1);
    o.detail << name << ": alpha_hat/4K1 = " << ratio << "; ";
    ok &= b.alpha_hat <= 4.0 * b.k1 * kC7Slack;
  }
  const double eig = convexity_check(RemapFunction::parse("sine"), sh, y, kC7Eta, kC7Radius);
  o.detail << "min Hessian eigenvalue (eta 0.01, radius 3) = " << eig;
  o.require(ok, "sampled Lipschitz ratio above 4 K1 * 1.05");
  o.require(eig > 0.0, "Hessian not positive definite");
}

void c8(Outcome& o) {
  double worst_photo = 0.0;
  double worst_dist = 0.0;
  double worst_smooth = 0.0;
  for (int i = 0; i < kC8Points; ++i) {
    std::mt19937_64 rng(8000 + i);
    const MultiChannelImage rec = oracle::smooth_image(rng, 6, 7, 3, 0.1, 0.9);
    const MultiChannelImage tgt = oracle::smooth_image(rng, 6, 7, 3, 0.1, 0.9);
    const auto fp = [&](const MultiChannelImage& x) { return photometric(x, tgt); };
    worst_photo = std::max(worst_photo, finite_diff_check(fp, photometric_grad(rec, tgt), rec, 1e-6));
    const auto fdist = [&](const MultiChannelImage& x) { return dist_loss(x, tgt); };
    worst_dist = std::max(worst_dist, finite_diff_check(fdist, dist_loss_grad(rec, tgt), rec, 1e-7));
    const ScalarGrid d = oracle::smooth_field(rng, 6, 7, 1.0, 4.0);
    const ScalarGrid e = oracle::smooth_field(rng, 6, 7, 0.0, 1.0);
    const SmoothGrad sg = smooth_s_grad(d, e, 5.0);
    const auto fsd = [&](const ScalarGrid& x) { return smooth_s(x, e, 5.0).total(); };
    const auto fse = [&](const ScalarGrid& x) { return smooth_s(d, x, 5.0).total(); };
    worst_smooth = std::max(worst_smooth, finite_diff_check(fsd, sg.d_depth, d, 1e-6));
    worst_smooth = std::max(worst_smooth, finite_diff_check(fse, sg.d_edge, e, 1e-6));
  }

  // Pseudo-label mass on a roof-with-step scene.
  const Intrinsics k{20.0, 20.0, 12.0, 8.0};
  ScalarGrid depth(16, 24);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 24; ++c) {
      const double a = c < 12 ? 0.8 : -0.8;
      depth(r, c) = 5.0 / (1.0 - a * (c - 12.0) / 20.0) + (r >= 8 ? 0.5 : 0.0);
    }
  const PseudoLabelPair p = pseudo_labels(depth, normals_from_depth(depth, k));
  double sd = 0.0, sn = 0.0;
  for (double v : p.w_d.values()) sd += v;
  for (double v : p.w_n.values()) sn += v;

  // 3x3 edge fixture with hand-evaluated terms.
  ScalarGrid e(3, 3);
  const double ev[9] = {0.9, 0.2, 0.5, 0.0, 1.0, 0.3, 0.7, 0.4, 0.6};
  std::copy(ev, ev + 9, e.values().begin());
  PseudoLabelPair lab{ScalarGrid(3, 3, 0.0), ScalarGrid(3, 3, 0.0)};
  lab.w_d(0, 0) = 0.6;
  lab.w_d(1, 1) = 0.4;
  lab.w_n(0, 1) = 0.5;
  lab.w_n(2, 2) = 0.5;
  const EdgeTerms t = edge_supervision(e, lab, LossWeights{});
  const double pseudo = 0.18;
  const double contrast = -std::log(0.9) - std::log(0.8) - std::log(0.5) - 2.0 * std::log(1.0 - 1e-6) -
                          2.0 * std::log(0.7) - 2.0 * std::log(0.6);
  const double energy = 3.2;
  const double total = pseudo + 0.001 * contrast + energy;
  const double fixture_err = std::max({std::abs(t.pseudo - pseudo), std::abs(t.contrast - contrast),
                                       std::abs(t.energy - energy), std::abs(t.total - total)});

  o.detail << "max rel grad error photo " << worst_photo << ", dist " << worst_dist << ", smooth " << worst_smooth
           << "; sum w_d " << sd << ", sum w_n " << sn << "; edge fixture error " << fixture_err;
  o.require(std::max({worst_photo, worst_dist, worst_smooth}) < kC8GradTol, "gradient mismatch >= 1e-4");
  o.require(std::abs(sd - 1.0) <= kC8SumTol && std::abs(sn - 1.0) <= kC8SumTol, "pseudo-label mass not 1");
  o.require(fixture_err <= 1e-12, "edge supervision fixture mismatch");
}

void c9(Outcome& o) {
  const Intrinsics k{40.0, 42.0, 15.5, 11.5};
  const int h = 24, w = 32;
  MultiChannelImage target(h, w, 6);
  for (int ch = 0; ch < 6; ++ch)
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) target(ch, r, c) = scene::tex(ch, r, c);
  std::mt19937_64 rng(9);
  const Sampled id = reconstruct(target, oracle::smooth_field(rng, h, w, 1.0, 4.0), RigidPose{}, k);
  const bool exact = id.image == target && count_set(id.valid) == id.valid.size();

  const double depth = 2.5;
  const double tx = 0.37;
  const WarpField wf = warp_coords(ScalarGrid(h, w, depth), RigidPose{0, 0, 0, tx, 0, 0}, k);
  double coord_err = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      coord_err = std::max(coord_err, std::abs(wf.coords.at(r, c)[0] - c - k.fx * tx / depth));
      coord_err = std::max(coord_err, std::abs(wf.coords.at(r, c)[1] - r));
    }

  const double shift_tx = 4.0 * depth / k.fx;
  const Sampled sh = reconstruct(target, ScalarGrid(h, w, depth), RigidPose{0, 0, 0, shift_tx, 0, 0}, k);
  double se = 0.0;
  int n = 0;
  for (int ch = 0; ch < 6; ++ch)
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        if (sh.valid(r, c)) {
          se += std::pow(sh.image(ch, r, c) - target(ch, r, c + 4), 2);
          ++n;
        }
  const double rmse = n ? std::sqrt(se / n) : 1.0;
  o.detail << "identity bit-exact: " << (exact ? "yes" : "no") << "; max coordinate error " << coord_err
           << "; integer-shift RMSE " << rmse << " over " << n << " samples";
  o.require(exact, "identity reconstruction not bit-exact");
  o.require(coord_err <= kC9CoordTol, "coordinate shift off by more than 1e-9");
  o.require(n > 0 && rmse < kC9Rmse, "integer-shift RMSE >= 1e-6");
}

void c10(Outcome& o) {
  // Gaussian profile (sigma 1.5 px) around the outline of a 28x28 square.
  ScalarGrid e(48, 48);
  for (int r = 0; r < 48; ++r)
    for (int c = 0; c < 48; ++c) {
      const double dx = std::max({10 - c, c - 37, 0});
      const double dy = std::max({10 - r, r - 37, 0});
      const double d = (dx > 0 || dy > 0) ? std::hypot(dx, dy) : std::min({r - 10, 37 - r, c - 10, 37 - c});
      e(r, c) = std::exp(-d * d / 4.5);
    }
  const BinaryMask loop = postprocess(e);
  const bool thin = oracle::is_thin_closed_loop(loop);

  ScalarGrid e255 = e;
  for (double& v : e255.values()) v *= 255.0;
  const BinaryMask kept = hysteresis(e255, kC10Low, kC10High);
  bool kept_ok = kept == oracle::flood_hysteresis(e255, kC10Low, kC10High);
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (kept.values()[i] && e255.values()[i] < kC10Low) kept_ok = false;

  std::mt19937_64 rng(10);
  bool product_ok = true;
  for (int t = 0; t < 100; ++t) {
    const BinaryMask a = oracle::random_mask(rng, 32, 32, 0.5);
    const BinaryMask b = oracle::random_mask(rng, 32, 32, 0.5);
    const BinaryMask m = edge_binary(a, b);
    for (std::size_t i = 0; i < m.size(); ++i)
      product_ok &= (m.values()[i] != 0) == (a.values()[i] * b.values()[i] > 0);
  }
  o.detail << "loop pixels " << count_set(loop) << ", thin closed loop: " << (thin ? "yes" : "no")
           << "; hysteresis matches flood fill: " << (kept_ok ? "yes" : "no")
           << "; edge_binary matches product: " << (product_ok ? "yes" : "no");
  o.require(thin, "postprocess output is not a single thin closed loop");
  o.require(kept_ok, "hysteresis keep rule");
  o.require(product_ok, "edge_binary product");
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void c11(Outcome& o) {
  const fs::path root = fs::temp_directory_path() / "dtvar_acceptance" / "c11";
  fs::remove_all(root);
  scene::write(root / "in");
  BinaryMask m = criterion1_masks().items.front();
  io::write_pbm(root / "in" / "c.pbm", m);

  auto invoke = [&](const fs::path& out) {
    fs::create_directories(out);
    std::ostringstream so, se;
    const std::vector<std::vector<std::string>> cmds = {
        {"dt", "--in", (root / "in" / "c.pbm").string(), "--out", (out / "d.dtvg").string()},
        {"rw-encode", "--in", (out / "d.dtvg").string(), "--out", (out / "enc.dtvg").string(), "--path-out",
         (out / "path.csv").string(), "--seed", "11"},
        {"edges", "post", "--in", (root / "in" / "edge.dtvg").string(), "--out", (out / "c.pbm").string()},
        {"warp", "--depth", (root / "in" / "depth.dtvg").string(), "--pose", scene::kPose, "--K",
         scene::kIntrinsics, "--in", (root / "in" / "image.ppm").string(), "--out", (out / "rec.dtvg").string(),
         "--mask", (out / "valid.pbm").string()},
        {"verify", "thm2", "--trials", "3", "--seed", "11", "--out", (out / "thm2.csv").string()},
        {"verify", "constancy", "--frames", "6", "--sequences", "3", "--seed", "11", "--out",
         (out / "const.csv").string()},
        {"verify", "bounds", "--samples", "400", "--seed", "11", "--out", (out / "bounds.csv").string()},
        {"pipeline", "--depth", (root / "in" / "depth.dtvg").string(), "--K", scene::kIntrinsics, "--pose",
         scene::kPose, "--image", (root / "in" / "image.ppm").string(), "--target",
         (root / "in" / "target.ppm").string(), "--edge", (root / "in" / "edge.dtvg").string(), "--out-dir",
         (out / "pipe").string(), "--seed", "11"},
    };
    int failures = 0;
    for (const auto& c : cmds)
      if (cli::run(c, so, se) != cli::exit_ok) ++failures;
    return std::pair{failures, so.str()};
  };
  const auto [fa, outa] = invoke(root / "a");
  const auto [fb, outb] = invoke(root / "b");

  int files = 0;
  int differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) ++differing;
  }

  const RandomWalkPath path = make_rw_path(3, 128, default_rw_eps, default_rw_partitions, 11);
  double worst_step = 0.0;
  for (int i = 1; i <= path.steps(); ++i) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += std::pow(path.point(i)[d] - path.point(i - 1)[d], 2);
    worst_step = std::max(worst_step, std::abs(std::sqrt(s) - default_rw_eps));
  }
  o.detail << files << " output files, " << differing << " differ; command failures " << fa + fb
           << "; max |step - eps| " << worst_step;
  o.require(fa == 0 && fb == 0, "a command failed");
  o.require(files > 10 && differing == 0 && outa == outb, "outputs not byte-identical");
  o.require(worst_step <= kC11StepTol, "random-walk step norm off by more than 1e-12");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"chamfer d8 equals brute-force chessboard", c1},
      {"exact EDT equals brute-force Euclidean", c2},
      {"Eikonal residual bound", c3},
      {"constancy and equivariance", c4},
      {"variance maximisation and level sets", c5},
      {"shift recovery with distance fill", c6},
      {"Lipschitz and convexity bounds", c7},
      {"loss gradients, pseudo-label mass, edge fixture", c8},
      {"warp correctness", c9},
      {"post-processing", c10},
      {"determinism", c11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first
              << "): " << o.detail.str() << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size()
            << std::endl;
  return failed ? 1 : 0;
}
