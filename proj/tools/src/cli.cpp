#include "dtvar/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "dtvar/dtvar.hpp"

namespace dtvar::cli {
namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Output helpers

std::string fmt_num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

/// CSV text that goes to a file when a path is given, else to stdout.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }

  template <typename... Cols>
  void add(const Cols&... cols) {
    std::vector<std::string> cells;
    (cells.push_back(cell(cols)), ...);
    row(cells);
  }

  void emit(const std::string& path, std::ostream& fallback) const {
    if (path.empty()) {
      fallback << text_.str();
      return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(Errc::io_error, "cannot write " + path);
    f << text_.str();
  }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(std::string_view s) { return std::string(s); }
  static std::string cell(double v) { return fmt_num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) text_ << (i ? "," : "") << cells[i];
    text_ << '\n';
  }

  std::ostringstream text_;
};

std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "'" + item + "' is not a number");
    }
  }
  if (out.size() != expected) {
    throw CLI::ValidationError(flag, "expected " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

Intrinsics parse_intrinsics(const std::string& text) {
  const auto v = parse_list(text, 4, "--K");
  Intrinsics k{v[0], v[1], v[2], v[3]};
  k.validate();
  return k;
}

RigidPose parse_pose(const std::string& text) {
  const auto v = parse_list(text, 6, "--pose");
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

MultiChannelImage channel_range(const MultiChannelImage& img, int first, int count) {
  std::vector<ScalarGrid> planes;
  for (int c = first; c < first + count; ++c) planes.push_back(img.channel(c));
  return MultiChannelImage::from_channels(planes);
}

void write_path_csv(const std::string& path, const RandomWalkPath& rw, std::ostream& out) {
  std::vector<std::string> header{"index"};
  for (int d = 0; d < rw.dim(); ++d) header.push_back("x" + std::to_string(d + 1));
  Csv csv(header);
  for (int i = 0; i <= rw.steps(); ++i) {
    std::ostringstream line;
    line << i;
    for (double v : rw.point(i)) line << ',' << fmt_num(v);
    csv.add(line.str());
  }
  csv.emit(path, out);
}

// ---------------------------------------------------------------------------
// Option sets, one per leaf command

struct DtOpts {
  std::string metric = "d8";
  std::string norm = "chessboard";
  std::string in, out, remap;
};

struct RwOpts {
  std::string in, out, path_out;
  int dims = 3;
  double eps = default_rw_eps;
  int k = default_rw_partitions;
  long long seed = 0;
  int steps = 0;
};

struct EdgesOpts {
  std::string in, out;
  double low = 80.0;
  double high = 100.0;
  int min_comp = 20;
  int gap = 3;
};

struct PseudoOpts {
  std::string depth, normals, k, out_wd, out_wn, out_normals, out;
};

struct WeightOpts {
  LossWeights w;
  void add(CLI::App* app) {
    app->add_option("--lambda-d", w.lambda_d, "pseudo-label weight for depth");
    app->add_option("--lambda-n", w.lambda_n, "pseudo-label weight for normals");
    app->add_option("--lambda-e", w.lambda_e, "edge energy weight");
    app->add_option("--lambda-c", w.lambda_c, "contrastive BCE weight");
    app->add_option("--lambda-photo", w.lambda_photo, "photometric weight");
    app->add_option("--lambda-dist", w.lambda_dist, "distance-channel weight");
    app->add_option("--lambda-s", w.lambda_s, "smoothness weight");
    app->add_option("--lambda-ns", w.lambda_ns, "normal smoothness weight");
    app->add_option("--alpha", w.alpha_edge, "edge sharpness in exp(-alpha E)");
    app->add_option("--ssim-weight", w.ssim_weight, "SSIM share of the photometric mix");
  }
};

struct LossOpts {
  std::string kind = "total";
  std::string rec, target, mask, rec_dt, target_dt, depth, edge, wd, wn, normals, image, out;
  WeightOpts weights;
};

struct WarpOpts {
  std::string depth, pose, k, in, out, mask;
};

struct Thm1Opts {
  std::string shape = "disk";
  int size = 64;
  double extent = 0.875;
  double mu = 10.0;
  double lr = 0.01;
  int iters = 10000;
  int every = 100;
  double tolerance = 1e-3;
  long long seed = 0;
  std::string out, snapshot;
};

struct Thm2Opts {
  std::string fill = "both";
  int trials = 50;
  int canvas = 128;
  double lr = 1.0;
  int max_iters = 2000;
  double tol = 0.5;
  long long seed = 0;
  std::string out, curve;
};

struct BoundsOpts {
  std::string g = "sine";
  std::string shape = "rectangle";
  int size = 64;
  double extent = 0.875;
  int samples = 10000;
  double eta = 0.01;
  double radius = 3.0;
  std::string y;
  long long seed = 0;
  std::string out;
};

struct ConstancyOpts {
  int frames = 20;
  int sequences = 50;
  int size = 96;
  int max_motion = 8;
  double sigma = 0.02;
  long long seed = 0;
  std::string out;
};

struct LevelsOpts {
  std::string shape = "rectangle";
  int size = 64;
  double extent = 0.875;
  int bins = 0;
  long long seed = 0;
  std::string out, snapshot;
};

struct PipelineOpts {
  std::string depth, k, pose, image, target, edge, target_edge, out_dir;
  int dims = 3;
  double eps = default_rw_eps;
  int rw_k = default_rw_partitions;
  long long seed = 0;
  EdgesOpts edges;
  WeightOpts weights;
};

void add_seed(CLI::App* app, long long& seed) {
  app->add_option("--seed", seed, "random seed (falls back to DTVAR_SEED)");
}

void add_edge_params(CLI::App* app, EdgesOpts& o) {
  app->add_option("--low", o.low, "hysteresis low threshold on the 0..255 scale");
  app->add_option("--high", o.high, "hysteresis high threshold on the 0..255 scale");
  app->add_option("--min-comp", o.min_comp, "smallest kept component in pixels")->check(CLI::NonNegativeNumber);
  app->add_option("--gap", o.gap, "largest bridged endpoint gap in pixels")->check(CLI::NonNegativeNumber);
}

PostprocessParams post_params(const EdgesOpts& o) {
  PostprocessParams p;
  p.low = o.low;
  p.high = o.high;
  p.refine.min_component = o.min_comp;
  p.refine.gap_max = o.gap;
  return p;
}

ShapeSpec make_spec(const std::string& kind, int size, double extent, long long seed) {
  ShapeSpec s;
  s.kind = parse_shape_kind(kind);
  s.size = size;
  s.extent = extent;
  s.seed = static_cast<std::uint64_t>(seed);
  return s;
}

const std::vector<std::string> kShapes{"rectangle", "star", "polygon", "disk"};
const std::vector<std::string> kRemaps{"identity", "square", "sine", "parabola"};

// ---------------------------------------------------------------------------
// Handlers

void do_dt(const DtOpts& o) {
  const BinaryMask mask = io::read_mask(o.in);
  ScalarGrid dt;
  if (o.metric == "d8") {
    dt = chamfer_d8(mask);
  } else if (o.metric == "euclid") {
    dt = exact_edt(mask);
  } else {
    dt = brute_force_dt(mask, o.norm == "euclidean" ? Metric::euclidean : Metric::chessboard);
  }
  if (!o.remap.empty()) dt = remap(dt, RemapFunction::parse(o.remap));
  io::write_dtvg(o.out, dt);
}

void do_rw(const RwOpts& o, std::ostream& out) {
  const ScalarGrid dt = io::read_scalar(o.in);
  const int steps = o.steps > 0 ? o.steps : dt.height() + dt.width();
  const RandomWalkPath path = make_rw_path(o.dims, steps, o.eps, o.k, static_cast<std::uint64_t>(o.seed));
  io::write_dtvg(o.out, rw_encode(dt, path));
  if (!o.path_out.empty()) write_path_csv(o.path_out, path, out);
}

void do_edges(const EdgesOpts& o) {
  const ScalarGrid e = io::read_scalar(o.in);
  io::write_pbm(o.out, postprocess(e, post_params(o)));
}

void do_pseudo(const PseudoOpts& o, std::ostream& out) {
  const ScalarGrid depth = io::read_scalar(o.depth);
  VectorField normals;
  if (!o.normals.empty()) {
    normals = io::to_vector_field(io::read_dtvg(o.normals));
  } else if (!o.k.empty()) {
    normals = normals_from_depth(depth, parse_intrinsics(o.k));
  } else {
    throw CLI::ValidationError("--normals", "either --normals or --K is required");
  }
  const PseudoLabelPair labels = pseudo_labels(depth, normals);
  io::write_dtvg(o.out_wd, labels.w_d);
  io::write_dtvg(o.out_wn, labels.w_n);
  if (!o.out_normals.empty()) io::write_dtvg(o.out_normals, io::to_image(normals));
  Csv csv({"map", "sum", "empty"});
  auto sum = [](const ScalarGrid& g) {
    double s = 0.0;
    for (double v : g.values()) s += v;
    return s;
  };
  csv.add("w_d", sum(labels.w_d), labels.depth_empty);
  csv.add("w_n", sum(labels.w_n), labels.normal_empty);
  csv.emit(o.out, out);
}

std::string need(const std::string& value, const char* flag, const std::string& kind) {
  if (value.empty()) throw CLI::RequiredError(std::string(flag) + " (required by --kind " + kind + ")");
  return value;
}

void do_loss(const LossOpts& o, std::ostream& out, std::ostream& err) {
  const LossWeights& w = o.weights.w;
  w.validate();
  std::unique_ptr<BinaryMask> mask;
  if (!o.mask.empty()) mask = std::make_unique<BinaryMask>(io::read_mask(o.mask));

  auto photo = [&] {
    return photometric(io::read_image(need(o.rec, "--rec", o.kind)), io::read_image(need(o.target, "--target", o.kind)),
                       w.ssim_weight, mask.get());
  };
  auto dist = [&](const std::string& rec, const std::string& target) {
    return dist_loss(io::read_image(rec), io::read_image(target), mask.get());
  };
  auto smooth = [&] {
    const ScalarGrid depth = io::read_scalar(need(o.depth, "--depth", o.kind));
    const ScalarGrid edge = io::read_scalar(need(o.edge, "--edge", o.kind));
    return smooth_s(depth, edge, w.alpha_edge).total() / static_cast<double>(depth.size());
  };

  double value = 0.0;
  if (o.kind == "photo") {
    value = photo();
  } else if (o.kind == "dist") {
    value = dist(need(o.rec, "--rec", o.kind), need(o.target, "--target", o.kind));
  } else if (o.kind == "smooth") {
    value = smooth();
  } else if (o.kind == "edge") {
    const ScalarGrid edge = io::read_scalar(need(o.edge, "--edge", o.kind));
    PseudoLabelPair labels{io::read_scalar(need(o.wd, "--wd", o.kind)), io::read_scalar(need(o.wn, "--wn", o.kind))};
    value = edge_supervision(edge, labels, w).total / static_cast<double>(edge.size());
  } else {
    DepthLossParts parts;
    parts.photo = photo();
    parts.dist = dist(need(o.rec_dt, "--rec-dt", o.kind), need(o.target_dt, "--target-dt", o.kind));
    parts.smooth = smooth();
    if (!o.normals.empty()) {
      const MultiChannelImage image = io::read_image(need(o.image, "--image", o.kind));
      const VectorField normals = io::to_vector_field(io::read_dtvg(o.normals));
      parts.normal_smooth = normal_smooth(normals, image) / static_cast<double>(image.plane_size());
    }
    value = depth_total(parts, w);
  }
  err << "note: values are per-pixel means; multiply by the pixel count to recover sums\n";
  Csv csv({"kind", "value"});
  csv.add(o.kind, value);
  csv.emit(o.out, out);
}

void do_warp(const WarpOpts& o) {
  const RigidPose pose = parse_pose(o.pose);
  const Intrinsics k = parse_intrinsics(o.k);
  const ScalarGrid depth = io::read_scalar(o.depth);
  const MultiChannelImage src = io::read_image(o.in);
  const Sampled rec = reconstruct(src, depth, pose, k);
  io::write_dtvg(o.out, rec.image);
  if (!o.mask.empty()) io::write_pbm(o.mask, rec.valid);
}

void do_thm1(const Thm1Opts& o, std::ostream& out) {
  const ShapeSpec spec = make_spec(o.shape, o.size, o.extent, o.seed);
  const Shape shape = gen_shape(spec);
  const ScalarGrid ref = exact_edt(shape.contour);
  Csv csv({"iteration", "rel_rmse", "correlation", "eikonal_penalty"});
  VarianceConfig cfg;
  cfg.mu = o.mu;
  cfg.lr = o.lr;
  cfg.iters = o.iters;
  cfg.tolerance = o.tolerance;
  cfg.checkpoint_every = std::max(o.every, 1);
  cfg.on_checkpoint = [&](int it, const ScalarGrid& f) {
    csv.add(it, relative_rmse(f, ref, shape.interior), correlation(f, ref, shape.interior),
            eikonal_penalty(f, shape.interior, shape.contour));
  };
  const VarianceResult res = maximize_variance(shape.interior, shape.contour, cfg);
  csv.emit(o.out, out);
  if (!o.snapshot.empty()) {
    ScalarGrid img = res.field;
    const double peak = *std::max_element(img.values().begin(), img.values().end());
    if (peak > 0.0)
      for (double& v : img.values()) v /= peak;
    io::write_pgm_unit(o.snapshot, img);
  }
}

void do_thm2(const Thm2Opts& o, std::ostream& out) {
  TranslationConfig base;
  base.lr = o.lr;
  base.max_iters = o.max_iters;
  base.tol = o.tol;
  const auto trials = translation_trials(o.trials, static_cast<std::uint64_t>(o.seed), o.canvas, base);
  std::vector<std::string> header{"trial"};
  if (o.fill != "dt") header.push_back("uniform_iters");
  if (o.fill != "uniform") header.push_back("dt_iters");
  Csv csv(header);
  for (std::size_t t = 0; t < trials.size(); ++t) {
    std::ostringstream line;
    line << t;
    if (o.fill != "dt") line << ',' << trials[t].uniform_iterations;
    if (o.fill != "uniform") line << ',' << trials[t].dt_iterations;
    csv.add(line.str());
  }
  csv.emit(o.out, out);

  if (!o.curve.empty() && !trials.empty()) {
    const Shape shape = gen_shape(trials[0].spec);
    TranslationConfig cfg = base;
    cfg.true_shift = trials[0].true_shift;
    cfg.initial_shift = trials[0].initial_shift;
    const auto uni = translation_recovery(shape, Fill::uniform, cfg);
    const auto dtr = translation_recovery(shape, Fill::dt, cfg);
    Csv curve({"iteration", "uniform_error", "dt_error"});
    const std::size_t n = std::max(uni.error.size(), dtr.error.size());
    for (std::size_t i = 0; i < n; ++i) {
      curve.add(static_cast<int>(i), i < uni.error.size() ? uni.error[i] : uni.error.back(),
                i < dtr.error.size() ? dtr.error[i] : dtr.error.back());
    }
    curve.emit(o.curve, out);
  }
}

void do_bounds(const BoundsOpts& o, std::ostream& out) {
  const ShapeSpec spec = make_spec(o.shape, o.size, o.extent, o.seed);
  const Shape shape = gen_shape(spec);
  Point2 y;
  if (o.y.empty()) {
    // Default probe: halfway between the centroid and the top of the shape.
    const auto [cr, cc] = centroid(shape.interior);
    int top = 0;
    while (top < shape.interior.height() && !shape.interior(top, static_cast<int>(std::lround(cc)))) ++top;
    y = {std::round(cc), std::round(0.5 * (cr + top))};
  } else {
    const auto v = parse_list(o.y, 2, "--y");
    y = {v[0], v[1]};
  }
  const RemapFunction g = RemapFunction::parse(o.g);
  const BoundEstimates b = estimate_bounds(g, shape, y, o.samples, static_cast<std::uint64_t>(o.seed), o.eta);
  const double min_eig = convexity_check(g, shape, y, o.eta, o.radius);
  Csv csv({"quantity", "value"});
  csv.add("K1", b.k1);
  csv.add("K2", b.k2);
  csv.add("K3", b.k3);
  csv.add("alpha_hat", b.alpha_hat);
  csv.add("alpha_bound", b.alpha_bound);
  csv.add("beta_hat", b.beta_hat);
  csv.add("beta_bound", b.beta_bound);
  csv.add("eta", b.eta);
  csv.add("lipschitz_ok", b.lipschitz_ok);
  csv.add("min_hessian_eigenvalue", min_eig);
  csv.emit(o.out, out);
}

void do_constancy(const ConstancyOpts& o, std::ostream& out) {
  Rng rng(static_cast<std::uint64_t>(o.seed));
  Csv csv({"sequence", "texture", "dt", "rw1", "rw2", "rw3"});
  for (int s = 0; s < o.sequences; ++s) {
    ConstancyConfig cfg = random_constancy_config(rng.next_u64(), o.frames, o.size, o.max_motion);
    cfg.noise_sigma = o.sigma;
    const ConstancyResult r = constancy_experiment(cfg);
    csv.add(s, r.texture, r.dt, r.rw[0], r.rw[1], r.rw[2]);
  }
  csv.emit(o.out, out);
}

void do_levels(const LevelsOpts& o, std::ostream& out) {
  const Shape shape = gen_shape(make_spec(o.shape, o.size, o.extent, o.seed));
  const ScalarGrid dt = chamfer_d8(shape.contour);
  const ScalarGrid radial = centroid_distance(shape.interior);
  double peak = 0.0;
  for (std::size_t i = 0; i < dt.size(); ++i)
    if (shape.interior.values()[i]) peak = std::max(peak, dt.values()[i]);
  const int bins = o.bins > 0 ? o.bins : static_cast<int>(peak) + 1;
  const Histogram hd = level_set_histogram(dt, shape.interior, std::max(bins, 2));
  const Histogram hr = level_set_histogram(radial, shape.interior, std::max(bins, 2));
  Csv csv({"bin", "dt_count", "centroid_count"});
  for (std::size_t i = 0; i < hd.counts.size(); ++i) csv.add(static_cast<int>(i), hd.counts[i], hr.counts[i]);
  csv.emit(o.out, out);
  if (!o.snapshot.empty()) io::write_pgm_unit(o.snapshot, remap(dt, RemapFunction{}));
}

void do_pipeline(const PipelineOpts& o, std::ostream& out, std::ostream& err) {
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  const LossWeights& w = o.weights.w;
  w.validate();
  const Intrinsics k = parse_intrinsics(o.k);
  const RigidPose pose = parse_pose(o.pose);

  const ScalarGrid depth = io::read_scalar(o.depth);
  const MultiChannelImage image = io::read_image(o.image);
  const MultiChannelImage target = io::read_image(o.target);
  const ScalarGrid edge = io::read_scalar(o.edge);
  const ScalarGrid target_edge = o.target_edge.empty() ? edge : io::read_scalar(o.target_edge);
  require_same_shape(depth, image, "depth and image differ in size");
  require_same_shape(depth, target, "depth and target differ in size");
  require_same_shape(depth, edge, "depth and edge map differ in size");

  const VectorField normals = normals_from_depth(depth, k);
  io::write_dtvg(dir / "normals.dtvg", io::to_image(normals));
  const PseudoLabelPair labels = pseudo_labels(depth, normals);
  io::write_dtvg(dir / "w_d.dtvg", labels.w_d);
  io::write_dtvg(dir / "w_n.dtvg", labels.w_n);

  const PostprocessParams params = post_params(o.edges);
  const BinaryMask contour = postprocess(edge, params);
  const BinaryMask target_contour = postprocess(target_edge, params);
  io::write_pbm(dir / "contour.pbm", contour);
  io::write_pbm(dir / "target_contour.pbm", target_contour);

  const ScalarGrid dt = chamfer_d8(contour);
  const ScalarGrid target_dt = chamfer_d8(target_contour);
  io::write_dtvg(dir / "dt.dtvg", dt);
  io::write_dtvg(dir / "target_dt.dtvg", target_dt);

  const RandomWalkPath path =
      make_rw_path(o.dims, depth.height() + depth.width(), o.eps, o.rw_k, static_cast<std::uint64_t>(o.seed));
  write_path_csv((dir / "path.csv").string(), path, out);
  const MultiChannelImage enc = rw_encode(dt, path);
  const MultiChannelImage target_enc = rw_encode(target_dt, path);
  io::write_dtvg(dir / "enc.dtvg", enc);
  io::write_dtvg(dir / "target_enc.dtvg", target_enc);

  const MultiChannelImage aug = concat(image, enc);
  const MultiChannelImage target_aug = concat(target, target_enc);
  io::write_dtvg(dir / "aug.dtvg", aug);
  io::write_dtvg(dir / "target_aug.dtvg", target_aug);

  const Sampled rec = reconstruct(target_aug, depth, pose, k);
  io::write_dtvg(dir / "rec.dtvg", rec.image);
  io::write_pbm(dir / "valid.pbm", rec.valid);

  const int colour = image.channels();
  const double pixels = static_cast<double>(depth.size());
  DepthLossParts parts;
  parts.photo = photometric(channel_range(rec.image, 0, colour), image, w.ssim_weight, &rec.valid);
  parts.dist = dist_loss(channel_range(rec.image, colour, o.dims), enc, &rec.valid);
  parts.smooth = smooth_s(depth, edge, w.alpha_edge).total() / pixels;
  parts.normal_smooth = normal_smooth(normals, image) / pixels;
  const double edge_loss = edge_supervision(edge, labels, w).total / pixels;

  Csv csv({"kind", "value"});
  csv.add("photo", parts.photo);
  csv.add("dist", parts.dist);
  csv.add("smooth", parts.smooth);
  csv.add("normal_smooth", parts.normal_smooth);
  csv.add("edge", edge_loss);
  csv.add("total", depth_total(parts, w));
  csv.emit((dir / "losses.csv").string(), out);
  err << "note: losses are per-pixel means; multiply by the pixel count to recover sums\n";
}

// ---------------------------------------------------------------------------
// Config file and argument plumbing

/// Removes --config PATH / --config=PATH from args and returns PATH.
std::string take_config(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config", 1, 0);
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return path;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// key=value lines ('#' starts a comment) turned into --key=value tokens.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open config " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ConversionError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty() || key[0] == '-') {
      throw CLI::ConversionError("config line " + std::to_string(lineno) + ": bad key '" + key + "'");
    }
    tokens.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return tokens;
}

/// Number of leading tokens naming the command (1 or 2).
std::size_t command_depth(const std::vector<std::string>& args) {
  if (args.empty()) return 0;
  const std::string& head = args[0];
  if ((head == "edges" || head == "loss" || head == "verify") && args.size() > 1 && args[1].rfind("-", 0) != 0) {
    return 2;
  }
  return head.rfind("-", 0) == 0 ? 0 : 1;
}

CLI::App* leaf_command(CLI::App& app) {
  CLI::App* cur = &app;
  while (true) {
    auto subs = cur->get_subcommands();
    if (subs.empty()) return cur;
    cur = subs.front();
  }
}

void print_config(CLI::App* leaf, std::ostream& out) {
  for (const CLI::Option* opt : leaf->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "print-config") continue;
    std::string value = opt->get_default_str();
    if (opt->count() > 0) {
      value.clear();
      for (const auto& r : opt->reduced_results()) value += (value.empty() ? "" : ",") + r;
    }
    out << name << '=' << value << '\n';
  }
}

/// Applies DTVAR_SEED to a --seed option that neither the command line nor
/// the config file set.
void apply_env_seed(CLI::App* leaf) {
  const char* env = std::getenv("DTVAR_SEED");
  if (env == nullptr || *env == '\0') return;
  CLI::Option* opt = nullptr;
  try {
    opt = leaf->get_option("--seed");
  } catch (const CLI::OptionNotFound&) {
    return;
  }
  if (opt->count() > 0) return;
  opt->add_result(std::string(env));
  opt->run_callback();
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dtvar: distance transforms over pre-semantic contours", "dtvar"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  bool show_config = false;
  app.add_flag("--print-config", show_config, "print the resolved configuration and exit");
  app.set_config();  // disable CLI11's own config handling; --config is ours

  DtOpts dt;
  auto* c_dt = app.add_subcommand("dt", "distance transform of a contour mask");
  c_dt->add_option("--metric", dt.metric, "d8 | euclid | brute")->check(CLI::IsMember({"d8", "euclid", "brute"}));
  c_dt->add_option("--norm", dt.norm, "metric for --metric brute")->check(CLI::IsMember({"chessboard", "euclidean"}));
  c_dt->add_option("--in", dt.in, "contour mask (PBM/PGM)")->required();
  c_dt->add_option("--out", dt.out, "distance grid (DTVG)")->required();
  c_dt->add_option("--remap", dt.remap, "apply g after max-normalisation")->check(CLI::IsMember(kRemaps));

  RwOpts rw;
  auto* c_rw = app.add_subcommand("rw-encode", "random-walk encoding of an integer distance grid");
  c_rw->add_option("--in", rw.in, "distance grid (DTVG/PGM)")->required();
  c_rw->add_option("--out", rw.out, "encoded image (DTVG)")->required();
  c_rw->add_option("--dims", rw.dims, "walk dimension")->check(CLI::Range(1, 4));
  c_rw->add_option("--eps", rw.eps, "step length")->check(CLI::PositiveNumber);
  c_rw->add_option("--k", rw.k, "angle partitions")->check(CLI::Range(2, 1 << 30));
  c_rw->add_option("--steps", rw.steps, "path length (0: height + width)")->check(CLI::NonNegativeNumber);
  c_rw->add_option("--path-out", rw.path_out, "write the walk as CSV");
  add_seed(c_rw, rw.seed);

  EdgesOpts edges;
  auto* c_edges = app.add_subcommand("edges", "edge-map tools");
  c_edges->require_subcommand(1);
  auto* c_post = c_edges->add_subcommand("post", "thin binary contour from a continuous edge map");
  c_post->add_option("--in", edges.in, "edge map in [0,1] (PGM/DTVG)")->required();
  c_post->add_option("--out", edges.out, "contour (PBM)")->required();
  add_edge_params(c_post, edges);

  PseudoOpts pseudo;
  auto* c_pseudo = app.add_subcommand("pseudo", "depth and normal pseudo-label weights");
  c_pseudo->add_option("--depth", pseudo.depth, "depth grid (DTVG)")->required();
  c_pseudo->add_option("--normals", pseudo.normals, "3-channel normal field (DTVG)");
  c_pseudo->add_option("--K", pseudo.k, "fx,fy,cx,cy to derive normals from depth");
  c_pseudo->add_option("--out-wd", pseudo.out_wd, "w_d grid (DTVG)")->required();
  c_pseudo->add_option("--out-wn", pseudo.out_wn, "w_n grid (DTVG)")->required();
  c_pseudo->add_option("--out-normals", pseudo.out_normals, "derived normals (DTVG)");
  c_pseudo->add_option("--out", pseudo.out, "summary CSV");

  LossOpts loss;
  auto* c_loss = app.add_subcommand("loss", "loss evaluation");
  c_loss->require_subcommand(1);
  auto* c_eval = c_loss->add_subcommand("eval", "evaluate one loss; prints kind,value");
  c_eval->add_option("--kind", loss.kind, "photo | dist | smooth | edge | total")
      ->check(CLI::IsMember({"photo", "dist", "smooth", "edge", "total"}));
  c_eval->add_option("--rec", loss.rec, "reconstruction (photo, dist)");
  c_eval->add_option("--target", loss.target, "observation (photo, dist)");
  c_eval->add_option("--mask", loss.mask, "validity mask (PBM)");
  c_eval->add_option("--rec-dt", loss.rec_dt, "reconstructed distance channels (total)");
  c_eval->add_option("--target-dt", loss.target_dt, "observed distance channels (total)");
  c_eval->add_option("--depth", loss.depth, "depth grid (smooth, total)");
  c_eval->add_option("--edge", loss.edge, "edge map (smooth, edge, total)");
  c_eval->add_option("--wd", loss.wd, "depth pseudo-label weights (edge)");
  c_eval->add_option("--wn", loss.wn, "normal pseudo-label weights (edge)");
  c_eval->add_option("--normals", loss.normals, "normal field for normal smoothing (total)");
  c_eval->add_option("--image", loss.image, "image for normal smoothing (total)");
  c_eval->add_option("--out", loss.out, "CSV path (default stdout)");
  loss.weights.add(c_eval);

  WarpOpts warp;
  auto* c_warp = app.add_subcommand("warp", "reconstruct an image through depth and pose");
  c_warp->add_option("--depth", warp.depth, "depth of the reference frame (DTVG)")->required();
  c_warp->add_option("--pose", warp.pose, "rx,ry,rz,tx,ty,tz")->required();
  c_warp->add_option("--K", warp.k, "fx,fy,cx,cy")->required();
  c_warp->add_option("--in", warp.in, "image to sample (DTVG/PPM/PGM)")->required();
  c_warp->add_option("--out", warp.out, "reconstruction (DTVG)")->required();
  c_warp->add_option("--mask", warp.mask, "validity mask (PBM)");

  auto* c_verify = app.add_subcommand("verify", "theory checks and toy experiments");
  c_verify->require_subcommand(1);

  Thm1Opts thm1;
  auto* c_thm1 = c_verify->add_subcommand("thm1", "variance maximisation converges to the distance transform");
  c_thm1->add_option("--shape", thm1.shape, "shape kind")->check(CLI::IsMember(kShapes));
  c_thm1->add_option("--size", thm1.size, "canvas side")->check(CLI::Range(16, 4096));
  c_thm1->add_option("--extent", thm1.extent, "shape diameter / canvas")->check(CLI::Range(0.05, 1.0));
  c_thm1->add_option("--mu", thm1.mu, "Eikonal penalty weight")->check(CLI::NonNegativeNumber);
  c_thm1->add_option("--lr", thm1.lr, "step size")->check(CLI::PositiveNumber);
  c_thm1->add_option("--iters", thm1.iters, "iterations")->check(CLI::NonNegativeNumber);
  c_thm1->add_option("--every", thm1.every, "checkpoint interval")->check(CLI::PositiveNumber);
  c_thm1->add_option("--tolerance", thm1.tolerance, "Eikonal penalty tolerance");
  c_thm1->add_option("--out", thm1.out, "CSV path (default stdout)");
  c_thm1->add_option("--snapshot", thm1.snapshot, "final field as PGM");
  add_seed(c_thm1, thm1.seed);

  Thm2Opts thm2;
  auto* c_thm2 = c_verify->add_subcommand("thm2", "shift recovery: distance fill against uniform fill");
  c_thm2->add_option("--fill", thm2.fill, "both | dt | uniform")->check(CLI::IsMember({"both", "dt", "uniform"}));
  c_thm2->add_option("--trials", thm2.trials, "paired trials")->check(CLI::NonNegativeNumber);
  c_thm2->add_option("--canvas", thm2.canvas, "canvas side")->check(CLI::Range(64, 4096));
  c_thm2->add_option("--lr", thm2.lr, "step size")->check(CLI::PositiveNumber);
  c_thm2->add_option("--max-iters", thm2.max_iters, "iteration cap")->check(CLI::NonNegativeNumber);
  c_thm2->add_option("--tol", thm2.tol, "convergence radius in pixels")->check(CLI::PositiveNumber);
  c_thm2->add_option("--out", thm2.out, "CSV path (default stdout)");
  c_thm2->add_option("--curve", thm2.curve, "per-iteration error of trial 0 as CSV");
  add_seed(c_thm2, thm2.seed);

  BoundsOpts bounds;
  auto* c_bounds = c_verify->add_subcommand("bounds", "sampled Lipschitz/smoothness ratios and Hessian check");
  c_bounds->add_option("--g", bounds.g, "remap function")->check(CLI::IsMember(kRemaps));
  c_bounds->add_option("--shape", bounds.shape, "shape kind")->check(CLI::IsMember(kShapes));
  c_bounds->add_option("--size", bounds.size, "canvas side")->check(CLI::Range(16, 4096));
  c_bounds->add_option("--extent", bounds.extent, "shape diameter / canvas")->check(CLI::Range(0.05, 1.0));
  c_bounds->add_option("--samples", bounds.samples, "sampled pairs")->check(CLI::PositiveNumber);
  c_bounds->add_option("--eta", bounds.eta, "convexity regulariser")->check(CLI::NonNegativeNumber);
  c_bounds->add_option("--radius", bounds.radius, "Hessian neighbourhood radius in pixels")
      ->check(CLI::NonNegativeNumber);
  c_bounds->add_option("--y", bounds.y, "optimum x,y in pixels (default: inside the top half)");
  c_bounds->add_option("--out", bounds.out, "CSV path (default stdout)");
  add_seed(c_bounds, bounds.seed);

  ConstancyOpts constancy;
  auto* c_const = c_verify->add_subcommand("constancy", "normalised temporal variance per channel family");
  c_const->add_option("--frames", constancy.frames, "frames per sequence")->check(CLI::PositiveNumber);
  c_const->add_option("--sequences", constancy.sequences, "random sequences")->check(CLI::NonNegativeNumber);
  c_const->add_option("--size", constancy.size, "canvas side")->check(CLI::Range(32, 4096));
  c_const->add_option("--max-motion", constancy.max_motion, "largest per-axis displacement")
      ->check(CLI::NonNegativeNumber);
  c_const->add_option("--sigma", constancy.sigma, "texture noise standard deviation")->check(CLI::NonNegativeNumber);
  c_const->add_option("--out", constancy.out, "CSV path (default stdout)");
  add_seed(c_const, constancy.seed);

  LevelsOpts levels;
  auto* c_levels = c_verify->add_subcommand("levels", "level-set histograms of the distance and radial fields");
  c_levels->add_option("--shape", levels.shape, "shape kind")->check(CLI::IsMember(kShapes));
  c_levels->add_option("--size", levels.size, "canvas side")->check(CLI::Range(16, 4096));
  c_levels->add_option("--extent", levels.extent, "shape diameter / canvas")->check(CLI::Range(0.05, 1.0));
  c_levels->add_option("--bins", levels.bins, "bins (0: one per integer distance)")->check(CLI::NonNegativeNumber);
  c_levels->add_option("--out", levels.out, "CSV path (default stdout)");
  c_levels->add_option("--snapshot", levels.snapshot, "distance field as PGM");
  add_seed(c_levels, levels.seed);

  PipelineOpts pipe;
  auto* c_pipe = app.add_subcommand("pipeline", "depth/edges to losses, writing every intermediate");
  c_pipe->add_option("--depth", pipe.depth, "depth of frame t (DTVG)")->required();
  c_pipe->add_option("--K", pipe.k, "fx,fy,cx,cy")->required();
  c_pipe->add_option("--pose", pipe.pose, "rx,ry,rz,tx,ty,tz from t to t+1")->required();
  c_pipe->add_option("--image", pipe.image, "frame t (PPM/PGM/DTVG)")->required();
  c_pipe->add_option("--target", pipe.target, "frame t+1 (PPM/PGM/DTVG)")->required();
  c_pipe->add_option("--edge", pipe.edge, "edge map of frame t in [0,1]")->required();
  c_pipe->add_option("--target-edge", pipe.target_edge, "edge map of frame t+1 (default: --edge)");
  c_pipe->add_option("--out-dir", pipe.out_dir, "directory for all outputs")->required();
  c_pipe->add_option("--dims", pipe.dims, "random-walk dimension")->check(CLI::Range(1, 4));
  c_pipe->add_option("--eps", pipe.eps, "random-walk step")->check(CLI::PositiveNumber);
  c_pipe->add_option("--k", pipe.rw_k, "random-walk angle partitions")->check(CLI::Range(2, 1 << 30));
  add_edge_params(c_pipe, pipe.edges);
  pipe.weights.add(c_pipe);
  add_seed(c_pipe, pipe.seed);

  try {
    std::vector<std::string> args = raw_args;
    const std::string config = take_config(args);
    if (!config.empty()) {
      const auto extra = read_config(config);
      const auto at = static_cast<std::ptrdiff_t>(command_depth(args));
      args.insert(args.begin() + at, extra.begin(), extra.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);

    CLI::App* leaf = leaf_command(app);
    apply_env_seed(leaf);
    if (show_config) {
      print_config(leaf, out);
      return exit_ok;
    }

    if (c_dt->parsed()) do_dt(dt);
    else if (c_rw->parsed()) do_rw(rw, out);
    else if (c_post->parsed()) do_edges(edges);
    else if (c_pseudo->parsed()) do_pseudo(pseudo, out);
    else if (c_eval->parsed()) do_loss(loss, out, err);
    else if (c_warp->parsed()) do_warp(warp);
    else if (c_thm1->parsed()) do_thm1(thm1, out);
    else if (c_thm2->parsed()) do_thm2(thm2, out);
    else if (c_bounds->parsed()) do_bounds(bounds, out);
    else if (c_const->parsed()) do_constancy(constancy, out);
    else if (c_levels->parsed()) do_levels(levels, out);
    else if (c_pipe->parsed()) do_pipeline(pipe, out, err);
    return exit_ok;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_domain_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << error_name(Errc::io_error) << ": " << e.what() << '\n';
    return exit_domain_error;
  }
}

}  // namespace dtvar::cli
