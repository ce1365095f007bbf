#include "dtvar/constancy.hpp"

#include <cmath>

#include "dtvar/distance.hpp"
#include "dtvar/encoding.hpp"
#include "dtvar/random.hpp"

namespace dtvar {
namespace {

double texture(double x, double y) { return 0.5 + 0.25 * std::sin(0.3 * x) * std::cos(0.2 * y); }

}  // namespace

double normalized_variance(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n == 0) return 0.0;
  double sum = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += samples[i];
    for (std::size_t j = i + 1; j < n; ++j) pairs += (samples[i] - samples[j]) * (samples[i] - samples[j]);
  }
  const double var = pairs / (static_cast<double>(n) * n);
  const double mean = sum / n;
  if (var == 0.0 || !(mean > 0.0)) return 0.0;
  return var / mean;
}

ConstancyResult constancy_experiment(const ConstancyConfig& config) {
  const Shape base = gen_shape(config.shape);
  const auto [cr, cc] = centroid(base.interior);
  const int tr = static_cast<int>(std::lround(cr)) + config.track.dr;
  const int tc = static_cast<int>(std::lround(cc)) + config.track.dc;
  const int n = config.shape.size;
  const std::size_t shape_pixels = count_set(base.interior);

  Rng rng(config.seed);
  const RandomWalkPath path =
      make_rw_path(config.rw_dims, 2 * n, config.rw_eps, config.rw_partitions, rng.next_u64());

  ConstancyResult out;
  std::vector<std::vector<double>> rw_samples(static_cast<std::size_t>(config.rw_dims));
  for (const Offset& m : config.motions) {
    const int pr = tr + m.dr;
    const int pc = tc + m.dc;
    if (!base.interior.in_bounds(pr, pc)) throw Error(Errc::invalid_argument, "tracked point leaves the canvas");
    const BinaryMask contour = translate(base.contour, m.dr, m.dc);
    if (count_set(translate(base.interior, m.dr, m.dc)) != shape_pixels) {
      throw Error(Errc::invalid_argument, "motion pushes the shape off the canvas");
    }
    // Object-attached texture: evaluated in the shape's own coordinates.
    out.texture_samples.push_back(texture(pc - m.dc, pr - m.dr) + config.noise_sigma * rng.normal());

    const ScalarGrid dt = chamfer_d8(contour);
    out.dt_samples.push_back(dt(pr, pc));
    const MultiChannelImage enc = rw_encode(dt, path);
    for (int d = 0; d < config.rw_dims; ++d) rw_samples[static_cast<std::size_t>(d)].push_back(enc(d, pr, pc));
  }
  out.texture = normalized_variance(out.texture_samples);
  out.dt = normalized_variance(out.dt_samples);
  for (const auto& s : rw_samples) out.rw.push_back(normalized_variance(s));
  return out;
}

ConstancyConfig random_constancy_config(std::uint64_t seed, int frames, int size, int max_motion) {
  Rng rng(seed);
  ConstancyConfig cfg;
  cfg.shape = random_shape_spec(rng.next_u64(), size, max_motion + 2);
  cfg.seed = rng.next_u64();
  const Shape base = gen_shape(cfg.shape);
  const auto [cr, cc] = centroid(base.interior);
  const int r0 = static_cast<int>(std::lround(cr));
  const int c0 = static_cast<int>(std::lround(cc));
  // Tracked point: a random interior pixel, expressed relative to the centroid.
  std::vector<Offset> inside;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c)
      if (base.interior(r, c)) inside.push_back({r - r0, c - c0});
  cfg.track = inside[static_cast<std::size_t>(rng.below(inside.size()))];
  for (int f = 0; f < frames; ++f) {
    cfg.motions.push_back({rng.range(-max_motion, max_motion), rng.range(-max_motion, max_motion)});
  }
  return cfg;
}

}  // namespace dtvar
