#include "dtvar/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dtvar {
namespace {

int reflect(int i, int n) {
  if (n == 1) return 0;
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

ScalarGrid mean_pool(const ScalarGrid& g) {
  ScalarGrid out(g.height(), g.width());
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      double s = 0.0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) s += g(reflect(r + dr, g.height()), reflect(c + dc, g.width()));
      out(r, c) = s / 9.0;
    }
  }
  return out;
}

// Transpose of mean_pool.
ScalarGrid mean_pool_adjoint(const ScalarGrid& x) {
  ScalarGrid out(x.height(), x.width(), 0.0);
  for (int r = 0; r < x.height(); ++r) {
    for (int c = 0; c < x.width(); ++c) {
      const double v = x(r, c) / 9.0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) out(reflect(r + dr, x.height()), reflect(c + dc, x.width())) += v;
    }
  }
  return out;
}

ScalarGrid product(const ScalarGrid& a, const ScalarGrid& b) {
  ScalarGrid out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = a.values()[i] * b.values()[i];
  return out;
}

struct SsimStats {
  ScalarGrid mu_a, mu_b, e_aa, e_bb, e_ab;

  SsimStats(const ScalarGrid& a, const ScalarGrid& b)
      : mu_a(mean_pool(a)),
        mu_b(mean_pool(b)),
        e_aa(mean_pool(product(a, a))),
        e_bb(mean_pool(product(b, b))),
        e_ab(mean_pool(product(a, b))) {}

  struct Terms {
    double a1, a2, b1, b2;
  };

  Terms terms(std::size_t i) const {
    const double ma = mu_a.values()[i];
    const double mb = mu_b.values()[i];
    return {2.0 * ma * mb + ssim_c1, 2.0 * (e_ab.values()[i] - ma * mb) + ssim_c2,
            ma * ma + mb * mb + ssim_c1,
            (e_aa.values()[i] - ma * ma) + (e_bb.values()[i] - mb * mb) + ssim_c2};
  }
};

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

bool selected(const BinaryMask* mask, std::size_t i) { return mask == nullptr || mask->values()[i] != 0; }

std::size_t selected_count(const BinaryMask* mask, std::size_t n) {
  return mask == nullptr ? n : count_set(*mask);
}

void check_pair(const MultiChannelImage& a, const MultiChannelImage& b, const BinaryMask* mask) {
  if (!a.same_shape(b)) throw Error(Errc::dimension_mismatch, "images differ in shape");
  if (mask != nullptr) require_same_shape(a, *mask, "mask differs from image size");
}

// Per-pixel image weights exp(-|dI|) along one axis, |dI| averaged over channels.
ScalarGrid image_weight(const MultiChannelImage& image, Axis axis) {
  ScalarGrid acc(image.height(), image.width(), 0.0);
  for (int ch = 0; ch < image.channels(); ++ch) {
    const ScalarGrid d = forward_diff(image.channel(ch), axis);
    for (std::size_t i = 0; i < acc.size(); ++i) acc.values()[i] += std::abs(d.values()[i]);
  }
  for (double& v : acc.values()) v = std::exp(-v / image.channels());
  return acc;
}

// d/da and d/db of the ratio difference (b - a) / max(a, b).
void ratio_partials(double a, double b, double& da, double& db) {
  if (b >= a) {
    da = -1.0 / b;
    db = a / (b * b);
  } else {
    da = -b / (a * a);
    db = 1.0 / a;
  }
}

}  // namespace

void LossWeights::validate() const {
  const double all[] = {lambda_d, lambda_n,  lambda_e,  lambda_c,   lambda_photo,
                        lambda_dist, lambda_s, lambda_ns, alpha_edge, ssim_weight};
  for (double v : all) {
    if (!(std::isfinite(v) && v >= 0.0)) throw Error(Errc::invalid_argument, "loss weights must be finite and >= 0");
  }
  if (ssim_weight > 1.0) throw Error(Errc::invalid_argument, "ssim_weight must be in [0,1]");
}

ScalarGrid ssim_channel(const ScalarGrid& a, const ScalarGrid& b) {
  require_same_shape(a, b, "ssim: channels differ in size");
  const SsimStats st(a, b);
  ScalarGrid out(a.height(), a.width());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto t = st.terms(i);
    out.values()[i] = (t.a1 * t.a2) / (t.b1 * t.b2);
  }
  return out;
}

ScalarGrid ssim(const MultiChannelImage& a, const MultiChannelImage& b) {
  check_pair(a, b, nullptr);
  ScalarGrid out(a.height(), a.width(), 0.0);
  for (int ch = 0; ch < a.channels(); ++ch) {
    const ScalarGrid s = ssim_channel(a.channel(ch), b.channel(ch));
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += s.values()[i];
  }
  for (double& v : out.values()) v /= a.channels();
  return out;
}

double photometric(const MultiChannelImage& rec, const MultiChannelImage& target, double ssim_weight,
                   const BinaryMask* mask) {
  check_pair(rec, target, mask);
  const std::size_t count = selected_count(mask, rec.plane_size());
  if (count == 0) return 0.0;
  double total = 0.0;
  for (int ch = 0; ch < rec.channels(); ++ch) {
    const ScalarGrid a = rec.channel(ch);
    const ScalarGrid b = target.channel(ch);
    const ScalarGrid s = ssim_channel(a, b);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!selected(mask, i)) continue;
      total += ssim_weight * (1.0 - s.values()[i]) / 2.0 +
               (1.0 - ssim_weight) * std::abs(a.values()[i] - b.values()[i]);
    }
  }
  return total / (static_cast<double>(count) * rec.channels());
}

MultiChannelImage photometric_grad(const MultiChannelImage& rec, const MultiChannelImage& target,
                                   double ssim_weight, const BinaryMask* mask) {
  check_pair(rec, target, mask);
  MultiChannelImage grad(rec.height(), rec.width(), rec.channels(), 0.0);
  const std::size_t count = selected_count(mask, rec.plane_size());
  if (count == 0) return grad;
  const double norm = 1.0 / (static_cast<double>(count) * rec.channels());
  const int h = rec.height();
  const int w = rec.width();

  for (int ch = 0; ch < rec.channels(); ++ch) {
    const ScalarGrid a = rec.channel(ch);
    const ScalarGrid b = target.channel(ch);
    const SsimStats st(a, b);
    // Upstream weights on the pooled statistics mu_a, E[a^2], E[ab].
    ScalarGrid g_mu(h, w, 0.0);
    ScalarGrid g_aa(h, w, 0.0);
    ScalarGrid g_ab(h, w, 0.0);
    const double up = -0.5 * ssim_weight * norm;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!selected(mask, i)) continue;
      const auto t = st.terms(i);
      const double ma = st.mu_a.values()[i];
      const double mb = st.mu_b.values()[i];
      const double den = t.b1 * t.b2;
      const double num = t.a1 * t.a2;
      const double d_mu = (2.0 * mb * t.a2 - 2.0 * mb * t.a1) / den -
                          num * (2.0 * ma * t.b2 - 2.0 * ma * t.b1) / (den * den);
      const double d_aa = -num * t.b1 / (den * den);
      const double d_ab = 2.0 * t.a1 / den;
      g_mu.values()[i] = up * d_mu;
      g_aa.values()[i] = up * d_aa;
      g_ab.values()[i] = up * d_ab;
    }
    const ScalarGrid p_mu = mean_pool_adjoint(g_mu);
    const ScalarGrid p_aa = mean_pool_adjoint(g_aa);
    const ScalarGrid p_ab = mean_pool_adjoint(g_ab);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * w + c;
        double g = p_mu(r, c) + 2.0 * a(r, c) * p_aa(r, c) + b(r, c) * p_ab(r, c);
        if (selected(mask, i)) g += (1.0 - ssim_weight) * norm * sign(a(r, c) - b(r, c));
        grad(ch, r, c) = g;
      }
    }
  }
  return grad;
}

double dist_loss(const MultiChannelImage& rec_dt, const MultiChannelImage& dt, const BinaryMask* mask) {
  check_pair(rec_dt, dt, mask);
  const std::size_t count = selected_count(mask, rec_dt.plane_size());
  if (count == 0) return 0.0;
  double total = 0.0;
  const std::size_t plane = rec_dt.plane_size();
  for (std::size_t k = 0; k < rec_dt.values().size(); ++k) {
    if (selected(mask, k % plane)) total += std::abs(rec_dt.values()[k] - dt.values()[k]);
  }
  return total / (static_cast<double>(count) * rec_dt.channels());
}

MultiChannelImage dist_loss_grad(const MultiChannelImage& rec_dt, const MultiChannelImage& dt,
                                 const BinaryMask* mask) {
  check_pair(rec_dt, dt, mask);
  MultiChannelImage grad(rec_dt.height(), rec_dt.width(), rec_dt.channels(), 0.0);
  const std::size_t count = selected_count(mask, rec_dt.plane_size());
  if (count == 0) return grad;
  const double norm = 1.0 / (static_cast<double>(count) * rec_dt.channels());
  const std::size_t plane = rec_dt.plane_size();
  for (std::size_t k = 0; k < grad.values().size(); ++k) {
    if (selected(mask, k % plane)) grad.values()[k] = norm * sign(rec_dt.values()[k] - dt.values()[k]);
  }
  return grad;
}

SmoothTerms smooth_s(const ScalarGrid& depth, const ScalarGrid& edge, double alpha) {
  require_same_shape(depth, edge, "smooth_s: depth and edge differ in size");
  const ScalarGrid n = norm_depth_grad(depth);
  SmoothTerms out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double g = n.values()[i];
    const double k = std::exp(-alpha * edge.values()[i]);
    out.s1 += g * k;
    out.s2 += std::log1p(std::exp(-g)) * (1.0 - k);
  }
  return out;
}

SmoothGrad smooth_s_grad(const ScalarGrid& depth, const ScalarGrid& edge, double alpha) {
  require_same_shape(depth, edge, "smooth_s: depth and edge differ in size");
  const ScalarGrid gx = norm_depth_diff(depth, Axis::x);
  const ScalarGrid gy = norm_depth_diff(depth, Axis::y);
  const int h = depth.height();
  const int w = depth.width();
  SmoothGrad out{ScalarGrid(h, w, 0.0), ScalarGrid(h, w, 0.0)};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double n = std::abs(gx(r, c)) + std::abs(gy(r, c));
      const double k = std::exp(-alpha * edge(r, c));
      const double soft = std::log1p(std::exp(-n));
      out.d_edge(r, c) = -alpha * k * n + alpha * k * soft;
      // d/dn of s1 + s2 at this pixel.
      const double dn = k - (1.0 - k) / (1.0 + std::exp(n));
      double da = 0.0;
      double db = 0.0;
      if (c + 1 < w) {
        ratio_partials(depth(r, c), depth(r, c + 1), da, db);
        const double s = dn * sign(gx(r, c));
        out.d_depth(r, c) += s * da;
        out.d_depth(r, c + 1) += s * db;
      }
      if (r + 1 < h) {
        ratio_partials(depth(r, c), depth(r + 1, c), da, db);
        const double s = dn * sign(gy(r, c));
        out.d_depth(r, c) += s * da;
        out.d_depth(r + 1, c) += s * db;
      }
    }
  }
  return out;
}

double baseline_smooth(const ScalarGrid& depth, const MultiChannelImage& image) {
  require_same_shape(depth, image, "baseline_smooth: depth and image differ in size");
  const ScalarGrid dx = forward_diff(depth, Axis::x);
  const ScalarGrid dy = forward_diff(depth, Axis::y);
  const ScalarGrid wx = image_weight(image, Axis::x);
  const ScalarGrid wy = image_weight(image, Axis::y);
  double total = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    total += std::abs(dx.values()[i]) * wx.values()[i] + std::abs(dy.values()[i]) * wy.values()[i];
  }
  return total;
}

ScalarGrid baseline_smooth_grad(const ScalarGrid& depth, const MultiChannelImage& image) {
  require_same_shape(depth, image, "baseline_smooth: depth and image differ in size");
  const ScalarGrid dx = forward_diff(depth, Axis::x);
  const ScalarGrid dy = forward_diff(depth, Axis::y);
  const ScalarGrid wx = image_weight(image, Axis::x);
  const ScalarGrid wy = image_weight(image, Axis::y);
  const int h = depth.height();
  const int w = depth.width();
  ScalarGrid grad(h, w, 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) {
        const double s = sign(dx(r, c)) * wx(r, c);
        grad(r, c + 1) += s;
        grad(r, c) -= s;
      }
      if (r + 1 < h) {
        const double s = sign(dy(r, c)) * wy(r, c);
        grad(r + 1, c) += s;
        grad(r, c) -= s;
      }
    }
  }
  return grad;
}

double normal_smooth(const VectorField& normals, const MultiChannelImage& image) {
  require_same_shape(normals, image, "normal_smooth: normals and image differ in size");
  const ScalarGrid nx = normal_diff(normals, Axis::x);
  const ScalarGrid ny = normal_diff(normals, Axis::y);
  const ScalarGrid wx = image_weight(image, Axis::x);
  const ScalarGrid wy = image_weight(image, Axis::y);
  double total = 0.0;
  for (std::size_t i = 0; i < nx.size(); ++i) {
    total += std::abs(nx.values()[i]) * wx.values()[i] + std::abs(ny.values()[i]) * wy.values()[i];
  }
  return total;
}

EdgeTerms edge_supervision(const ScalarGrid& edge, const PseudoLabelPair& labels, const LossWeights& w) {
  require_same_shape(edge, labels.w_d, "edge_supervision: w_d differs from edge map");
  require_same_shape(edge, labels.w_n, "edge_supervision: w_n differs from edge map");
  EdgeTerms t;
  for (std::size_t i = 0; i < edge.size(); ++i) {
    const double e = edge.values()[i];
    const double ec = std::clamp(e, bce_clamp, 1.0 - bce_clamp);
    t.pseudo += (w.lambda_d * labels.w_d.values()[i] + w.lambda_n * labels.w_n.values()[i]) * (1.0 - e);
    t.contrast -= e >= 0.5 ? std::log(ec) : std::log(1.0 - ec);
    t.energy += e * e;
  }
  t.total = t.pseudo + w.lambda_c * t.contrast + w.lambda_e * t.energy;
  return t;
}

ScalarGrid edge_supervision_grad(const ScalarGrid& edge, const PseudoLabelPair& labels, const LossWeights& w) {
  require_same_shape(edge, labels.w_d, "edge_supervision: w_d differs from edge map");
  require_same_shape(edge, labels.w_n, "edge_supervision: w_n differs from edge map");
  ScalarGrid grad(edge.height(), edge.width(), 0.0);
  for (std::size_t i = 0; i < edge.size(); ++i) {
    const double e = edge.values()[i];
    double g = -(w.lambda_d * labels.w_d.values()[i] + w.lambda_n * labels.w_n.values()[i]) + 2.0 * w.lambda_e * e;
    if (e > bce_clamp && e < 1.0 - bce_clamp) g += w.lambda_c * (e >= 0.5 ? -1.0 / e : 1.0 / (1.0 - e));
    grad.values()[i] = g;
  }
  return grad;
}

double depth_total(const DepthLossParts& parts, const LossWeights& w) {
  return w.lambda_dist * parts.dist + w.lambda_photo * parts.photo + w.lambda_s * parts.smooth +
         w.lambda_ns * parts.normal_smooth;
}

}  // namespace dtvar
