// Geometric transforms. All of them sample the source through
// sample_bilinear, so exposed regions are filled by reflection.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "raster.hpp"

namespace corrbench::detail {
namespace {

double random_sign(Rng& rng) { return rng.coin() ? 1.0 : -1.0; }

}  // namespace

void rotation(Raster& img, const Params& p, double severity, Rng& rng) {
  const double angle = random_sign(rng) * severity * p.get("max_degrees") * std::numbers::pi / 180.0;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  img = warp(img, [&](double x, double y, double& sx, double& sy) {
    const double dx = x - cx;
    const double dy = y - cy;
    sx = cx + c * dx + s * dy;
    sy = cy - s * dx + c * dy;
  });
}

void translation(Raster& img, const Params& p, double severity, Rng& rng) {
  const double direction = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double amount = severity * p.get("max_frac");
  const double tx = amount * img.width * std::cos(direction);
  const double ty = amount * img.height * std::sin(direction);
  img = warp(img, [&](double x, double y, double& sx, double& sy) {
    sx = x - tx;
    sy = y - ty;
  });
}

void shear(Raster& img, const Params& p, double severity, Rng& rng) {
  const double factor = random_sign(rng) * severity * p.get("max_shear");
  const double cy = (img.height - 1) / 2.0;
  img = warp(img, [&](double x, double y, double& sx, double& sy) {
    sx = x + factor * (y - cy);
    sy = y;
  });
}

// Zoom in about the center.
void scale(Raster& img, const Params& p, double severity, Rng&) {
  const double zoom = 1.0 + severity * p.get("max_zoom");
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  img = warp(img, [&](double x, double y, double& sx, double& sy) {
    sx = cx + (x - cx) / zoom;
    sy = cy + (y - cy) / zoom;
  });
}

// Smoothed random displacement field, normalized so its largest component
// has magnitude 1 before scaling by alpha.
void elastic_transform(Raster& img, const Params& p, double severity, Rng& rng) {
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<float> dx(n);
  std::vector<float> dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
    dy[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
  }
  const double sigma = std::max(1.0, p.get("sigma_frac") * img.min_dim());
  blur_field(dx, img.width, img.height, sigma);
  blur_field(dy, img.width, img.height, sigma);
  float peak = 0.0f;
  for (std::size_t i = 0; i < n; ++i) peak = std::max({peak, std::fabs(dx[i]), std::fabs(dy[i])});
  if (peak <= 0.0f) return;
  const double alpha = severity * p.get("alpha_frac") * img.min_dim() / peak;
  const int w = img.width;
  img = warp(img, [&](double x, double y, double& sx, double& sy) {
    const std::size_t i = static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x);
    sx = x + alpha * dx[i];
    sy = y + alpha * dy[i];
  });
}

// Random corner displacement; the homography maps output pixels to source
// coordinates.
void perspective(Raster& img, const Params& p, double severity, Rng& rng) {
  const double amount = severity * p.get("max_frac");
  const double w = img.width - 1;
  const double h = img.height - 1;
  const std::array<std::array<double, 2>, 4> dst = {{{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}}};
  std::array<std::array<double, 2>, 4> src{};
  for (std::size_t i = 0; i < 4; ++i) {
    src[i][0] = dst[i][0] + amount * img.width * rng.uniform(-1.0, 1.0);
    src[i][1] = dst[i][1] + amount * img.height * rng.uniform(-1.0, 1.0);
  }
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const double x = dst[static_cast<std::size_t>(i)][0];
    const double y = dst[static_cast<std::size_t>(i)][1];
    const double u = src[static_cast<std::size_t>(i)][0];
    const double v = src[static_cast<std::size_t>(i)][1];
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  const Eigen::Matrix<double, 8, 1> hm = a.fullPivLu().solve(b);
  img = warp(img, [&](double x, double y, double& sx, double& sy) {
    const double denom = hm(6) * x + hm(7) * y + 1.0;
    sx = (hm(0) * x + hm(1) * y + hm(2)) / denom;
    sy = (hm(3) * x + hm(4) * y + hm(5)) / denom;
  });
}

namespace {

// Piecewise-linear axis map: uniform output cells, source cells stretched
// by random factors.
std::vector<double> grid_axis_map(int length, int cells, double limit, Rng& rng) {
  std::vector<double> steps(static_cast<std::size_t>(cells));
  for (double& s : steps) s = 1.0 + limit * rng.uniform(-1.0, 1.0);
  const double cell = static_cast<double>(length) / cells;
  std::vector<double> map(static_cast<std::size_t>(length));
  double source_start = 0.0;
  for (int c = 0; c < cells; ++c) {
    const int begin = static_cast<int>(std::lround(c * cell));
    const int end = std::min(length, static_cast<int>(std::lround((c + 1) * cell)));
    for (int i = begin; i < end; ++i) map[static_cast<std::size_t>(i)] = source_start + (i - begin) * steps[static_cast<std::size_t>(c)];
    source_start += (end - begin) * steps[static_cast<std::size_t>(c)];
  }
  return map;
}

}  // namespace

void grid_distortion(Raster& img, const Params& p, double severity, Rng& rng) {
  const int cells = static_cast<int>(p.get("cells"));
  const double limit = severity * p.get("distort_limit");
  const std::vector<double> mx = grid_axis_map(img.width, cells, limit, rng);
  const std::vector<double> my = grid_axis_map(img.height, cells, limit, rng);
  img = warp(img, [&](double x, double y, double& sx, double& sy) {
    sx = mx[static_cast<std::size_t>(x)];
    sy = my[static_cast<std::size_t>(y)];
  });
}

}  // namespace corrbench::detail
