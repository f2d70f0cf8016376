#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "corrbench/corruptions.hpp"

namespace oracle {

long double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

double t_test_p_value(double r, std::size_t n) {
  const double nu = static_cast<double>(n) - 2.0;
  if (std::fabs(r) >= 1.0) return 0.0;
  const double t = std::fabs(r) * std::sqrt(nu / (1.0 - r * r));
  const double log_norm = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) - 0.5 * std::log(nu * M_PI);
  auto density = [&](double x) { return std::exp(log_norm - (nu + 1) / 2 * std::log1p(x * x / nu)); };
  // Upper tail of the density, via x = t / u on u in (0, 1], or via
  // [0, t] when t is small enough that the substitution is not needed.
  // The integrand has a nonzero limit at u = 0 when nu = 1, so the first
  // node is taken just inside the interval.
  const int steps = 20000;
  double integral = 0.0;
  if (t > 1.0) {
    auto g = [&](double u) {
      u = std::max(u, 1e-9);
      return density(t / u) * t / (u * u);
    };
    const double h = 1.0 / steps;
    for (int i = 0; i <= steps; ++i) {
      const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      integral += w * g(i * h);
    }
    integral *= h / 3.0;
    return std::min(1.0, 2.0 * integral);
  }
  const double h = t / steps;
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += w * density(i * h);
  }
  integral *= h / 3.0;
  return std::clamp(1.0 - 2.0 * integral, 0.0, 1.0);
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ra[a[i]];
    ++rb[b[i]];
  }
  auto c2 = [](long long v) { return static_cast<double>(v) * (v - 1) / 2.0; };
  double index = 0, sa = 0, sb = 0;
  for (const auto& [k, v] : joint) index += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<long long>(a.size()));
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

PlantedMatrix planted_matrix(std::uint64_t seed, const std::vector<int>& block_sizes, double within, double across,
                             double sigma) {
  std::vector<int> labels;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) labels.insert(labels.end(), block_sizes[b], static_cast<int>(b));
  const std::size_t n = labels.size();
  std::vector<std::string> ids;
  const auto& roster = corrbench::list_corruptions();
  for (std::size_t i = 0; i < n; ++i) ids.push_back(i < roster.size() ? roster[i].id : "c" + std::to_string(i));

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  corrbench::OverlapMatrix m(ids);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = std::clamp((labels[i] == labels[j] ? within : across) + noise(gen), 0.0, 1.0);
      m(i, j) = m(j, i) = v;
    }
  }
  return {std::move(m), std::move(labels)};
}

PlantedMatrix planted_roster_matrix(std::uint64_t seed) { return planted_matrix(seed, {7, 7, 7, 7, 6, 6}); }

double brute_force_mean_r(const std::vector<corrbench::Benchmark>& group, const corrbench::AccuracyTable& table,
                          const std::string& natural_id) {
  std::map<std::string, std::map<std::string, double>> acc;
  for (const auto& [key, v] : table.entries()) acc[key.first][key.second] = v;
  std::vector<std::string> models;
  for (const auto& [m, row] : acc) {
    if (row.count("clean") && row.count(natural_id)) models.push_back(m);
  }
  std::vector<double> natural;
  for (const auto& m : models) natural.push_back(acc[m]["clean"] - acc[m][natural_id]);

  long double total = 0;
  int used = 0;
  for (const auto& b : group) {
    std::vector<double> scores;
    for (const auto& m : models) {
      long double s = 0;
      for (const auto& c : b.corruptions) s += acc[m]["clean"] - acc[m].at(c);
      scores.push_back(static_cast<double>(s / b.corruptions.size()));
    }
    if (std::all_of(scores.begin(), scores.end(), [&](double v) { return v == scores.front(); })) continue;
    total += pearson(natural, scores);
    ++used;
  }
  return static_cast<double>(total / used);
}

std::vector<corrbench::Image> fixture_images() {
  using corrbench::Image;
  std::vector<Image> out;
  auto make = [](int w, int h, auto fn) {
    Image img(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(fn(x, y, c));
      }
    }
    return img;
  };
  out.push_back(make(32, 24, [](int x, int y, int c) { return (x * 8 + y * 3 + c * 40) % 256; }));
  out.push_back(make(33, 17, [](int x, int y, int) { return ((x / 4 + y / 4) % 2) ? 230 : 20; }));
  std::mt19937 gen(7);
  out.push_back(make(24, 24, [&](int, int, int) { return static_cast<int>(gen() % 256); }));
  out.push_back(make(16, 16, [](int, int, int c) { return c == 0 ? 200 : c == 1 ? 60 : 90; }));
  out.push_back(make(1, 1, [](int, int, int c) { return 50 + 60 * c; }));
  out.push_back(make(40, 1, [](int x, int, int c) { return (x * 6 + c * 70) % 256; }));
  out.push_back(make(1, 29, [](int, int y, int c) { return (y * 9 + c * 30) % 256; }));
  out.push_back(make(20, 20, [](int, int, int) { return 0; }));
  out.push_back(make(20, 20, [](int, int, int) { return 255; }));
  out.push_back(make(45, 31, [](int x, int y, int c) {
    const double d = std::hypot(x - 22.0, y - 15.0);
    return static_cast<int>(127.5 + 127.5 * std::sin(d / 3.0 + c));
  }));
  return out;
}

}  // namespace oracle
