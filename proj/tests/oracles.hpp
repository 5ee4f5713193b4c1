#pragma once

// Independent reference implementations used only by the tests. None of them
// call into the library paths they check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Grid = std::vector<cplx>;  // n*n, row-major

/// Direct O(n^4) unitary DFT; sign -1 forward, +1 inverse.
inline Grid brute_dft2(const Grid& x, int n, int sign) {
  Grid out(x.size());
  const double scale = 1.0 / n;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      cplx acc = 0.0;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          const double phase = sign * 2.0 * std::numbers::pi * ((k * r + l * c) % n) / n;
          acc += x[r * n + c] * cplx(std::cos(phase), std::sin(phase));
        }
      out[k * n + l] = acc * scale;
    }
  return out;
}

/// |F^H (mask .* F x)| computed by brute force.
inline std::vector<double> brute_zero_filled(const std::vector<double>& x, const std::vector<int>& keep, int n) {
  Grid g(x.begin(), x.end());
  Grid k = brute_dft2(g, n, -1);
  for (int i = 0; i < n * n; ++i)
    if (!keep[i]) k[i] = 0.0;
  Grid back = brute_dft2(k, n, +1);
  std::vector<double> out(x.size());
  for (int i = 0; i < n * n; ++i) out[i] = std::abs(back[i]);
  return out;
}

/// Per-pixel SSIM: for every pixel, walk the 11x11 window explicitly with
/// half-sample symmetric indexing and accumulate weighted moments.
inline double windowed_ssim(const std::vector<double>& x, const std::vector<double>& y, int n, double range) {
  double w[11][11];
  double total_w = 0.0;
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j) {
      const double di = i - 5, dj = j - 5;
      w[i][j] = std::exp(-(di * di + dj * dj) / (2.0 * 1.5 * 1.5));
      total_w += w[i][j];
    }
  auto sym = [n](int i) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - i - 1;
    return i;
  };
  const double c1 = std::pow(0.01 * range, 2), c2 = std::pow(0.03 * range, 2);
  double acc = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
          const int rr = sym(r + i - 5), cc = sym(c + j - 5);
          const double wt = w[i][j] / total_w;
          const double a = x[rr * n + cc], b = y[rr * n + cc];
          mx += wt * a;
          my += wt * b;
          sxx += wt * a * a;
          syy += wt * b * b;
          sxy += wt * a * b;
        }
      const double vx = sxx - mx * mx, vy = syy - my * my, cov = sxy - mx * my;
      acc += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  return acc / (n * n);
}

/// Dense real least-squares operator for A(x) = mask .* F x on real x:
/// rows are the real and imaginary parts of every sampled coefficient.
inline std::vector<std::vector<double>> dense_operator(const std::vector<int>& keep, int n) {
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (!keep[k * n + l]) continue;
      std::vector<double> re(n * n), im(n * n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          const double phase = -2.0 * std::numbers::pi * ((k * r + l * c) % n) / n;
          re[r * n + c] = std::cos(phase) / n;
          im[r * n + c] = std::sin(phase) / n;
        }
      rows.push_back(std::move(re));
      rows.push_back(std::move(im));
    }
  return rows;
}

/// FISTA on min ||b - M d||^2 + lambda ||d||_1 with the dense operator; returns
/// the final objective after `iters` iterations.
inline double fista_objective(const std::vector<std::vector<double>>& M, const std::vector<double>& b, double lambda,
                              int iters) {
  const std::size_t m = M.size(), p = M.front().size();
  std::vector<double> d(p, 0.0), d_prev(p, 0.0), z(p, 0.0);
  auto objective = [&](const std::vector<double>& v) {
    double f = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < p; ++j) s -= M[i][j] * v[j];
      f += s * s;
    }
    for (double e : v) f += lambda * std::abs(e);
    return f;
  };
  // Lipschitz constant of the gradient of ||b - M d||^2 is 2 * ||M||^2 <= 2.
  const double step = 0.5;
  double t = 1.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> grad(p, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double s = -b[i];
      for (std::size_t j = 0; j < p; ++j) s += M[i][j] * z[j];
      for (std::size_t j = 0; j < p; ++j) grad[j] += 2.0 * M[i][j] * s;
    }
    d_prev = d;
    for (std::size_t j = 0; j < p; ++j) {
      const double v = z[j] - step * grad[j];
      const double tau = step * lambda;
      d[j] = v > tau ? v - tau : (v < -tau ? v + tau : 0.0);
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t j = 0; j < p; ++j) z[j] = d[j] + ((t - 1.0) / t_next) * (d[j] - d_prev[j]);
    t = t_next;
  }
  return objective(d);
}

inline std::vector<double> random_vector(std::size_t len, std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(len);
  for (auto& e : v) e = dist(gen);
  return v;
}

}  // namespace oracle
