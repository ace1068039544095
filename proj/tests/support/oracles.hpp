#pragma once

// Reference computations for the tests. Nothing here calls into the code
// under test beyond plain data types.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_int;

inline Big binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Big r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline Big catalan(unsigned n) { return binomial(2 * n, n) / (n + 1); }

/// Every word of length n over 1..m with A[a-1][b-1] = 1 between neighbours.
inline std::vector<std::vector<std::size_t>> words(const std::vector<std::vector<int>>& a, std::size_t n) {
  std::vector<std::vector<std::size_t>> out, next;
  for (std::size_t s = 1; s <= a.size(); ++s) out.push_back({s});
  for (std::size_t len = 1; len < n; ++len) {
    next.clear();
    for (const auto& w : out) {
      for (std::size_t t = 1; t <= a.size(); ++t) {
        if (a[w.back() - 1][t - 1]) {
          next.push_back(w);
          next.back().push_back(t);
        }
      }
    }
    out.swap(next);
  }
  return out;
}

/// Spectral radius of a small nonnegative matrix from a dense eigensolver.
inline double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
  return r;
}

/// M_ij = A_ij exp(phi_i - beta psi_i) for depth-1 potentials.
inline Eigen::MatrixXd weighted(const std::vector<std::vector<int>>& a, const std::vector<double>& phi,
                                const std::vector<double>& psi, double beta) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (a[i][j]) m(i, j) = std::exp(phi[i] - beta * psi[i]);
    }
  }
  return m;
}

/// Decreasing root of a continuous function by bisection on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int steps = 200) {
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Smallest beta with log rho(A exp(phi - beta psi)) <= 0, dense oracle.
inline double dense_pseudo_inverse(const std::vector<std::vector<int>>& a, const std::vector<double>& phi,
                                   const std::vector<double>& psi) {
  auto f = [&](double b) { return std::log(spectral_radius(weighted(a, phi, psi, b))); };
  double lo = -1.0, hi = 1.0;
  while (f(lo) <= 0.0) lo *= 2.0;
  while (f(hi) > 0.0) hi *= 2.0;
  return bisect(f, lo, hi);
}

/// Root t of sum_k (k(k+1))^-beta e^-tk = 1 for beta >= 0, bracketed by the
/// partial sum and the partial sum plus the geometric tail bound
/// (K(K+1))^-beta e^-t(K+1) / (1 - e^-t).
struct SeriesRoot {
  double lower = 0.0;
  double upper = 0.0;
};

inline SeriesRoot harmonic_series_root(double beta) {
  auto partial = [beta](double t, std::size_t k_max) {
    double s = 0.0;
    for (std::size_t k = k_max; k >= 1; --k) {
      const double kk = static_cast<double>(k);
      s += std::exp(-beta * std::log(kk * (kk + 1.0)) - t * kk);
    }
    return s;
  };
  auto cutoff = [](double t) { return static_cast<std::size_t>(std::ceil(60.0 / t)) + 10; };
  auto tail = [beta](double t, std::size_t k_max) {
    const double kk = static_cast<double>(k_max);
    return std::exp(-beta * std::log(kk * (kk + 1.0)) - t * (kk + 1.0)) / -std::expm1(-t);
  };
  // g_lo <= true sum - 1 <= g_hi, so root(g_lo) <= t* <= root(g_hi).
  auto g_lo = [&](double t) { return partial(t, cutoff(t)) - 1.0; };
  auto g_hi = [&](double t) { const auto k = cutoff(t); return partial(t, k) + tail(t, k) - 1.0; };
  double lo = 1e-3, hi = 10.0;
  SeriesRoot r;
  r.lower = bisect(g_lo, lo, hi, 80);
  r.upper = bisect(g_hi, lo, hi, 80);
  return r;
}

}  // namespace oracle
