// Test-side reference constructions, written from scratch with Kronecker
// products so they share no code with the library.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace ref {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Single-site operators in the local basis {down, up}.
inline Mat sx() { Mat m(2, 2); m << 0, 0.5, 0.5, 0; return m; }
inline Mat sy() { Mat m(2, 2); m << 0, cplx(0, 0.5), cplx(0, -0.5), 0; return m; }
inline Mat sz() { Mat m(2, 2); m << -0.5, 0, 0, 0.5; return m; }

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// op on `site` (1-based); site 1 is the least significant factor.
inline Mat on_site(int n, int site, const Mat& op) {
  Mat m = Mat::Identity(1, 1);
  for (int s = n; s >= 1; --s) m = kron(m, s == site ? op : Mat(Mat::Identity(2, 2)));
  return m;
}

inline Mat hamiltonian(int n, double lambda, double delta, double b) {
  const int d = 1 << n;
  Mat h = Mat::Zero(d, d);
  for (int j = 1; j <= n; ++j) {
    const int k = j % n + 1;
    const double c = (j % 2 == 1) ? 1.0 : lambda;
    h += c * (on_site(n, j, sx()) * on_site(n, k, sx()) + on_site(n, j, sy()) * on_site(n, k, sy()) +
              delta * on_site(n, j, sz()) * on_site(n, k, sz()));
  }
  for (int j = 1; j <= n; ++j) h -= b * on_site(n, j, sz());
  return h;
}

// -i (lambda - lambda0) sum_j (-1)^j eps_pqr S^p_j S^q_{j+1} S^r_{j+2}
inline Mat commutator_rhs(int n, double lambda0, double lambda) {
  const Mat s[3] = {sx(), sy(), sz()};
  const int d = 1 << n;
  Mat out = Mat::Zero(d, d);
  for (int j = 1; j <= n; ++j) {
    const int a = j, b = j % n + 1, c = (j + 1) % n + 1;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        for (int r = 0; r < 3; ++r) {
          if (p == q || q == r || p == r) continue;
          const double eps = ((q - p + 3) % 3 == 1) ? 1.0 : -1.0;
          out += sign * eps * on_site(n, a, s[p]) * on_site(n, b, s[q]) * on_site(n, c, s[r]);
        }
  }
  return cplx(0.0, -(lambda - lambda0)) * out;
}

// Reduced matrix by explicit index sums; local bit k is keep[k].
inline Mat reduce(const Eigen::VectorXcd& psi, int n, const std::vector<int>& keep) {
  const int dk = 1 << keep.size();
  Mat rho = Mat::Zero(dk, dk);
  for (int x = 0; x < (1 << n); ++x)
    for (int y = 0; y < (1 << n); ++y) {
      bool same_rest = true;
      for (int s = 1; s <= n && same_rest; ++s) {
        if (std::find(keep.begin(), keep.end(), s) != keep.end()) continue;
        same_rest = ((x >> (s - 1)) & 1) == ((y >> (s - 1)) & 1);
      }
      if (!same_rest) continue;
      int lx = 0, ly = 0;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        lx |= ((x >> (keep[k] - 1)) & 1) << k;
        ly |= ((y >> (keep[k] - 1)) & 1) << k;
      }
      rho(lx, ly) += psi(x) * std::conj(psi(y));
    }
  return rho;
}

inline Eigen::VectorXcd random_state(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return v.normalized();
}

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ref
