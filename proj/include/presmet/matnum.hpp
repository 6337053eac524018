#pragma once

// Small dense-matrix numerics: eigenvalues with a deterministic ordering,
// spectral radius, rank-one eigenprojections, cross-ratios (d <= 10).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "presmet/core.hpp"

namespace presmet {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct EigenData {
  std::vector<std::complex<double>> eigenvalues;  // |.| desc, ties Re desc, Im desc
  Eigen::MatrixXcd eigenvectors;                  // columns in the same order
  bool proximal = false;   // unique simple real top-modulus eigenvalue
  double gap_ratio = 1.0;  // |lambda_1| / |lambda_2|
};

namespace detail {

inline std::vector<int> eigen_order(const Eigen::VectorXcd& ev) {
  std::vector<int> idx(ev.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    double mi = std::abs(ev(i)), mj = std::abs(ev(j));
    if (mi != mj) return mi > mj;
    if (ev(i).real() != ev(j).real()) return ev(i).real() > ev(j).real();
    return ev(i).imag() > ev(j).imag();
  });
  return idx;
}

}  // namespace detail

inline EigenData eigen(const Mat& A) {
  if (A.rows() != A.cols()) throw Error("eigen: matrix must be square");
  if (A.rows() > 10) throw Error("eigen: dimension must be <= 10");
  if (!A.allFinite()) throw Error("eigen: non-finite entries");
  Eigen::EigenSolver<Mat> es(A, true);
  if (es.info() != Eigen::Success) throw NoConvergence("eigen solver");
  auto idx = detail::eigen_order(es.eigenvalues());
  EigenData out;
  int d = static_cast<int>(A.rows());
  out.eigenvalues.reserve(d);
  out.eigenvectors.resize(d, d);
  for (int k = 0; k < d; ++k) {
    out.eigenvalues.push_back(es.eigenvalues()(idx[k]));
    out.eigenvectors.col(k) = es.eigenvectors().col(idx[k]);
  }
  if (d >= 2) {
    double m0 = std::abs(out.eigenvalues[0]);
    double m1 = std::abs(out.eigenvalues[1]);
    out.gap_ratio = m1 > 0 ? m0 / m1 : std::numeric_limits<double>::infinity();
    out.proximal = out.gap_ratio > 1.0 + 1e-8 &&
                   std::abs(out.eigenvalues[0].imag()) <= 1e-9 * m0;
  } else {
    out.gap_ratio = std::numeric_limits<double>::infinity();
    out.proximal = std::abs(out.eigenvalues[0].imag()) <=
                   1e-9 * std::abs(out.eigenvalues[0]);
  }
  return out;
}

inline double spectral_radius(const Mat& A) {
  if (A.rows() != A.cols()) throw Error("spectral_radius: square matrix required");
  if (!A.allFinite()) throw Error("spectral_radius: non-finite entries");
  if (A.cwiseAbs().maxCoeff() == 0.0)
    throw Error("spectral_radius: zero matrix");
  Eigen::EigenSolver<Mat> es(A, false);
  if (es.info() != Eigen::Success) throw NoConvergence("eigen solver");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Rank-one projection onto the k-th eigenline (deterministic eigen order)
// parallel to the span of the remaining eigenspaces. Requires that
// eigenvalue to be real and simple.
inline Mat eigenprojection(const Mat& A, int k) {
  EigenData right = eigen(A);
  int d = static_cast<int>(A.rows());
  if (k < 0 || k >= d) throw Error("eigenprojection: bad index");
  std::complex<double> lam = right.eigenvalues[k];
  double sep = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d; ++j)
    if (j != k) sep = std::min(sep, std::abs(right.eigenvalues[j] - lam));
  if (std::abs(lam.imag()) > 1e-9 * std::abs(lam) || sep <= 1e-8 * std::abs(lam))
    throw NotProximal("eigenvalue not real simple");
  EigenData left = eigen(Mat(A.transpose()));
  // realify: divide by the largest-modulus component
  auto realify = [](Eigen::VectorXcd v) {
    int imax = 0;
    for (int i = 1; i < v.size(); ++i)
      if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    v /= v(imax);
    return Vec(v.real());
  };
  Vec v = realify(right.eigenvectors.col(k));
  Vec w = realify(left.eigenvectors.col(k));
  double s = w.dot(v);
  if (std::abs(s) < 1e-12) throw NotProximal("degenerate left/right pairing");
  return (v * w.transpose()) / s;
}

inline Mat eigenprojection_top(const Mat& A) {
  EigenData ed = eigen(A);
  if (!ed.proximal) throw NotProximal("matrix is not proximal");
  return eigenprojection(A, 0);
}

// [phi, psi, v, w] = phi(v) psi(w) / (phi(w) psi(v))
inline double cross_ratio_forms(Vec phi, Vec psi, Vec v, Vec w) {
  for (Vec* x : {&phi, &psi, &v, &w}) {
    double n = x->norm();
    if (n == 0) throw DegenerateConfiguration("zero argument");
    *x /= n;
  }
  double pw = phi.dot(w), qv = psi.dot(v);
  if (std::abs(pw) <= 1e-12 || std::abs(qv) <= 1e-12)
    throw DegenerateConfiguration("cross ratio denominator vanishes");
  return (phi.dot(v) * psi.dot(w)) / (pw * qv);
}

// B(a,b,c,d) = (a-c)(b-d) / ((a-d)(b-c)) on the boundary circle R u {inf},
// via homogeneous coordinates so infinity needs no special casing.
inline double cross_ratio_boundary(double a, double b, double c, double d) {
  auto homog = [](double x) -> std::pair<double, double> {
    if (std::isinf(x)) return {1.0, 0.0};
    return {x, 1.0};
  };
  auto det = [&](std::pair<double, double> p, std::pair<double, double> q) {
    return p.first * q.second - p.second * q.first;
  };
  auto pa = homog(a), pb = homog(b), pc = homog(c), pd = homog(d);
  double den = det(pa, pd) * det(pb, pc);
  if (std::abs(den) < 1e-300)
    throw DegenerateConfiguration("coincident boundary points");
  return det(pa, pc) * det(pb, pd) / den;
}

}  // namespace presmet
