#pragma once

// Representations into SL_d(R): Schottky free-group reps, the genus-2
// Fuchsian rep from the regular octagon, symmetric powers tau_d, analytic
// one-parameter paths, and contragredient-antisymmetric paths.

#include <cmath>
#include <complex>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "presmet/matnum.hpp"
#include "presmet/words.hpp"

namespace presmet {

struct Representation {
  GroupSpec spec;
  int dim = 2;
  std::string label;
  std::vector<Mat> images;  // indexed by Gen (generators and inverses)

  const Mat& image(Gen g) const { return images[g]; }
};

inline double relator_defect(const std::vector<Mat>& images, int dim) {
  Mat R = Mat::Identity(dim, dim);
  for (Gen g : GroupSpec::relator()) R = R * images[g];
  Mat I = Mat::Identity(dim, dim);
  return std::min((R - I).cwiseAbs().maxCoeff(), (R + I).cwiseAbs().maxCoeff());
}

// Build a representation from generator images; inverse images are derived.
// Images are rescaled to |det| = 1; the surface relator is verified.
inline Representation make_representation(const GroupSpec& spec,
                                          const std::vector<Mat>& gens,
                                          std::string label) {
  if (static_cast<int>(gens.size()) != spec.rank)
    throw Error("make_representation: need one image per generator");
  Representation rep;
  rep.spec = spec;
  rep.dim = static_cast<int>(gens[0].rows());
  rep.label = std::move(label);
  rep.images.resize(spec.alphabet());
  for (int i = 0; i < spec.rank; ++i) {
    Mat A = gens[i];
    if (A.rows() != rep.dim || A.cols() != rep.dim)
      throw Error("make_representation: inconsistent dimensions");
    double det = A.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-9)
      A /= std::pow(std::abs(det), 1.0 / rep.dim);
    if (A.determinant() < 0 && rep.dim % 2 == 1) A = -A;
    rep.images[2 * i] = A;
    rep.images[2 * i + 1] = A.inverse();
  }
  if (spec.kind == GroupSpec::Kind::SurfaceGenus2 &&
      relator_defect(rep.images, rep.dim) > 1e-6)
    throw RelatorViolation("relator does not evaluate to +-identity");
  return rep;
}

inline Mat evaluate(const Representation& rep, const Gen* w, int n) {
  Mat M = Mat::Identity(rep.dim, rep.dim);
  for (int i = 0; i < n; ++i) M = M * rep.images[w[i]];
  return M;
}
inline Mat evaluate(const Representation& rep, const Word& w) {
  return evaluate(rep, w.letters.data(), static_cast<int>(w.letters.size()));
}
inline Mat evaluate(const Representation& rep, const Necklace& w) {
  return evaluate(rep, w.letters.data(), static_cast<int>(w.letters.size()));
}

// Hyperbolic element of SL_2(R) with axis (p, q) (attracting endpoint p) and
// eigenvalue ratio `multiplier` = lambda^2 > 1.
inline Mat sl2_hyperbolic(double multiplier, double p, double q) {
  if (multiplier <= 1.0) throw Error("multiplier must exceed 1");
  if (p == q) throw Error("axis endpoints coincide");
  double s = std::sqrt(multiplier);
  Mat C(2, 2);  // columns: fixed points in homogeneous coordinates
  if (std::isinf(p))
    C.col(0) << 1, 0;
  else
    C.col(0) << p, 1;
  if (std::isinf(q))
    C.col(1) << 1, 0;
  else
    C.col(1) << q, 1;
  double det = C.determinant();
  if (std::abs(det) < 1e-12) throw Error("axis endpoints coincide");
  C /= std::sqrt(std::abs(det));
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = s;
  D(1, 1) = 1.0 / s;
  return C * D * C.inverse();
}

// Free-group Schottky representation; ping-pong is certified by pairwise
// disjointness of the isometric circles of the generators and inverses.
inline Representation schottky_sl2(
    const std::vector<double>& multipliers,
    const std::vector<std::pair<double, double>>& axes,
    std::string label = "schottky") {
  if (multipliers.size() != axes.size() || multipliers.empty())
    throw Error("schottky_sl2: need one multiplier per axis");
  int k = static_cast<int>(multipliers.size());
  std::vector<Mat> gens;
  for (int i = 0; i < k; ++i)
    gens.push_back(sl2_hyperbolic(multipliers[i], axes[i].first, axes[i].second));
  if (k > 1) {
    std::vector<std::pair<double, double>> circles;  // center, radius
    for (const Mat& G : gens)
      for (const Mat& M : {G, Mat(G.inverse())}) {
        double c = M(1, 0);
        if (std::abs(c) < 1e-9)
          throw PingPongFailure("generator fixes infinity");
        circles.emplace_back(-M(1, 1) / c, 1.0 / std::abs(c));
      }
    for (std::size_t i = 0; i < circles.size(); ++i)
      for (std::size_t j = i + 1; j < circles.size(); ++j)
        if (std::abs(circles[i].first - circles[j].first) <=
            circles[i].second + circles[j].second)
          throw PingPongFailure("isometric circles intersect");
  }
  return make_representation(GroupSpec::free_group(k), gens, std::move(label));
}

struct OctagonParams {
  std::array<double, 8> vertex_angles{};  // must sum to 2*pi; regular = pi/4
  bool counterclockwise = true;
  double twist = 0.0;  // Fenchel-Nielsen-style twist along the axis of [a,b]

  OctagonParams() { vertex_angles.fill(std::acos(-1.0) / 4.0); }
};

namespace detail {

using C2 = Eigen::Matrix2cd;
using cd = std::complex<double>;

inline cd moebius(const C2& M, cd z) {
  return (M(0, 0) * z + M(0, 1)) / (M(1, 0) * z + M(1, 1));
}

// Regular-octagon side pairings in SU(1,1), conjugated to SL(2,R).
inline std::vector<Mat> octagon_generators() {
  const double pi = std::acos(-1.0);
  // circumradius of the regular octagon with vertex angles pi/4:
  // cosh R = cot^2(pi/8) = 3 + 2 sqrt(2)
  double cot8 = 1.0 / std::tan(pi / 8.0);
  double R = std::acosh(cot8 * cot8);
  double re = std::tanh(R / 2.0);
  std::array<cd, 8> v;
  for (int k = 0; k < 8; ++k)
    v[k] = re * std::exp(cd(0, 2.0 * pi * k / 8.0));
  auto to_zero = [](cd p) {
    C2 T;
    T << 1.0, -p, -std::conj(p), 1.0;
    return T;
  };
  auto rot = [](double th) {
    C2 T;
    T << std::exp(cd(0, th / 2)), 0.0, 0.0, std::exp(cd(0, -th / 2));
    return T;
  };
  // orientation-preserving disk isometry with p1 -> q1, p2 -> q2
  auto isom = [&](cd p1, cd p2, cd q1, cd q2) {
    C2 T1 = to_zero(p1), T2 = to_zero(q1);
    double th = std::arg(moebius(T2, q2)) - std::arg(moebius(T1, p2));
    C2 G = T2.inverse() * rot(th) * T1;
    return C2(G / std::sqrt(G.determinant()));
  };
  // side s_k runs from v_k to v_{k+1}; boundary word a b A B c d C D
  auto pairing = [&](int ki, int kd) {
    return isom(v[(ki + 1) % 8], v[ki % 8], v[kd % 8], v[(kd + 1) % 8]);
  };
  C2 A = pairing(2, 0);
  C2 B = pairing(3, 1).inverse();
  C2 Cg = pairing(6, 4);
  C2 D = pairing(7, 5).inverse();
  // Cayley transform: SL(2,R) = C1^{-1} SU(1,1) C1
  C2 C1;
  C1 << 1.0, cd(0, -1), 1.0, cd(0, 1);
  std::vector<Mat> out;
  for (const C2& M : {A, B, Cg, D}) {
    C2 S = C1.inverse() * M * C1;
    if (S.imag().cwiseAbs().maxCoeff() > 1e-12)
      throw Error("octagon conversion to SL(2,R) failed");
    out.push_back(Mat(S.real()));
  }
  return out;
}

// real power of a hyperbolic SL2 matrix through its eigenbasis
inline Mat sl2_power(const Mat& K, double s) {
  EigenData ed = eigen(K);
  if (!ed.proximal) throw NotProximal("twist element is not hyperbolic");
  double lam = ed.eigenvalues[0].real();
  double mu = ed.eigenvalues[1].real();
  auto realify = [](Eigen::VectorXcd v) {
    int imax = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    v /= v(imax);
    return Vec(v.real()).normalized();
  };
  Mat V(2, 2);
  V.col(0) = realify(ed.eigenvectors.col(0));
  V.col(1) = realify(ed.eigenvectors.col(1));
  Mat D = Mat::Zero(2, 2);
  double sgn = lam < 0 ? -1.0 : 1.0;  // hyperbolic in PSL: use |eigenvalues|
  D(0, 0) = sgn * std::pow(std::abs(lam), s);
  D(1, 1) = sgn * std::pow(std::abs(mu), s);
  return V * D * V.inverse();
}

}  // namespace detail

// Discrete faithful genus-2 representation from the regular hyperbolic
// octagon with vertex angles pi/4 (angle sum 2*pi), optionally twisted along
// the axis of [a,b].
inline Representation fuchsian_genus2(const OctagonParams& params = {},
                                      std::string label = "fuchsian-genus2") {
  const double pi = std::acos(-1.0);
  double sum = 0;
  for (double a : params.vertex_angles) sum += a;
  if (std::abs(sum - 2 * pi) > 1e-9)
    throw Error("octagon vertex angles must sum to 2*pi");
  if (!params.counterclockwise)
    throw Error("octagon orientation must be counterclockwise");
  for (double a : params.vertex_angles)
    if (std::abs(a - pi / 4) > 1e-12)
      throw Error("only the regular octagon (all angles pi/4) is supported");
  auto gens = detail::octagon_generators();
  if (params.twist != 0.0) {
    Mat K = gens[0] * gens[1] * gens[0].inverse() * gens[1].inverse();
    Mat h = detail::sl2_power(K, params.twist);
    Mat hi = h.inverse();
    gens[2] = h * gens[2] * hi;
    gens[3] = h * gens[3] * hi;
  }
  return make_representation(GroupSpec::surface_genus2(), gens, std::move(label));
}

// Symmetric-power image: action on degree-(d-1) homogeneous polynomials in
// the monomial basis {x^{d-1}, x^{d-2}y, ..., y^{d-1}}.
inline Mat tau_d(const Mat& g, int d) {
  if (g.rows() != 2 || g.cols() != 2) throw Error("tau_d: need a 2x2 matrix");
  if (d < 2 || d > 10) throw Error("tau_d: d must be in [2,10]");
  double a = g(0, 0), b = g(0, 1), c = g(1, 0), dd = g(1, 1);
  auto binom = [](int n, int k) {
    double r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
  };
  int n = d - 1;
  Mat T = Mat::Zero(d, d);
  // column j: (a x + c y)^{n-j} (b x + d y)^j expanded over rows i (x^{n-i} y^i)
  for (int j = 0; j <= n; ++j) {
    for (int p = 0; p <= n - j; ++p) {
      for (int q = 0; q <= j; ++q) {
        int i = n - (p + q);  // y-exponent
        T(i, j) += binom(n - j, p) * std::pow(a, p) * std::pow(c, n - j - p) *
                   binom(j, q) * std::pow(b, q) * std::pow(dd, j - q);
      }
    }
  }
  return T;
}

inline Representation tau_rep(const Representation& rep, int d,
                              std::string label = "") {
  if (rep.dim != 2) throw Error("tau_rep: base representation must be SL_2");
  Representation out;
  out.spec = rep.spec;
  out.dim = d;
  out.label = label.empty() ? rep.label + "-tau" + std::to_string(d) : label;
  out.images.resize(rep.images.size());
  for (std::size_t g = 0; g < rep.images.size(); ++g)
    out.images[g] = tau_d(rep.images[g], d);
  return out;
}

// One-parameter analytic family of representations. Default form is
// A_i(t) = exp(t X_i) A_i(0); families with an exact closed form (for
// example Fuchsian twists) provide a callback instead.
struct RepPath {
  Representation base;
  std::vector<Mat> directions;  // one X per generator (empty when `family` set)
  std::function<Representation(double)> family;
  std::string label;

  Representation at(double t) const {
    if (family) return family(t);
    if (t == 0.0) return base;
    bool constant = true;
    for (const Mat& X : directions)
      if (X.cwiseAbs().maxCoeff() != 0.0) constant = false;
    if (constant) return base;  // keep constant paths exact
    std::vector<Mat> gens;
    for (int i = 0; i < base.spec.rank; ++i)
      gens.push_back(Mat((t * directions[i]).exp() * base.images[2 * i]));
    Representation rep = make_representation(base.spec, gens, base.label);
    rep.label += "@t=" + std::to_string(t);
    return rep;
  }
};

inline RepPath make_path(const Representation& rep, std::vector<Mat> directions,
                         std::string label = "path") {
  if (static_cast<int>(directions.size()) != rep.spec.rank)
    throw Error("make_path: need one direction per generator");
  RepPath path;
  path.base = rep;
  path.directions = std::move(directions);
  path.label = std::move(label);
  if (rep.spec.kind == GroupSpec::Kind::SurfaceGenus2) {
    for (double t : {-0.05, -0.01, 0.01, 0.05}) {
      std::vector<Mat> gens;
      for (int i = 0; i < rep.spec.rank; ++i)
        gens.push_back(Mat((t * path.directions[i]).exp() * rep.images[2 * i]));
      std::vector<Mat> all(rep.spec.alphabet());
      for (int i = 0; i < rep.spec.rank; ++i) {
        all[2 * i] = gens[i];
        all[2 * i + 1] = gens[i].inverse();
      }
      if (relator_defect(all, rep.dim) > 1e-6)
        throw RelatorViolation("path violates the surface relator");
    }
  }
  return path;
}

// Fuchsian twist family composed with tau_d (d = 2 gives the SL2 family).
inline RepPath fuchsian_twist_path(double scale, int d = 2,
                                   double base_twist = 0.0) {
  RepPath path;
  OctagonParams base_params;
  base_params.twist = base_twist;
  Representation base = fuchsian_genus2(base_params);
  path.base = d == 2 ? base : tau_rep(base, d);
  path.label = "fuchsian-twist-d" + std::to_string(d);
  path.family = [scale, d, base_twist](double t) {
    OctagonParams p;
    p.twist = base_twist + scale * t;
    Representation rep = fuchsian_genus2(p);
    return d == 2 ? rep : tau_rep(rep, d);
  };
  return path;
}

// Bilinear form preserved by tau_d of SL_2: J[k, d-1-k] = (-1)^k / C(d-1,k).
inline Mat contragredient_form(int d) {
  Mat J = Mat::Zero(d, d);
  double binom = 1.0;
  for (int k = 0; k < d; ++k) {
    J(k, d - 1 - k) = (k % 2 ? -1.0 : 1.0) / binom;
    binom = binom * (d - 1 - k) / (k + 1);
  }
  return J;
}

struct ContragredientData {
  Mat J;
};

// Verify that rho is fixed by the contragredient involution through J:
// (rho(γ)^{-1})^T = J rho(γ) J^{-1} on sampled classes.
inline ContragredientData contragredient_data(const Representation& rep,
                                              const Mat& J) {
  std::vector<Word> samples;
  for (int i = 0; i < rep.spec.rank; ++i)
    samples.push_back(Word({static_cast<Gen>(2 * i)}));
  samples.push_back(Word({0, 2}));
  samples.push_back(Word({0, 3, 2}));
  Mat Ji = J.inverse();
  for (const Word& w : samples) {
    Mat M = evaluate(rep, w);
    Mat lhs = M.inverse().transpose();
    Mat rhs = J * M * Ji;
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-7 * rhs.cwiseAbs().maxCoeff())
      throw SymmetryViolation("representation does not preserve the form J");
  }
  return ContragredientData{J};
}

// Path with sigma-hat(eta_t) = eta_{-t}: requires J X_i = X_i^T J, which
// makes (A_i(t)^{-1})^T = J A_i(-t) J^{-1} and Hilbert lengths even in t.
inline RepPath contragredient_path(const Representation& rep,
                                   const ContragredientData& data,
                                   std::vector<Mat> directions,
                                   std::string label = "contragredient-path") {
  for (const Mat& X : directions) {
    Mat lhs = data.J * X, rhs = X.transpose() * data.J;
    if ((lhs - rhs).cwiseAbs().maxCoeff() >
        1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
      throw SymmetryViolation("direction is not J-symmetric");
  }
  RepPath path = make_path(rep, std::move(directions), std::move(label));
  Mat Ji = data.J.inverse();
  for (double t : {0.01, 0.05}) {
    Representation plus = path.at(t), minus = path.at(-t);
    for (int i = 0; i < rep.spec.rank; ++i) {
      Mat lhs = plus.images[2 * i].inverse().transpose();
      Mat rhs = data.J * minus.images[2 * i] * Ji;
      if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-7 * rhs.cwiseAbs().maxCoeff())
        throw SymmetryViolation("path breaks the contragredient symmetry");
    }
  }
  return path;
}

// --- plain-text serialization -------------------------------------------

inline void write_representation(std::ostream& os, const Representation& rep) {
  os << "presmet-representation v1\n";
  os << "label " << rep.label << "\n";
  os << "group "
     << (rep.spec.kind == GroupSpec::Kind::Free ? "free" : "surface-genus-2")
     << " " << rep.spec.rank << "\n";
  os << "dim " << rep.dim << "\n";
  os.precision(17);
  for (int i = 0; i < rep.spec.rank; ++i) {
    os << "generator " << i << "\n";
    const Mat& A = rep.images[2 * i];
    for (int r = 0; r < rep.dim; ++r) {
      for (int c = 0; c < rep.dim; ++c) os << (c ? " " : "") << A(r, c);
      os << "\n";
    }
  }
}

inline Representation read_representation(std::istream& is) {
  std::string line, tag;
  if (!std::getline(is, line) || line != "presmet-representation v1")
    throw Error("bad representation header");
  std::string label, kind;
  int rank = 0, dim = 0;
  is >> tag >> std::ws;
  std::getline(is, label);
  if (tag != "label") throw Error("expected label");
  is >> tag >> kind >> rank;
  if (tag != "group") throw Error("expected group");
  is >> tag >> dim;
  if (tag != "dim") throw Error("expected dim");
  GroupSpec spec = kind == "free" ? GroupSpec::free_group(rank)
                                  : GroupSpec::surface_genus2();
  std::vector<Mat> gens;
  for (int i = 0; i < rank; ++i) {
    int idx;
    is >> tag >> idx;
    if (tag != "generator") throw Error("expected generator");
    Mat A(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) is >> A(r, c);
    gens.push_back(A);
  }
  return make_representation(spec, gens, label);
}

}  // namespace presmet
