#pragma once

// Thermodynamic estimators over marked length spectra: entropy, pressure,
// intersection and renormalized intersection, the pressure form, and the
// degenerate-direction / limit-identity diagnostics.
//
// Every limit is reported as a per-cutoff sequence plus a fitted value and a
// convergence indicator. Aggregates run in canonical class order with
// compensated summation, so results are bitwise reproducible.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "presmet/lengths.hpp"

namespace presmet {

struct ThermoEstimate {
  double value = 0.0;
  std::vector<double> cutoffs;
  std::vector<double> per_cutoff;
  double convergence = 0.0;  // max successive relative change
  std::string method;
  std::map<std::string, double> extras;
};

struct SpectrumFunction {
  std::string label;
  std::vector<double> periods;  // aligned with the base spectrum's classes
};

namespace detail {

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double get() const { return s; }
};

inline double convergence_of(const std::vector<double>& seq) {
  double conv = 0.0;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    double denom = std::max(std::abs(seq[i]), 1e-300);
    conv = std::max(conv, std::abs(seq[i] - seq[i - 1]) / denom);
  }
  return conv;
}

// least-squares slope of y against x
inline double lsq_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientData("need at least two points for a slope");
  double n = static_cast<double>(x.size());
  KahanSum sx, sy, sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
    sxx.add(x[i] * x[i]);
    sxy.add(x[i] * y[i]);
  }
  double den = n * sxx.get() - sx.get() * sx.get();
  if (std::abs(den) < 1e-300) throw InsufficientData("degenerate abscissae");
  return (n * sxy.get() - sx.get() * sy.get()) / den;
}

// log sum exp over the given indices, canonical order
inline double lse(const std::vector<int>& idx, const std::vector<double>& u,
                  const std::vector<double>& v, double s) {
  double m = -std::numeric_limits<double>::infinity();
  for (int i : idx) m = std::max(m, u[i] - s * v[i]);
  KahanSum acc;
  for (int i : idx) acc.add(std::exp(u[i] - s * v[i] - m));
  return m + std::log(acc.get());
}

// classes partitioned by base length into annuli (T_{i-1}, T_i] between
// consecutive cutoffs; classes at or below the first cutoff are excluded so
// a single bulk bin cannot dominate the asymptotic fit
struct Annuli {
  std::vector<std::vector<int>> idx;
  std::vector<double> tbar;  // mean base length per annulus
};

inline Annuli build_annuli(const std::vector<double>& base,
                           const std::vector<double>& cutoffs) {
  if (cutoffs.size() < 3) throw InsufficientData("need at least three cutoffs");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (!(cutoffs[i] > cutoffs[i - 1]))
      throw Error("cutoffs must be strictly increasing");
  Annuli out;
  std::vector<std::vector<int>> bins(cutoffs.size() - 1);
  for (int i = 0; i < static_cast<int>(base.size()); ++i) {
    double l = base[i];
    if (l <= cutoffs.front() || l > cutoffs.back()) continue;
    std::size_t b = 0;
    while (l > cutoffs[b + 1]) ++b;
    bins[b].push_back(i);
  }
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (bins[b].size() < 2) continue;  // skip empty/degenerate annuli
    KahanSum m;
    for (int i : bins[b]) m.add(base[i]);
    out.idx.push_back(std::move(bins[b]));
    out.tbar.push_back(m.get() / out.idx.back().size());
  }
  if (out.idx.size() < 2)
    throw InsufficientData("fewer than two populated annuli");
  return out;
}

// slope over annuli of log(tbar_i) + LSE_i(u - s v), as a function of s
inline double annulus_slope(const Annuli& an, const std::vector<double>& u,
                            const std::vector<double>& v, double s) {
  std::vector<double> y(an.idx.size());
  for (std::size_t i = 0; i < an.idx.size(); ++i)
    y[i] = std::log(an.tbar[i]) + lse(an.idx[i], u, v, s);
  return lsq_slope(an.tbar, y);
}

// root s* of annulus_slope(s) = 0; the critical exponent of the weighted
// orbit sum, equal to the pressure P(u) when v is the base length
inline double annulus_root(const Annuli& an, const std::vector<double>& u,
                           const std::vector<double>& v, double lo, double hi,
                           int iters = 120) {
  double flo = annulus_slope(an, u, v, lo);
  double fhi = annulus_slope(an, u, v, hi);
  if (!(flo > 0.0) || !(fhi < 0.0))
    throw BracketFailure("pressure root not bracketed");
  for (int k = 0; k < iters; ++k) {
    double mid = 0.5 * (lo + hi);
    if (annulus_slope(an, u, v, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> zeros(std::size_t n) {
  return std::vector<double>(n, 0.0);
}

}  // namespace detail

// cutoff ladder spanning the metrically complete window
inline std::vector<double> default_cutoffs(double complete_T) {
  std::vector<double> out;
  for (double f : {0.55, 0.64, 0.73, 0.82, 0.91, 1.0})
    out.push_back(f * complete_T);
  return out;
}

inline std::vector<double> default_cutoffs(const MarkedSpectrum& sp) {
  return default_cutoffs(sp.metric_complete_T());
}

// --- entropy ---------------------------------------------------------------
//
// Orbit growth is #R_T ~ e^{hT} / (hT); the least-squares slope of
// log #R_T + log T against T removes the prefactor bias that the raw ratio
// log #R_T / T carries at desk-scale cutoffs. The raw ratios are reported
// per cutoff.

namespace detail {

inline ThermoEstimate entropy_from_counts(const std::vector<double>& cutoffs,
                                          const std::vector<double>& counts) {
  if (cutoffs.size() < 3)
    throw InsufficientData("entropy needs at least three cutoffs");
  ThermoEstimate est;
  est.method = "entropy-slope";
  est.cutoffs = cutoffs;
  std::vector<double> y(cutoffs.size());
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (counts[i] < 10)
      throw InsufficientData("fewer than 10 classes below a cutoff");
    y[i] = std::log(counts[i]) + std::log(cutoffs[i]);
    est.per_cutoff.push_back(std::log(counts[i]) / cutoffs[i]);
  }
  est.value = lsq_slope(cutoffs, y);
  est.convergence = convergence_of(est.per_cutoff);
  return est;
}

}  // namespace detail

inline ThermoEstimate entropy(const MarkedSpectrum& sp,
                              const std::vector<double>& cutoffs) {
  std::vector<double> counts(cutoffs.size(), 0.0);
  for (double l : sp.lengths)
    for (std::size_t i = 0; i < cutoffs.size(); ++i)
      if (l <= cutoffs[i]) counts[i] += 1.0;
  return detail::entropy_from_counts(cutoffs, counts);
}

inline ThermoEstimate entropy(const LengthHistogram& hist, int cap,
                              const std::vector<double>& cutoffs) {
  std::vector<double> counts;
  for (double T : cutoffs)
    counts.push_back(static_cast<double>(hist.count_below(T, cap)));
  ThermoEstimate est = detail::entropy_from_counts(cutoffs, counts);
  est.extras["cap"] = cap;
  return est;
}

// --- pressure ---------------------------------------------------------------
//
// Per-cutoff values are the literal truncations (1/T) log sum e^{g(a)} over
// R_T. The headline value is the critical exponent s* of the annulus-indexed
// weighted orbit sum (root of the slope of log tbar_i + LSE_i(g - s l)),
// which removes the same O(1/T) prefactor bias and turns the shift identity
// P(g + c l) = P(g) + c into an exact property of the root.

inline ThermoEstimate pressure(const MarkedSpectrum& base,
                               const SpectrumFunction& g,
                               const std::vector<double>& cutoffs) {
  if (g.periods.size() != base.classes.size())
    throw MismatchedIndex("spectrum function not aligned with base spectrum");
  ThermoEstimate est;
  est.method = "pressure-annulus-root";
  est.cutoffs = cutoffs;
  for (double T : cutoffs) {
    std::vector<int> in;
    for (int i = 0; i < static_cast<int>(base.lengths.size()); ++i)
      if (base.lengths[i] <= T) in.push_back(i);
    if (in.size() < 10)
      throw InsufficientData("fewer than 10 classes below a cutoff");
    est.per_cutoff.push_back(
        detail::lse(in, g.periods, detail::zeros(base.lengths.size()), 0.0) /
        T);
  }
  detail::Annuli an = detail::build_annuli(base.lengths, cutoffs);
  est.value = detail::annulus_root(an, g.periods, base.lengths, -40.0, 40.0);
  est.convergence = detail::convergence_of(est.per_cutoff);
  return est;
}

// Root h of P(-h l) = 0 (Bowen equation); equals the critical exponent of
// the unweighted orbit sum.
inline ThermoEstimate solve_entropy_by_pressure(
    const MarkedSpectrum& sp, const std::vector<double>& cutoffs) {
  detail::Annuli an = detail::build_annuli(sp.lengths, cutoffs);
  ThermoEstimate est;
  est.method = "entropy-pressure-root";
  est.cutoffs = cutoffs;
  est.value = detail::annulus_root(an, detail::zeros(sp.lengths.size()),
                                   sp.lengths, 1e-4, 20.0);
  for (double T : cutoffs) {
    std::vector<int> in;
    for (int i = 0; i < static_cast<int>(sp.lengths.size()); ++i)
      if (sp.lengths[i] <= T) in.push_back(i);
    est.per_cutoff.push_back(detail::lse(in, detail::zeros(sp.lengths.size()),
                                         sp.lengths, est.value));
  }
  est.convergence = detail::convergence_of(est.per_cutoff);
  return est;
}

// --- intersection -----------------------------------------------------------

inline void require_same_classes(const MarkedSpectrum& a,
                                 const MarkedSpectrum& b) {
  if (a.classes.size() != b.classes.size())
    throw MismatchedIndex("spectra index different class sets");
  for (std::size_t i = 0; i < a.classes.size(); ++i)
    if (!(a.classes[i] == b.classes[i]))
      throw MismatchedIndex("spectra index different class sets");
}

inline ThermoEstimate intersection(const MarkedSpectrum& specA,
                                   const MarkedSpectrum& specB,
                                   const std::vector<double>& cutoffs) {
  require_same_classes(specA, specB);
  ThermoEstimate est;
  est.method = "intersection-orbit-average";
  est.cutoffs = cutoffs;
  for (double T : cutoffs) {
    detail::KahanSum acc;
    long n = 0;
    for (std::size_t i = 0; i < specA.lengths.size(); ++i)
      if (specA.lengths[i] <= T) {
        acc.add(specB.lengths[i] / specA.lengths[i]);
        ++n;
      }
    if (n < 10) throw InsufficientData("fewer than 10 classes below a cutoff");
    est.per_cutoff.push_back(acc.get() / n);
  }
  est.value = est.per_cutoff.back();
  est.convergence = detail::convergence_of(est.per_cutoff);
  return est;
}

// J(A,B) = (h(B)/h(A)) I(A,B). Both entropies are critical exponents over
// A-indexed annuli (h(B) from the Manhattan-curve root of P_A(-s l_B) = 0),
// which keeps J(f,f) = 1 and J(f,cf) = 1 exact at every truncation.
inline ThermoEstimate renormalized_intersection(
    const MarkedSpectrum& specA, const MarkedSpectrum& specB,
    const std::vector<double>& cutoffs) {
  ThermoEstimate inter = intersection(specA, specB, cutoffs);
  detail::Annuli an = detail::build_annuli(specA.lengths, cutoffs);
  std::vector<double> z = detail::zeros(specA.lengths.size());
  double hA = detail::annulus_root(an, z, specA.lengths, 1e-4, 20.0);
  double hB = detail::annulus_root(an, z, specB.lengths, 1e-4, 20.0);
  ThermoEstimate est;
  est.method = "renormalized-intersection";
  est.cutoffs = cutoffs;
  for (double I : inter.per_cutoff) est.per_cutoff.push_back(hB / hA * I);
  est.value = est.per_cutoff.back();
  est.convergence = detail::convergence_of(est.per_cutoff);
  est.extras["intersection"] = inter.value;
  est.extras["entropy_A"] = hA;
  est.extras["entropy_B"] = hB;
  return est;
}

// --- Poincare exponent -------------------------------------------------------
//
// Critical exponent of sum_w e^{-s d(o, w o)} over all reduced words (not
// classes), with d the hyperbolic displacement cosh d = ||M||_F^2 / 2. The
// representation is first moved to a canonical Moebius frame (fixed points of
// the first generator to 0, infinity; attracting point of the second to +-1)
// so the estimate is exactly conjugation invariant.

namespace detail {

inline Representation poincare_frame(const Representation& rep) {
  if (rep.dim != 2) throw Error("poincare exponent requires d = 2");
  if (rep.spec.kind != GroupSpec::Kind::Free)
    throw Error("poincare exponent requires a free group representation");
  EigenData e0 = eigen(rep.images[0]);
  if (!e0.proximal) throw NotProximal("first generator is not hyperbolic");
  auto realify = [](Eigen::VectorXcd v) {
    int imax = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    v /= v(imax);
    return Vec(v.real());
  };
  Mat V(2, 2);
  V.col(0) = realify(e0.eigenvectors.col(0));  // attracting -> infinity
  V.col(1) = realify(e0.eigenvectors.col(1));  // repelling -> 0
  Mat W = V.inverse();
  if (rep.spec.rank >= 2) {
    EigenData e1 = eigen(rep.images[2]);
    if (!e1.proximal) throw NotProximal("second generator is not hyperbolic");
    Vec q = W * realify(e1.eigenvectors.col(0));
    if (std::abs(q(0)) < 1e-12 || std::abs(q(1)) < 1e-12)
      throw DegenerateConfiguration("generator axes share an endpoint");
    double a = std::pow(std::abs(q(1) / q(0)), 0.25);
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = a;
    D(1, 1) = 1.0 / a;
    W = D * W;
  }
  W /= std::sqrt(std::abs(W.determinant()));
  std::vector<Mat> gens;
  for (int i = 0; i < rep.spec.rank; ++i)
    gens.push_back(Mat(W * rep.images[2 * i] * W.inverse()));
  return make_representation(rep.spec, gens, rep.label + "-framed");
}

struct PoincareVisitor {
  std::vector<Mat> stack{Mat::Identity(2, 2)};
  const Representation& rep;
  std::vector<std::vector<double>>& disp;  // per word length

  void descend(Gen last, int depth, int max_depth) {
    const Mat& M = stack.back();
    double c = M.squaredNorm() / 2.0;
    disp[depth - 1].push_back(std::acosh(std::max(1.0, c)));
    if (depth == max_depth) return;
    for (int g = 0; g < rep.spec.alphabet(); ++g) {
      if (inverse(static_cast<Gen>(g)) == last) continue;
      stack.push_back(Mat(M * rep.images[g]));
      descend(static_cast<Gen>(g), depth + 1, max_depth);
      stack.pop_back();
    }
  }
};

}  // namespace detail

inline ThermoEstimate poincare_exponent(const Representation& rep_in,
                                        int word_cutoff) {
  if (word_cutoff < 2) throw Error("word cutoff must be >= 2");
  Representation rep = detail::poincare_frame(rep_in);
  std::vector<std::vector<double>> disp(word_cutoff);
  detail::PoincareVisitor vis{.rep = rep, .disp = disp};
  for (int g = 0; g < rep.spec.alphabet(); ++g) {
    vis.stack.push_back(rep.images[g]);
    vis.descend(static_cast<Gen>(g), 1, word_cutoff);
    vis.stack.pop_back();
  }
  auto logsum = [&](int n, double s) {
    detail::KahanSum acc;
    double m = -std::numeric_limits<double>::infinity();
    for (double d : disp[n - 1]) m = std::max(m, -s * d);
    for (double d : disp[n - 1]) acc.add(std::exp(-s * d - m));
    return m + std::log(acc.get());
  };
  ThermoEstimate est;
  est.method = "poincare-series-ratio";
  for (int n = 2; n <= word_cutoff; ++n) {
    est.cutoffs.push_back(n);
    // root of A_n(s) = A_{n-1}(s); below the bottom bracket the orbit growth
    // is subexponential and the exponent is reported as 0
    auto f = [&](double s) { return logsum(n, s) - logsum(n - 1, s); };
    double lo = 1e-6, hi = 30.0;
    if (f(lo) <= 0.0) {
      est.per_cutoff.push_back(0.0);
      continue;
    }
    if (f(hi) >= 0.0) throw BracketFailure("poincare exponent above bracket");
    for (int k = 0; k < 80; ++k) {
      double mid = 0.5 * (lo + hi);
      if (f(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    est.per_cutoff.push_back(0.5 * (lo + hi));
  }
  est.value = est.per_cutoff.back();
  est.convergence = detail::convergence_of(est.per_cutoff);
  return est;
}

// --- pressure form -----------------------------------------------------------

struct PressureFormValue {
  double value = 0.0;              // variance estimator of d^2/dt^2 P
  double second_difference = 0.0;  // (J(-e) - 2 J(0) + J(e)) / e^2, J(0) = 1
  double step = 0.0;
  std::string path_label;
  std::vector<double> cutoffs;
  double entropy0 = 0.0;
  double companion_generic =
      std::numeric_limits<double>::quiet_NaN();  // filled by callers
};

// Periods-level core. The primary value is the second derivative of pressure
// evaluated as the asymptotic orbit variance of the tangent periods
// u(a) = -(hdot l0(a) + h0 ldot(a)): the least-squares slope over annuli of
// the e^{-h0 l0}-weighted within-annulus variance of u. The literal
// J-second-difference is reported alongside; its truncation bias does not
// decay with the step, so it serves as a companion diagnostic only.
inline PressureFormValue pressure_form_periods(
    const std::vector<double>& l0, const std::vector<double>& lp,
    const std::vector<double>& lm, double eps,
    const std::vector<double>& cutoffs, std::string path_label) {
  if (!(eps > 0.0)) throw Error("step must be positive");
  if (lp.size() != l0.size() || lm.size() != l0.size())
    throw MismatchedIndex("period vectors have different class sets");
  detail::Annuli an = detail::build_annuli(l0, cutoffs);
  std::vector<double> z = detail::zeros(l0.size());
  double h0 = detail::annulus_root(an, z, l0, 1e-4, 20.0);
  double hp = detail::annulus_root(an, z, lp, 1e-4, 20.0);
  double hm = detail::annulus_root(an, z, lm, 1e-4, 20.0);
  double hdot = (hp - hm) / (2.0 * eps);

  PressureFormValue out;
  out.step = eps;
  out.path_label = std::move(path_label);
  out.cutoffs = cutoffs;
  out.entropy0 = h0;

  // weighted within-annulus variances of the tangent periods
  std::vector<double> var(an.idx.size());
  for (std::size_t i = 0; i < an.idx.size(); ++i) {
    detail::KahanSum sw, swu;
    for (int a : an.idx[i]) {
      double u = -(hdot * l0[a] + h0 * (lp[a] - lm[a]) / (2.0 * eps));
      double w = std::exp(-h0 * (l0[a] - an.tbar[i]));
      sw.add(w);
      swu.add(w * u);
    }
    double mean = swu.get() / sw.get();
    detail::KahanSum svar;
    for (int a : an.idx[i]) {
      double u = -(hdot * l0[a] + h0 * (lp[a] - lm[a]) / (2.0 * eps));
      double w = std::exp(-h0 * (l0[a] - an.tbar[i]));
      svar.add(w * (u - mean) * (u - mean));
    }
    var[i] = svar.get() / sw.get();
  }
  out.value = detail::lsq_slope(an.tbar, var);

  // J second difference with J(0) = 1 enforced
  auto J_at = [&](const std::vector<double>& lt) {
    double ht = detail::annulus_root(an, z, lt, 1e-4, 20.0);
    detail::KahanSum acc;
    long n = 0;
    for (std::size_t i = 0; i < l0.size(); ++i)
      if (l0[i] <= cutoffs.back()) {
        acc.add(lt[i] / l0[i]);
        ++n;
      }
    return (ht / h0) * (acc.get() / n);
  };
  out.second_difference = (J_at(lm) - 2.0 + J_at(lp)) / (eps * eps);
  double floor = 10.0 * std::numeric_limits<double>::epsilon() * 4.0 /
                 (eps * eps);
  bool constant = lp == l0 && lm == l0;  // exactly constant path: 0 is exact
  if (!constant && std::abs(out.second_difference) < floor && eps < 5e-2)
    throw StepTooSmall("second difference below roundoff floor");
  return out;
}

inline PressureFormValue pressure_form(const RepPath& path, LengthKind kind,
                                       double eps, int max_len,
                                       std::vector<double> cutoffs = {}) {
  MarkedSpectrum s0 = marked_spectrum(path.at(0.0), kind, max_len);
  MarkedSpectrum sp = marked_spectrum(path.at(eps), kind, max_len);
  MarkedSpectrum sm = marked_spectrum(path.at(-eps), kind, max_len);
  require_same_classes(s0, sp);
  require_same_classes(s0, sm);
  if (cutoffs.empty()) cutoffs = default_cutoffs(s0);
  return pressure_form_periods(s0.lengths, sp.lengths, sm.lengths, eps,
                               cutoffs, path.label);
}

// --- degenerate-direction diagnostic -----------------------------------------

struct DegenerateReport {
  std::vector<std::string> sample_words;
  std::vector<double> normalized_first_differences;  // of h(t) l_t(a)
  double max_normalized = 0.0;
  PressureFormValue form;
  double companion_ratio = std::numeric_limits<double>::quiet_NaN();
};

inline DegenerateReport degenerate_direction_test(
    const RepPath& path, LengthKind kind, int max_len, double eps,
    std::vector<double> cutoffs = {}, const RepPath* companion = nullptr) {
  MarkedSpectrum s0 = marked_spectrum(path.at(0.0), kind, max_len);
  MarkedSpectrum sp = marked_spectrum(path.at(eps), kind, max_len);
  MarkedSpectrum sm = marked_spectrum(path.at(-eps), kind, max_len);
  require_same_classes(s0, sp);
  require_same_classes(s0, sm);
  if (cutoffs.empty()) cutoffs = default_cutoffs(s0);

  detail::Annuli an = detail::build_annuli(s0.lengths, cutoffs);
  std::vector<double> z = detail::zeros(s0.lengths.size());
  double h0 = detail::annulus_root(an, z, s0.lengths, 1e-4, 20.0);
  double hp = detail::annulus_root(an, z, sp.lengths, 1e-4, 20.0);
  double hm = detail::annulus_root(an, z, sm.lengths, 1e-4, 20.0);

  DegenerateReport rep;
  std::size_t n = s0.classes.size();
  std::size_t samples = std::min<std::size_t>(n, 24);
  if (samples < 20) throw InsufficientData("need at least 20 classes");
  std::size_t stride = n / samples;
  for (std::size_t k = 0; k < samples; ++k) {
    std::size_t i = k * stride;
    double deriv =
        (hp * sp.lengths[i] - hm * sm.lengths[i]) / (2.0 * eps);
    double norm = std::abs(deriv) / (h0 * s0.lengths[i]);
    rep.sample_words.push_back(s0.classes[i].word().str());
    rep.normalized_first_differences.push_back(norm);
    rep.max_normalized = std::max(rep.max_normalized, norm);
  }
  rep.form = pressure_form_periods(s0.lengths, sp.lengths, sm.lengths, eps,
                                   cutoffs, path.label);
  if (companion) {
    PressureFormValue generic =
        pressure_form(*companion, kind, eps, max_len, cutoffs);
    rep.form.companion_generic = generic.value;
    rep.companion_ratio = rep.form.value / generic.value;
  }
  return rep;
}

// --- typk limit identities ----------------------------------------------------

struct TypkReport {
  double lhs_pair = 0.0;    // |Tr(p1(rho a) p1(rho b))|
  double lhs_single = 0.0;  // |Tr(p1(rho a) rho(b))|
  std::vector<double> ratio_pair;    // lambda1(a^n b^n)/(lambda1(a^n) lambda1(b^n))
  std::vector<double> ratio_single;  // lambda1(a^n b)/lambda1(a^n)
  double residual_pair = 0.0;        // relative, at n_max
  double residual_single = 0.0;
  int n_max = 0;
};

namespace detail {

// smallest period p of a cyclic word (w = root^k with |root| = p)
inline int primitive_period(const Necklace& w) {
  int n = w.size();
  for (int p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (int i = p; i < n && ok; ++i) ok = w.letters[i] == w.letters[i % p];
    if (ok) return p;
  }
  return n;
}

struct ScaledMat {
  Mat M;
  double logscale = 0.0;
};

inline ScaledMat scaled_mul(const ScaledMat& a, const ScaledMat& b) {
  ScaledMat out{a.M * b.M, a.logscale + b.logscale};
  double m = out.M.cwiseAbs().maxCoeff();
  if (m <= 0.0) throw Error("scaled product vanished");
  out.M /= m;
  out.logscale += std::log(m);
  return out;
}

inline double log_top_eigenvalue(const ScaledMat& a) {
  return std::log(spectral_radius(a.M)) + a.logscale;
}

}  // namespace detail

inline TypkReport typk_limits(const Representation& rep, const Necklace& alpha,
                              const Necklace& beta, int n_max) {
  if (n_max < 1) throw Error("n_max must be >= 1");
  {
    GroupSpec spec = rep.spec;
    auto root = [&](const Necklace& w) {
      int p = detail::primitive_period(w);
      Word u;
      u.letters.assign(w.letters.begin(), w.letters.begin() + p);
      return u;
    };
    Word ra = root(alpha), rb = root(beta);
    Necklace ca = cyclic_canonical(ra, spec);
    if (ca == cyclic_canonical(rb, spec) ||
        ca == cyclic_canonical(inverse_word(rb), spec))
      throw DegenerateConfiguration("classes are not coprime");
  }
  Mat A = evaluate(rep, alpha), B = evaluate(rep, beta);
  Mat pA = eigenprojection_top(A), pB = eigenprojection_top(B);
  TypkReport out;
  out.n_max = n_max;
  out.lhs_pair = std::abs((pA * pB).trace());
  out.lhs_single = std::abs((pA * B).trace());
  if (out.lhs_pair < 1e-12 || out.lhs_single < 1e-12)
    throw DegenerateConfiguration("typk limit vanishes for this pair");
  double la = std::log(spectral_radius(A));
  double lb = std::log(spectral_radius(B));
  detail::ScaledMat An{A, 0.0}, Bn{B, 0.0};
  {
    double ma = An.M.cwiseAbs().maxCoeff(), mb = Bn.M.cwiseAbs().maxCoeff();
    An.M /= ma;
    An.logscale = std::log(ma);
    Bn.M /= mb;
    Bn.logscale = std::log(mb);
  }
  detail::ScaledMat Apow = An, Bpow = Bn;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) {
      Apow = detail::scaled_mul(Apow, An);
      Bpow = detail::scaled_mul(Bpow, Bn);
    }
    double log_ab =
        detail::log_top_eigenvalue(detail::scaled_mul(Apow, Bpow));
    double log_a1b = detail::log_top_eigenvalue(
        detail::scaled_mul(Apow, detail::ScaledMat{B, 0.0}));
    out.ratio_pair.push_back(std::exp(log_ab - n * (la + lb)));
    out.ratio_single.push_back(std::exp(log_a1b - n * la));
  }
  out.residual_pair =
      std::abs(out.ratio_pair.back() - out.lhs_pair) / out.lhs_pair;
  out.residual_single =
      std::abs(out.ratio_single.back() - out.lhs_single) / out.lhs_single;
  return out;
}

}  // namespace presmet
