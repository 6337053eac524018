#pragma once

// Length functionals over conjugacy classes and marked length spectra:
// materialized spectra for desk-scale enumerations, and a streaming
// length histogram for counts too large to materialize.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "presmet/reps.hpp"

namespace presmet {

enum class LengthKind { Hyperbolic, Spectral, Hilbert };

inline const char* length_kind_name(LengthKind k) {
  switch (k) {
    case LengthKind::Hyperbolic: return "hyperbolic";
    case LengthKind::Spectral: return "spectral";
    case LengthKind::Hilbert: return "hilbert";
  }
  throw Error("unknown length kind");
}

inline LengthKind length_kind_from_name(const std::string& s) {
  if (s == "hyperbolic") return LengthKind::Hyperbolic;
  if (s == "spectral") return LengthKind::Spectral;
  if (s == "hilbert") return LengthKind::Hilbert;
  throw Error("unknown length kind: " + s);
}

namespace detail {

inline double spectral_length(const Representation& rep, const Gen* w, int n) {
  Mat M = evaluate(rep, w, n);
  EigenData ed = eigen(M);
  if (!ed.proximal) throw NotProximal("class image is not proximal");
  double lam = std::abs(ed.eigenvalues[0]);
  if (lam <= 1.0) throw NotProximal("top eigenvalue modulus is not > 1");
  return std::log(lam);
}

}  // namespace detail

inline double length_of(const Representation& rep, const Gen* w, int n,
                        LengthKind kind) {
  if (n == 0) throw EmptyWordError("length of the trivial class");
  switch (kind) {
    case LengthKind::Hyperbolic: {
      if (rep.dim != 2) throw Error("hyperbolic length requires d = 2");
      double t = std::abs(evaluate(rep, w, n).trace());
      if (t <= 2.0) throw EllipticElement("|trace| <= 2");
      return 2.0 * std::acosh(t / 2.0);
    }
    case LengthKind::Spectral:
      return detail::spectral_length(rep, w, n);
    case LengthKind::Hilbert: {
      // evaluate the inverse word; never invert the matrix
      std::vector<Gen> inv(n);
      for (int i = 0; i < n; ++i) inv[i] = inverse(w[n - 1 - i]);
      return detail::spectral_length(rep, w, n) +
             detail::spectral_length(rep, inv.data(), n);
    }
  }
  throw Error("unknown length kind");
}

inline double length_of(const Representation& rep, const Necklace& w,
                        LengthKind kind) {
  return length_of(rep, w.letters.data(),
                   static_cast<int>(w.letters.size()), kind);
}

struct MarkedSpectrum {
  std::string rep_label;
  LengthKind kind = LengthKind::Spectral;
  int max_len = 0;
  std::vector<Necklace> classes;  // necklace order
  std::vector<double> lengths;    // parallel to classes
  std::vector<Necklace> failures;
  double r_min = 0.0;  // min length / word length

  // word-length truncation provably captures every class of metric length
  // below r_min * (max_len + 1)
  double metric_complete_T() const { return r_min * (max_len + 1); }
};

inline MarkedSpectrum marked_spectrum(const Representation& rep,
                                      LengthKind kind, int max_len,
                                      int threads = 1,
                                      std::size_t capacity = 100'000'000) {
  MarkedSpectrum out;
  out.rep_label = rep.label;
  out.kind = kind;
  out.max_len = max_len;
  std::vector<Necklace> classes =
      enumerate_necklaces(rep.spec, max_len, capacity);
  std::size_t n = classes.size();
  std::vector<double> vals(n);
  std::vector<uint8_t> failed(n, 0);
  auto worker = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        vals[i] = length_of(rep, classes[i], kind);
      } catch (const NotProximal&) {
        failed[i] = 1;
      } catch (const EllipticElement&) {
        failed[i] = 1;
      }
    }
  };
  if (threads <= 1 || n < 1024) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::size_t lo = std::min(n, t * chunk), hi = std::min(n, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  out.classes.reserve(n);
  out.lengths.reserve(n);
  out.r_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) {
      out.failures.push_back(classes[i]);
      continue;
    }
    out.classes.push_back(classes[i]);
    out.lengths.push_back(vals[i]);
    out.r_min = std::min(out.r_min, vals[i] / classes[i].size());
  }
  if (out.classes.empty()) throw InsufficientData("no classes with lengths");
  if (out.failures.size() * 100 > n)
    throw InsufficientData("more than 1% of classes failed proximality");
  return out;
}

// --- streaming length histogram -------------------------------------------
//
// For SL_2 representations whose class count is too large to materialize
// (genus-2 at word length 12), lengths are binned by |trace| using the top
// bits of the double representation: 256 bins per octave, monotone in the
// trace and hence in the length. Counts are kept per word length so one
// pass serves every cap.

struct LengthHistogram {
  static constexpr int kBinShift = 44;            // keep exponent + 8 bits
  static constexpr int kBinOffset = 1023 << 8;    // bin of |tr| = 1.0
  static constexpr int kBins = 16 << 8;           // |tr| < 2^16

  std::string rep_label;
  LengthKind kind = LengthKind::Hyperbolic;
  int max_len = 0;
  // counts[L-1][b]: classes of word length L whose |trace| falls in bin b
  std::vector<std::vector<std::uint64_t>> counts;

  static int bin_of(double abs_trace) {
    std::uint64_t bits;
    std::memcpy(&bits, &abs_trace, sizeof(bits));
    int b = static_cast<int>(bits >> kBinShift) - kBinOffset;
    return std::clamp(b, 0, kBins - 1);
  }
  // lower trace boundary of bin b
  static double bin_floor(int b) {
    std::uint64_t bits = static_cast<std::uint64_t>(b + kBinOffset)
                         << kBinShift;
    double t;
    std::memcpy(&t, &bits, sizeof(t));
    return t;
  }

  // On SL_2: spectral = arccosh(|tr|/2), hyperbolic = hilbert = twice that,
  // so each length threshold T maps to a |trace| threshold.
  double trace_threshold(double T) const {
    double s = kind == LengthKind::Spectral ? T : T / 2.0;
    return 2.0 * std::cosh(s);
  }

  // number of classes with word length <= cap and metric length <= T
  // (conservative: counts whole bins whose upper boundary is below the
  // threshold, so the result is exact up to one trace bin ~ 0.4% in |tr|)
  std::uint64_t count_below(double T, int cap) const {
    double tau = trace_threshold(T);
    int bmax = bin_of(tau);
    std::uint64_t total = 0;
    for (int L = 1; L <= cap && L <= max_len; ++L)
      for (int b = 0; b < bmax; ++b) total += counts[L - 1][b];
    return total;
  }

  std::uint64_t total(int cap) const {
    std::uint64_t t = 0;
    for (int L = 1; L <= cap && L <= max_len; ++L)
      for (std::uint64_t c : counts[L - 1]) t += c;
    return t;
  }
};

namespace detail {

struct M2 {
  double a, b, c, d;
};

struct HistogramVisitor {
  int alphabet;
  const Representation& rep;
  LengthHistogram& hist;
  std::array<M2, 8> gen;
  std::vector<M2> stack;

  HistogramVisitor(const Representation& r, LengthHistogram& h)
      : alphabet(r.spec.alphabet()), rep(r), hist(h) {
    for (int g = 0; g < alphabet; ++g) {
      const Mat& M = r.images[g];
      gen[g] = {M(0, 0), M(0, 1), M(1, 0), M(1, 1)};
    }
    stack.push_back({1, 0, 0, 1});
    stack.reserve(64);
  }
  void push(Gen g) {
    const M2& m = stack.back();
    const M2& x = gen[g];
    stack.push_back({m.a * x.a + m.b * x.c, m.a * x.b + m.b * x.d,
                     m.c * x.a + m.d * x.c, m.c * x.b + m.d * x.d});
  }
  void pop() { stack.pop_back(); }
  void emit(const Gen*, int n) {
    double tr = std::abs(stack.back().a + stack.back().d);
    ++hist.counts[n - 1][LengthHistogram::bin_of(tr)];
  }
};

}  // namespace detail

// One streaming pass over all classes up to max_len; requires d = 2.
inline LengthHistogram length_histogram(const Representation& rep,
                                        LengthKind kind, int max_len,
                                        int threads = 1) {
  if (rep.dim != 2) throw Error("length_histogram requires d = 2");
  LengthHistogram hist;
  hist.rep_label = rep.label;
  hist.kind = kind;
  hist.max_len = max_len;
  hist.counts.assign(max_len,
                     std::vector<std::uint64_t>(LengthHistogram::kBins, 0));
  auto run = [&](LengthHistogram& h, int lo, int hi) {
    detail::HistogramVisitor vis(rep, h);
    for_each_necklace(rep.spec, max_len, vis, lo, hi);
  };
  int nfirst = rep.spec.alphabet();
  if (threads <= 1) {
    run(hist, 0, nfirst - 1);
  } else {
    // partition by first letter; counts merge by addition (order-free)
    int nt = std::min(threads, nfirst);
    std::vector<LengthHistogram> parts(nt, hist);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) {
      int lo = t * nfirst / nt, hi = (t + 1) * nfirst / nt - 1;
      pool.emplace_back([&, t, lo, hi] { run(parts[t], lo, hi); });
    }
    for (auto& th : pool) th.join();
    for (const LengthHistogram& p : parts)
      for (int L = 0; L < max_len; ++L)
        for (int b = 0; b < LengthHistogram::kBins; ++b)
          hist.counts[L][b] += p.counts[L][b];
  }
  return hist;
}

// --- spectrum cache file ---------------------------------------------------

inline void write_spectrum(std::ostream& os, const MarkedSpectrum& sp) {
  os << "presmet-spectrum v1\n";
  os << "label " << sp.rep_label << "\n";
  os << "kind " << length_kind_name(sp.kind) << "\n";
  os << "max_len " << sp.max_len << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < sp.classes.size(); ++i)
    os << sp.classes[i].word().str() << "," << sp.lengths[i] << "\n";
  for (const Necklace& w : sp.failures) os << w.word().str() << ",failed\n";
}

inline MarkedSpectrum read_spectrum(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "presmet-spectrum v1")
    throw Error("bad spectrum header");
  MarkedSpectrum sp;
  std::string tag;
  is >> tag >> std::ws;
  std::getline(is, sp.rep_label);
  if (tag != "label") throw Error("expected label");
  std::string kind;
  is >> tag >> kind;
  if (tag != "kind") throw Error("expected kind");
  sp.kind = length_kind_from_name(kind);
  is >> tag >> sp.max_len;
  if (tag != "max_len") throw Error("expected max_len");
  std::getline(is, line);  // finish the max_len line
  sp.r_min = std::numeric_limits<double>::infinity();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("bad spectrum line: " + line);
    Word w = Word::parse(line.substr(0, comma));
    std::string val = line.substr(comma + 1);
    Necklace nk;
    nk.letters = w.letters;
    if (val == "failed") {
      sp.failures.push_back(nk);
      continue;
    }
    double len = std::stod(val);
    sp.classes.push_back(nk);
    sp.lengths.push_back(len);
    sp.r_min = std::min(sp.r_min, len / nk.size());
  }
  return sp;
}

}  // namespace presmet
