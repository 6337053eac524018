#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "presmet/lengths.hpp"

using namespace presmet;

namespace {

Representation schottky2() {
  return schottky_sl2({16.0, 12.0}, {{-3.0, -1.0}, {1.0, 3.5}});
}

}  // namespace

TEST_CASE("length_of on a diagonalizable generator") {
  double inf = std::numeric_limits<double>::infinity();
  Mat g = sl2_hyperbolic(4.0, inf, 0.0);  // diag(2, 1/2)
  Mat U(2, 2);
  U << 2, 1, 3, 2;  // det 1
  Representation rep = make_representation(GroupSpec::free_group(1),
                                           {U * g * U.inverse()}, "one-gen");
  Necklace a{std::vector<Gen>{0}};
  double l2 = std::log(2.0);
  CHECK(length_of(rep, a, LengthKind::Hyperbolic) ==
        Catch::Approx(2 * l2).epsilon(1e-12));
  CHECK(length_of(rep, a, LengthKind::Spectral) ==
        Catch::Approx(l2).epsilon(1e-12));
  CHECK(length_of(rep, a, LengthKind::Hilbert) ==
        Catch::Approx(2 * l2).epsilon(1e-12));
  Representation t3 = tau_rep(rep, 3);
  CHECK(length_of(t3, a, LengthKind::Spectral) ==
        Catch::Approx(2 * l2).epsilon(1e-10));
}

TEST_CASE("spectral length of powers") {
  Representation rep = schottky2();
  Word w = Word::parse("abA");
  std::vector<Gen> pow;
  double l1 = length_of(rep, w.letters.data(), 3, LengthKind::Spectral);
  for (int n = 1; n <= 8; ++n) {
    pow.insert(pow.end(), w.letters.begin(), w.letters.end());
    double ln = length_of(rep, pow.data(), static_cast<int>(pow.size()),
                          LengthKind::Spectral);
    CHECK(ln == Catch::Approx(n * l1).epsilon(1e-7));
  }
}

TEST_CASE("length errors") {
  Mat R(2, 2);
  R << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  Representation rot = make_representation(GroupSpec::free_group(1), {R}, "rot");
  Necklace a{std::vector<Gen>{0}};
  CHECK_THROWS_AS(length_of(rot, a, LengthKind::Hyperbolic), EllipticElement);
  CHECK_THROWS_AS(length_of(rot, a, LengthKind::Spectral), NotProximal);
  Representation hi = make_representation(
      GroupSpec::free_group(1), {(Mat(3, 3) << 2, 0, 0, 0, 1, 0, 0, 0, 0.5)
                                     .finished()},
      "d3");
  CHECK_THROWS(length_of(hi, a, LengthKind::Hyperbolic));
}

TEST_CASE("marked spectrum basics") {
  Representation rep = schottky2();
  MarkedSpectrum sp = marked_spectrum(rep, LengthKind::Spectral, 8);
  CHECK(sp.failures.empty());
  CHECK(sp.classes.size() ==
        enumerate_necklaces(rep.spec, 8).size());
  CHECK(std::is_sorted(sp.classes.begin(), sp.classes.end()));
  for (double l : sp.lengths) CHECK(l > 0);
  CHECK(sp.r_min > 0);
  CHECK(sp.metric_complete_T() == Catch::Approx(sp.r_min * 9));

  // conjugation invariance
  Mat U(2, 2);
  U << 1, 0.5, 1, 2;
  U /= std::sqrt(U.determinant());
  std::vector<Mat> conj{Mat(U * rep.images[0] * U.inverse()),
                        Mat(U * rep.images[2] * U.inverse())};
  Representation rep2 =
      make_representation(GroupSpec::free_group(2), conj, "conjugated");
  MarkedSpectrum sp2 = marked_spectrum(rep2, LengthKind::Spectral, 8);
  REQUIRE(sp2.classes.size() == sp.classes.size());
  for (std::size_t i = 0; i < sp.classes.size(); ++i) {
    CHECK(sp2.classes[i] == sp.classes[i]);
    CHECK(sp2.lengths[i] == Catch::Approx(sp.lengths[i]).epsilon(1e-9));
  }
}

TEST_CASE("hilbert spectrum doubles the spectral spectrum in SL_2") {
  Representation rep = schottky2();
  MarkedSpectrum sps = marked_spectrum(rep, LengthKind::Spectral, 6);
  MarkedSpectrum sph = marked_spectrum(rep, LengthKind::Hilbert, 6);
  REQUIRE(sps.classes.size() == sph.classes.size());
  for (std::size_t i = 0; i < sps.classes.size(); ++i)
    CHECK(sph.lengths[i] == Catch::Approx(2 * sps.lengths[i]).epsilon(1e-10));
}

TEST_CASE("tau_d spectral length is (d-1)/2 times the hyperbolic length") {
  Representation rep = schottky2();
  MarkedSpectrum hyp = marked_spectrum(rep, LengthKind::Hyperbolic, 6);
  for (int d : {3, 4}) {
    Representation td = tau_rep(rep, d);
    MarkedSpectrum sp = marked_spectrum(td, LengthKind::Spectral, 6);
    REQUIRE(sp.classes.size() == hyp.classes.size());
    for (std::size_t i = 0; i < sp.classes.size(); ++i)
      CHECK(sp.lengths[i] ==
            Catch::Approx((d - 1) * 0.5 * hyp.lengths[i]).epsilon(1e-8));
  }
}

TEST_CASE("marked spectrum is identical across thread counts") {
  Representation rep = schottky2();
  MarkedSpectrum s1 = marked_spectrum(rep, LengthKind::Spectral, 8, 1);
  MarkedSpectrum s3 = marked_spectrum(rep, LengthKind::Spectral, 8, 3);
  REQUIRE(s1.classes.size() == s3.classes.size());
  for (std::size_t i = 0; i < s1.classes.size(); ++i) {
    CHECK(s1.classes[i] == s3.classes[i]);
    CHECK(s1.lengths[i] == s3.lengths[i]);  // bitwise
  }
}

TEST_CASE("all-failing spectrum aborts") {
  Representation rep =
      make_representation(GroupSpec::free_group(1), {Mat::Identity(2, 2)},
                          "trivial");
  CHECK_THROWS_AS(marked_spectrum(rep, LengthKind::Spectral, 4),
                  InsufficientData);
}

TEST_CASE("length histogram matches the materialized spectrum") {
  Representation rep = schottky2();
  MarkedSpectrum sp = marked_spectrum(rep, LengthKind::Hyperbolic, 8);
  LengthHistogram h = length_histogram(rep, LengthKind::Hyperbolic, 8);
  CHECK(h.total(8) == sp.classes.size());
  // cross-check cumulative counts at bin boundaries for several thresholds
  for (double T : {2.0, 4.0, 6.0, 9.0, 12.0}) {
    double tau = h.trace_threshold(T);
    int bmax = LengthHistogram::bin_of(tau);
    std::uint64_t expect = 0;
    for (double l : sp.lengths)
      if (LengthHistogram::bin_of(2.0 * std::cosh(l / 2.0)) < bmax) ++expect;
    CHECK(h.count_below(T, 8) == expect);
  }
  // monotone in both T and cap
  CHECK(h.count_below(4.0, 8) >= h.count_below(4.0, 6));
  CHECK(h.count_below(6.0, 8) >= h.count_below(4.0, 8));
  // threaded run merges to the same counts
  LengthHistogram h3 = length_histogram(rep, LengthKind::Hyperbolic, 8, 3);
  CHECK(h3.counts == h.counts);
}

TEST_CASE("surface histogram counts every class") {
  Representation rep = fuchsian_genus2();
  LengthHistogram h = length_histogram(rep, LengthKind::Hyperbolic, 5);
  CHECK(h.total(5) == enumerate_necklaces(GroupSpec::surface_genus2(), 5).size());
  CHECK(h.total(4) == enumerate_necklaces(GroupSpec::surface_genus2(), 4).size());
}

TEST_CASE("spectrum cache roundtrip") {
  Representation rep = schottky2();
  MarkedSpectrum sp = marked_spectrum(rep, LengthKind::Spectral, 6);
  std::stringstream ss;
  write_spectrum(ss, sp);
  MarkedSpectrum back = read_spectrum(ss);
  CHECK(back.rep_label == sp.rep_label);
  CHECK(back.kind == sp.kind);
  CHECK(back.max_len == sp.max_len);
  REQUIRE(back.classes.size() == sp.classes.size());
  for (std::size_t i = 0; i < sp.classes.size(); ++i) {
    CHECK(back.classes[i] == sp.classes[i]);
    CHECK(back.lengths[i] == sp.lengths[i]);  // 17 digits roundtrip exactly
  }
  CHECK(back.failures.size() == sp.failures.size());
  CHECK(back.r_min == Catch::Approx(sp.r_min).epsilon(1e-15));
}
