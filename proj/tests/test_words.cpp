#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "presmet/words.hpp"

using namespace presmet;

namespace {

// Brute-force conjugacy-class oracle: enumerate *all* strings over the
// alphabet up to max_len, reduce, canonicalize, dedup.
std::set<Necklace> brute_force_classes(const GroupSpec& spec, int max_len) {
  std::set<Necklace> out;
  int K = spec.alphabet();
  for (int n = 1; n <= max_len; ++n) {
    std::vector<int> idx(n, 0);
    for (;;) {
      Word w;
      w.letters.assign(idx.begin(), idx.end());
      try {
        out.insert(cyclic_canonical(w, spec));
      } catch (const EmptyWordError&) {
      }
      int i = n - 1;
      while (i >= 0 && idx[i] == K - 1) idx[i--] = 0;
      if (i < 0) break;
      ++idx[i];
    }
  }
  return out;
}

Word random_reduced_word(std::mt19937_64& rng, const GroupSpec& spec, int len) {
  Word w;
  std::uniform_int_distribution<int> d(0, spec.alphabet() - 1);
  while (static_cast<int>(w.size()) < len) {
    Gen g = static_cast<Gen>(d(rng));
    if (!w.letters.empty() && w.letters.back() == inverse(g)) continue;
    w.letters.push_back(g);
  }
  return w;
}

}  // namespace

TEST_CASE("free reduction") {
  CHECK(reduce(Word::parse("aAb")).str() == "b");
  CHECK(reduce(Word()).str() == "");
  CHECK(reduce(Word::parse("abBAa")).str() == "a");
  // idempotent
  auto w = reduce(Word::parse("abBAaab"));
  CHECK(reduce(w) == w);
}

TEST_CASE("generator involution") {
  for (Gen g = 0; g < 8; ++g) {
    CHECK(inverse(inverse(g)) == g);
    CHECK(inverse(g) != g);
    CHECK(gen_from_symbol(gen_symbol(g)) == g);
  }
}

TEST_CASE("cyclic canonical, free group") {
  auto spec = GroupSpec::free_group(2);
  CHECK(cyclic_canonical(Word::parse("baB"), spec).str() == "a");
  CHECK(cyclic_canonical(Word::parse("ba"), spec).str() == "ab");
  CHECK_THROWS_AS(cyclic_canonical(Word::parse("aA"), spec), EmptyWordError);
}

TEST_CASE("cyclic canonical, surface group") {
  auto spec = GroupSpec::surface_genus2();
  auto r = GroupSpec::relator();
  Word rel;
  rel.letters.assign(r.begin(), r.end());
  CHECK(rel.str() == "abABcdCD");
  CHECK_THROWS_AS(cyclic_canonical(rel, spec), EmptyWordError);
  // conjugate of the relator is also trivial
  CHECK_THROWS_AS(cyclic_canonical(concat(Word::parse("cd"), concat(rel, Word::parse("DC"))), spec),
                  EmptyWordError);
}

TEST_CASE("enumerate F2 small") {
  auto spec = GroupSpec::free_group(2);
  auto one = enumerate_necklaces(spec, 1);
  REQUIRE(one.size() == 4);
  CHECK(one[0].str() == "a");
  CHECK(one[1].str() == "A");
  CHECK(one[2].str() == "b");
  CHECK(one[3].str() == "B");
  auto two = enumerate_necklaces(spec, 2);
  CHECK(two.size() - one.size() == 8);  // classes of length exactly 2
}

TEST_CASE("necklace oracle F2 length 10") {
  auto spec = GroupSpec::free_group(2);
  auto fast = enumerate_necklaces(spec, 10);
  auto oracle = brute_force_classes(spec, 10);
  REQUIRE(fast.size() == oracle.size());
  CHECK(std::equal(fast.begin(), fast.end(), oracle.begin()));
}

TEST_CASE("necklace oracle surface length 5") {
  auto spec = GroupSpec::surface_genus2();
  auto fast = enumerate_necklaces(spec, 5);
  auto oracle = brute_force_classes(spec, 5);
  REQUIRE(fast.size() == oracle.size());
  CHECK(std::equal(fast.begin(), fast.end(), oracle.begin()));
}

TEST_CASE("parallel partition merge equals full enumeration") {
  for (auto spec : {GroupSpec::free_group(2), GroupSpec::surface_genus2()}) {
    std::vector<Necklace> merged;
    for (int j = 0; j < spec.alphabet(); ++j) {
      for_each_necklace(spec, 6, emit_visitor([&](const Gen* w, int n) {
                          merged.push_back(Necklace{std::vector<Gen>(w, w + n)});
                        }),
                        j, j);
    }
    std::sort(merged.begin(), merged.end());
    auto full = enumerate_necklaces(spec, 6);
    CHECK(merged == full);
  }
}

TEST_CASE("conjugation invariance") {
  std::mt19937_64 rng(12345);
  for (auto spec : {GroupSpec::free_group(2), GroupSpec::surface_genus2()}) {
    for (int trial = 0; trial < 200; ++trial) {
      Word w = random_reduced_word(rng, spec, 1 + trial % 8);
      Word u = random_reduced_word(rng, spec, 1 + (trial * 7) % 6);
      Word conj = concat(u, concat(w, inverse_word(u)));
      try {
        auto c1 = cyclic_canonical(w, spec);
        auto c2 = cyclic_canonical(conj, spec);
        CHECK(c1 == c2);
      } catch (const EmptyWordError&) {
        // w trivial in the surface group; conjugate must be trivial too
        CHECK_THROWS_AS(cyclic_canonical(conj, spec), EmptyWordError);
      }
    }
  }
}

TEST_CASE("relator insertion invariance, surface group") {
  auto spec = GroupSpec::surface_genus2();
  std::mt19937_64 rng(999);
  const auto& cycles = GroupSpec::relator_cycles();
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Word w = random_reduced_word(rng, spec, 2 + trial % 9);
    const auto& cyc = cycles[trial % cycles.size()];
    std::size_t pos = rng() % (w.size() + 1);
    Word wr;
    wr.letters.assign(w.letters.begin(), w.letters.begin() + pos);
    wr.letters.insert(wr.letters.end(), cyc.begin(), cyc.end());
    wr.letters.insert(wr.letters.end(), w.letters.begin() + pos, w.letters.end());
    try {
      auto c1 = cyclic_canonical(w, spec);
      auto c2 = cyclic_canonical(wr, spec);
      CHECK(c1 == c2);
      ++checked;
    } catch (const EmptyWordError&) {
      CHECK_THROWS_AS(cyclic_canonical(wr, spec), EmptyWordError);
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("capacity guard") {
  CHECK_THROWS_AS(enumerate_necklaces(GroupSpec::free_group(2), 8, 100),
                  CapacityExceeded);
}

TEST_CASE("enumeration is deterministic") {
  auto spec = GroupSpec::free_group(2);
  auto a = enumerate_necklaces(spec, 7);
  auto b = enumerate_necklaces(spec, 7);
  CHECK(a == b);
}
