#pragma once

// Words, conjugacy-class canonical forms (necklaces) and enumeration for
// free groups F_k (k <= 4) and the genus-2 surface group <a,b,c,d | [a,b][c,d]>.

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "presmet/core.hpp"

namespace presmet {

// Generators are small integers; g and g^-1 are paired as 2i, 2i+1.
using Gen = std::uint8_t;

constexpr Gen inverse(Gen g) { return g ^ 1; }

inline char gen_symbol(Gen g) {
  char c = static_cast<char>('a' + g / 2);
  return (g & 1) ? static_cast<char>(std::toupper(c)) : c;
}

inline Gen gen_from_symbol(char c) {
  char lc = static_cast<char>(std::tolower(c));
  if (lc < 'a' || lc > 'a' + 3) throw Error(std::string("bad generator symbol: ") + c);
  return static_cast<Gen>(2 * (lc - 'a') + (std::isupper(static_cast<unsigned char>(c)) ? 1 : 0));
}

struct Word {
  std::vector<Gen> letters;

  Word() = default;
  explicit Word(std::vector<Gen> ls) : letters(std::move(ls)) {}
  static Word parse(const std::string& s) {
    Word w;
    w.letters.reserve(s.size());
    for (char c : s) w.letters.push_back(gen_from_symbol(c));
    return w;
  }
  std::string str() const {
    std::string s;
    s.reserve(letters.size());
    for (Gen g : letters) s.push_back(gen_symbol(g));
    return s;
  }
  std::size_t size() const { return letters.size(); }
  bool operator==(const Word&) const = default;
};

inline Word inverse_word(const Word& w) {
  Word r;
  r.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    r.letters.push_back(inverse(*it));
  return r;
}

inline Word concat(const Word& u, const Word& v) {
  Word w = u;
  w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
  return w;
}

struct GroupSpec {
  enum class Kind { Free, SurfaceGenus2 };
  Kind kind = Kind::Free;
  int rank = 2;  // number of generators; alphabet size is 2*rank

  int alphabet() const { return 2 * rank; }

  static GroupSpec free_group(int k) {
    if (k < 1 || k > 4) throw Error("free rank must be in [1,4]");
    return GroupSpec{Kind::Free, k};
  }
  static GroupSpec surface_genus2() { return GroupSpec{Kind::SurfaceGenus2, 4}; }

  // The relator [a,b][c,d] as a letter sequence.
  static std::array<Gen, 8> relator() { return {0, 2, 1, 3, 4, 6, 5, 7}; }

  // All 16 linear readings of the relator cycle and its inverse cycle.
  static const std::vector<std::array<Gen, 8>>& relator_cycles() {
    static const std::vector<std::array<Gen, 8>> cycles = [] {
      std::vector<std::array<Gen, 8>> out;
      std::array<Gen, 8> r = relator();
      std::array<Gen, 8> ri;
      for (int i = 0; i < 8; ++i) ri[i] = inverse(r[7 - i]);
      for (const auto& base : {r, ri})
        for (int rot = 0; rot < 8; ++rot) {
          std::array<Gen, 8> c;
          for (int i = 0; i < 8; ++i) c[i] = base[(rot + i) % 8];
          out.push_back(c);
        }
      return out;
    }();
    return cycles;
  }
};

inline Word reduce(const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (Gen g : w.letters) {
    if (!out.letters.empty() && out.letters.back() == inverse(g))
      out.letters.pop_back();
    else
      out.letters.push_back(g);
  }
  return out;
}

// Canonical conjugacy-class representative: cyclically reduced (for the
// surface group, Dehn-reduced) and lexicographically least among the
// equal-length words in its class.
struct Necklace {
  std::vector<Gen> letters;

  std::size_t size() const { return letters.size(); }
  std::string str() const {
    std::string s;
    for (Gen g : letters) s.push_back(gen_symbol(g));
    return s;
  }
  Word word() const { return Word(letters); }
  bool operator==(const Necklace&) const = default;
  std::strong_ordering operator<=>(const Necklace& o) const {
    if (letters.size() != o.letters.size())
      return letters.size() <=> o.letters.size();
    return std::lexicographical_compare_three_way(
        letters.begin(), letters.end(), o.letters.begin(), o.letters.end());
  }
};

namespace detail {

// Booth's least-rotation algorithm; returns the starting index.
inline int least_rotation(const Gen* s, int n) {
  int i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    Gen a = s[(i + k) % n], b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  int r = std::min(i, j);
  return r;
}

inline std::vector<Gen> rotate_min(const std::vector<Gen>& w) {
  if (w.empty()) return w;
  int n = static_cast<int>(w.size());
  int r = least_rotation(w.data(), n);
  std::vector<Gen> out;
  out.reserve(w.size());
  out.insert(out.end(), w.begin() + r, w.end());
  out.insert(out.end(), w.begin(), w.begin() + r);
  return out;
}

inline void cyclic_free_reduce(std::vector<Gen>& w) {
  // linear reduction
  std::vector<Gen> out;
  out.reserve(w.size());
  for (Gen g : w) {
    if (!out.empty() && out.back() == inverse(g))
      out.pop_back();
    else
      out.push_back(g);
  }
  // wraparound reduction
  std::size_t lo = 0, hi = out.size();
  while (hi - lo >= 2 && out[lo] == inverse(out[hi - 1])) {
    ++lo;
    --hi;
  }
  w.assign(out.begin() + lo, out.begin() + hi);
}

// Tables for the genus-2 surface group.
struct SurfaceTables {
  // childmask[code] : bitmask of letters forbidden after a window of up to 4
  // letters, base-9 encoded oldest-first (digit 0 = blank, letter g -> g+1).
  std::array<std::uint8_t, 6561> childmask{};
  std::array<bool, 32768> bad5{};            // base-8 packed 5-grams of relator cycles
  std::array<std::int16_t, 4096> swap_at{};  // base-8 packed 4-gram -> swap id or -1
  // nibble-packed (4 bits/letter) 4-gram -> nibble-packed complement, or -1
  std::array<std::int32_t, 65536> swap16{};
  struct Swap {
    std::array<Gen, 4> from, to;
  };
  std::vector<Swap> swaps;

  static int pack8(const Gen* s, int n) {
    int c = 0;
    for (int i = 0; i < n; ++i) c = c * 8 + s[i];
    return c;
  }

  SurfaceTables() {
    const auto& cycles = GroupSpec::relator_cycles();
    for (const auto& c : cycles) bad5[pack8(c.data(), 5)] = true;
    swap_at.fill(-1);
    swap16.fill(-1);
    for (const auto& c : cycles) {
      Swap s;
      for (int i = 0; i < 4; ++i) s.from[i] = c[i];
      for (int i = 0; i < 4; ++i) s.to[i] = inverse(c[7 - i]);
      int key = pack8(s.from.data(), 4);
      if (swap_at[key] < 0) {
        swap_at[key] = static_cast<std::int16_t>(swaps.size());
        swaps.push_back(s);
      }
      int k16 = 0, t16 = 0;
      for (int i = 0; i < 4; ++i) {
        k16 = (k16 << 4) | s.from[i];
        t16 = (t16 << 4) | s.to[i];
      }
      swap16[k16] = t16;
    }
    for (int code = 0; code < 6561; ++code) {
      int digits[4];  // oldest first
      int c = code;
      for (int i = 3; i >= 0; --i) {
        digits[i] = c % 9;
        c /= 9;
      }
      std::uint8_t mask = 0;
      for (int x = 0; x < 8; ++x) {
        bool forbid = false;
        if (digits[3] != 0 && x == inverse(static_cast<Gen>(digits[3] - 1)))
          forbid = true;
        if (!forbid && digits[0] != 0 && digits[1] != 0 && digits[2] != 0 &&
            digits[3] != 0) {
          Gen five[5] = {static_cast<Gen>(digits[0] - 1),
                         static_cast<Gen>(digits[1] - 1),
                         static_cast<Gen>(digits[2] - 1),
                         static_cast<Gen>(digits[3] - 1), static_cast<Gen>(x)};
          if (bad5[pack8(five, 5)]) forbid = true;
        }
        if (forbid) mask |= static_cast<std::uint8_t>(1u << x);
      }
      childmask[code] = mask;
    }
  }

  static const SurfaceTables& get() {
    static const SurfaceTables t;
    return t;
  }
};

// One Dehn pass on a cyclic word: cyclic free reduction, then replace the
// first cyclic subword matching more than half (>=5 letters) of a relator
// cycle by the inverse of the complement. Returns true if anything changed.
inline bool dehn_step(std::vector<Gen>& w) {
  std::size_t before = w.size();
  cyclic_free_reduce(w);
  bool changed = w.size() != before;
  int n = static_cast<int>(w.size());
  if (n < 5) return changed;
  const auto& cycles = GroupSpec::relator_cycles();
  for (int i = 0; i < n; ++i) {
    for (const auto& c : cycles) {
      int match = 0;
      int maxm = std::min(n, 8);
      while (match < maxm && w[(i + match) % n] == c[match]) ++match;
      if (match >= 5) {
        // w[i..i+match) equals c[0..match); replace by inverse of c[match..8)
        std::vector<Gen> out;
        out.reserve(n);
        for (int j = 7; j >= match; --j) out.push_back(inverse(c[j]));
        for (int j = match; j < n; ++j) out.push_back(w[(i + j) % n]);
        w = std::move(out);
        return true;
      }
    }
  }
  return changed;
}

inline void dehn_reduce(std::vector<Gen>& w) {
  while (dehn_step(w)) {
  }
}

// Closure of a Dehn-reduced cyclic word under half-relator swaps, each
// member stored in least-rotation form. If a swap ever produces a reducible
// word (should not happen for Dehn-reduced input), the shorter word is
// reported through `shorter`.
inline std::vector<std::vector<Gen>> swap_orbit(const std::vector<Gen>& w0,
                                                std::vector<Gen>* shorter,
                                                bool* found_shorter) {
  *found_shorter = false;
  const auto& tab = SurfaceTables::get();
  std::vector<std::vector<Gen>> seen{rotate_min(w0)};
  std::vector<std::vector<Gen>> queue{seen[0]};
  while (!queue.empty()) {
    std::vector<Gen> w = std::move(queue.back());
    queue.pop_back();
    int n = static_cast<int>(w.size());
    if (n < 4) continue;
    for (int i = 0; i < n; ++i) {
      int key = 0;
      for (int j = 0; j < 4; ++j) key = key * 8 + w[(i + j) % n];
      int sid = tab.swap_at[key];
      if (sid < 0) continue;
      std::vector<Gen> nw = w;
      for (int j = 0; j < 4; ++j) nw[(i + j) % n] = tab.swaps[sid].to[j];
      cyclic_free_reduce(nw);
      if (nw.size() < w.size()) {
        if (shorter) *shorter = std::move(nw);
        *found_shorter = true;
        return seen;
      }
      nw = rotate_min(nw);
      if (std::find(seen.begin(), seen.end(), nw) == seen.end()) {
        seen.push_back(nw);
        queue.push_back(nw);
        if (seen.size() > 4096) throw Error("swap orbit unexpectedly large");
      }
    }
  }
  return seen;
}

}  // namespace detail

inline Necklace cyclic_canonical(const Word& input, const GroupSpec& spec) {
  std::vector<Gen> w = reduce(input).letters;
  for (;;) {
    if (spec.kind == GroupSpec::Kind::SurfaceGenus2)
      detail::dehn_reduce(w);
    else
      detail::cyclic_free_reduce(w);
    if (w.empty()) throw EmptyWordError("word represents the identity");
    if (spec.kind == GroupSpec::Kind::Free)
      return Necklace{detail::rotate_min(w)};
    std::vector<Gen> shorter;
    bool found_shorter = false;
    auto orbit = detail::swap_orbit(w, &shorter, &found_shorter);
    if (found_shorter) {
      w = std::move(shorter);
      continue;
    }
    return Necklace{*std::min_element(orbit.begin(), orbit.end())};
  }
}

namespace detail {

inline std::uint64_t packed_rotate(std::uint64_t x, int i, int n,
                                   std::uint64_t mask) {
  if (i == 0) return x;
  return ((x << (4 * i)) | (x >> (4 * (n - i)))) & mask;
}

inline std::uint64_t packed_min_rotation(std::uint64_t x, int n,
                                         std::uint64_t mask) {
  std::uint64_t best = x;
  for (int i = 1; i < n; ++i) {
    std::uint64_t y = packed_rotate(x, i, n, mask);
    if (y < best) best = y;
  }
  return best;
}

// Is the nibble-packed word x0 (its own least rotation, Dehn-reduced) the
// least element of its half-relator swap orbit? Words longer than 16 letters
// fall back to the vector-based orbit. Returns false also when a swap exposes
// a reduction (then the class has a shorter representative).
inline bool packed_orbit_minimal(std::uint64_t x0, int n) {
  const auto& tab = SurfaceTables::get();
  const std::uint64_t mask =
      n == 16 ? ~0ull : ((1ull << (4 * n)) - 1);
  constexpr int kMaxOrbit = 96;
  std::uint64_t seen[kMaxOrbit];
  std::uint64_t queue[kMaxOrbit];
  int ns = 0, nq = 0;
  seen[ns++] = x0;
  queue[nq++] = x0;
  while (nq > 0) {
    std::uint64_t w = queue[--nq];
    for (int i = 0; i < n; ++i) {
      std::uint64_t y = packed_rotate(w, i, n, mask);
      int key = static_cast<int>((y >> (4 * (n - 4))) & 0xFFFF);
      std::int32_t to = tab.swap16[key];
      if (to < 0) continue;
      std::uint64_t rest = y & ((n == 4) ? 0 : ((1ull << (4 * (n - 4))) - 1));
      std::uint64_t z = (static_cast<std::uint64_t>(to) << (4 * (n - 4))) | rest;
      // any cyclic adjacent inverse pair or >half relator match means the
      // class has a shorter representative
      bool shorter = false;
      for (int j = 0; j < n && !shorter; ++j) {
        Gen c0 = static_cast<Gen>((z >> (4 * (n - 1 - j))) & 15);
        Gen c1 = static_cast<Gen>((z >> (4 * (n - 1 - (j + 1) % n))) & 15);
        if (c1 == inverse(c0)) shorter = true;
      }
      if (!shorter && n >= 5) {
        for (int j = 0; j < n && !shorter; ++j) {
          int k5 = 0;
          for (int m = 0; m < 5; ++m)
            k5 = k5 * 8 +
                 static_cast<int>((z >> (4 * (n - 1 - (j + m) % n))) & 15);
          if (tab.bad5[k5]) shorter = true;
        }
      }
      if (shorter) return false;
      std::uint64_t zm = packed_min_rotation(z, n, mask);
      if (zm < x0) return false;
      if (zm == x0) continue;
      bool dup = false;
      for (int s = 0; s < ns && !dup; ++s) dup = seen[s] == zm;
      if (!dup) {
        if (ns == kMaxOrbit) throw Error("swap orbit unexpectedly large");
        seen[ns++] = zm;
        queue[nq++] = zm;
      }
    }
  }
  return true;
}

// Emit-time validity of an FKM candidate (lex-least rotation guaranteed):
// checks the wraparound conditions and, for the surface group, minimality
// within the half-relator swap orbit. `packed` is the nibble-packed word and
// `has4` whether its linear (non-wrapping) part contains a half-relator.
template <bool Surface>
inline bool emit_valid(const Gen* a, int t, std::uint64_t packed, bool has4) {
  if (a[t - 1] == inverse(a[0])) return false;
  if constexpr (Surface) {
    const auto& tab = SurfaceTables::get();
    if (t >= 5) {
      // 5-grams crossing the seam
      for (int s = t - 4; s < t; ++s) {
        int key = 0;
        for (int j = 0; j < 5; ++j) key = key * 8 + a[(s + j) % t];
        if (tab.bad5[key]) return false;
      }
    }
    if (t >= 4) {
      if (!has4) {
        // wrapping 4-grams
        for (int i = t - 3; i < t && !has4; ++i) {
          int key = 0;
          for (int j = 0; j < 4; ++j) key = (key << 4) | a[(i + j) % t];
          if (tab.swap16[key] >= 0) has4 = true;
        }
      }
      if (has4) {
        if (t <= 16) return packed_orbit_minimal(packed, t);
        std::vector<Gen> w(a, a + t);
        bool found_shorter = false;
        auto orbit = swap_orbit(w, nullptr, &found_shorter);
        if (found_shorter) return false;  // not a geodesic representative
        for (const auto& m : orbit)
          if (m < w) return false;
      }
    }
  }
  return true;
}

template <bool Surface, class Visitor>
inline void fkm_rec(Gen* a, int t, int p, int code, std::uint64_t packed,
                    bool has4, int max_len, Visitor& vis) {
  if (t % p == 0 && emit_valid<Surface>(a, t, packed, has4)) vis.emit(a, t);
  if (t == max_len) return;
  std::uint8_t forbid;
  if constexpr (Surface)
    forbid = SurfaceTables::get().childmask[code];
  else
    forbid = static_cast<std::uint8_t>(1u << inverse(a[t - 1]));
  int j0 = a[t - p];  // smallest admissible letter (keeps period p)
  int alphabet = vis.alphabet;
  for (int j = j0; j < alphabet; ++j) {
    if (forbid & (1u << j)) continue;
    a[t] = static_cast<Gen>(j);
    vis.push(static_cast<Gen>(j));
    if constexpr (Surface) {
      int ncode = (code % 729) * 9 + (j + 1);
      std::uint64_t np = (packed << 4) | static_cast<unsigned>(j);
      bool nhas4 =
          has4 || (t + 1 >= 4 &&
                   SurfaceTables::get().swap16[np & 0xFFFF] >= 0);
      fkm_rec<Surface>(a, t + 1, j == j0 ? p : t + 1, ncode, np, nhas4,
                       max_len, vis);
    } else {
      fkm_rec<Surface>(a, t + 1, j == j0 ? p : t + 1, 0, 0, false, max_len,
                       vis);
    }
    vis.pop();
  }
}

}  // namespace detail

// Streaming enumeration of all necklaces (canonical conjugacy classes) with
// representative length <= max_len, in depth-first prefix order. The visitor
// must provide:
//   int  alphabet;                 (set by the caller via init)
//   void push(Gen g); void pop();  (maintain incremental state)
//   void emit(const Gen* w, int n);
// Necklaces whose first letter lies outside [first_lo, first_hi] are skipped,
// which gives a deterministic parallel partition.
template <class Visitor>
void for_each_necklace(const GroupSpec& spec, int max_len, Visitor&& vis,
                       int first_lo = 0, int first_hi = 7) {
  if (max_len < 1) throw Error("max_len must be >= 1");
  vis.alphabet = spec.alphabet();
  first_hi = std::min(first_hi, spec.alphabet() - 1);
  std::vector<Gen> buf(static_cast<std::size_t>(max_len));
  Gen* a = buf.data();
  for (int j = first_lo; j <= first_hi; ++j) {
    a[0] = static_cast<Gen>(j);
    vis.push(static_cast<Gen>(j));
    if (spec.kind == GroupSpec::Kind::SurfaceGenus2)
      detail::fkm_rec<true>(a, 1, 1, j + 1, static_cast<unsigned>(j), false,
                            max_len, vis);
    else
      detail::fkm_rec<false>(a, 1, 1, 0, 0, false, max_len, vis);
    vis.pop();
  }
}

// Minimal visitor adapter for callers that only need the emitted words.
template <class F>
struct EmitVisitor {
  F fn;
  int alphabet = 0;
  void push(Gen) {}
  void pop() {}
  void emit(const Gen* w, int n) { fn(w, n); }
};
template <class F>
EmitVisitor<F> emit_visitor(F fn) {
  return EmitVisitor<F>{std::move(fn)};
}

inline std::vector<Necklace> enumerate_necklaces(
    const GroupSpec& spec, int max_len, std::uint64_t capacity = 100'000'000) {
  std::vector<Necklace> out;
  for_each_necklace(spec, max_len, emit_visitor([&](const Gen* w, int n) {
                      if (out.size() >= capacity)
                        throw CapacityExceeded("necklace count exceeds capacity");
                      out.push_back(Necklace{std::vector<Gen>(w, w + n)});
                    }));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace presmet
