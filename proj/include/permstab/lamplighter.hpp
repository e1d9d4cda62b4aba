#ifndef PERMSTAB_LAMPLIGHTER_HPP
#define PERMSTAB_LAMPLIGHTER_HPP

#include "permstab/word.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace permstab {

// Element of the wreath product W = C3 wr Z: a finitely supported lamp
// configuration f : Z -> {0,1,2} plus a shift k. Multiplication is
// (f, k)(g, l) = (f + k.g, k + l) where (k.g)(i) = g(i - k), which makes the
// shift generator a satisfy a^n b_m a^-n = b_{m+n} for the lamp generators
// b_m. Zero lamp values are never stored.
class LamplighterElement {
public:
  LamplighterElement() = default;

  static LamplighterElement shift_gen();              // a
  static LamplighterElement shift_power(int64_t k);   // a^k
  static LamplighterElement lamp(int64_t pos, int exponent); // b_pos^exponent

  const std::map<int64_t, uint8_t>& lamps() const { return lamps_; }
  int64_t shift() const { return shift_; }

  LamplighterElement operator*(const LamplighterElement& rhs) const;
  LamplighterElement inverse() const;
  bool is_identity() const { return shift_ == 0 && lamps_.empty(); }

  bool operator==(const LamplighterElement& rhs) const = default;

  // Literal product "a^k" or "a^k · b_i^e · ...": reading the printed string
  // back as a product of generators reproduces the element exactly, so the
  // lamp positions shown are the element's positions translated by -k.
  std::string to_string() const;

private:
  std::map<int64_t, uint8_t> lamps_;
  int64_t shift_ = 0;
};

LamplighterElement parse_lamplighter(const std::string& text);

// Evaluates a rank-2 word under x -> a, y -> b_0.
LamplighterElement evaluate_in_w(const FreeWord& word);

// Element of the finite quotient W_m = C3 wr (Z / (2m+1)Z). Lamp positions
// and the shift are residues in the centered window [-m, m].
class FiniteLamplighterElement {
public:
  explicit FiniteLamplighterElement(int64_t m);

  int64_t modulus_m() const { return m_; }
  int64_t window() const { return 2 * m_ + 1; }
  int64_t shift() const { return shift_; }
  uint8_t lamp(int64_t residue) const { return lamps_[index_of(residue)]; }

  FiniteLamplighterElement operator*(const FiniteLamplighterElement& rhs) const;
  FiniteLamplighterElement inverse() const;
  bool is_identity() const;

  bool operator==(const FiniteLamplighterElement& rhs) const = default;
  std::string to_string() const; // same shape as W with "(mod 2m+1)" appended

  friend FiniteLamplighterElement project_finite(const LamplighterElement& g, int64_t m);
  friend std::vector<FiniteLamplighterElement> enumerate_wm(int64_t m, uint64_t cap);

private:
  size_t index_of(int64_t residue) const;

  int64_t m_;
  std::vector<uint8_t> lamps_; // index i holds position i - m
  int64_t shift_ = 0;          // centered residue
};

// rho_m : W -> W_m, reducing positions and shift mod 2m+1.
FiniteLamplighterElement project_finite(const LamplighterElement& g, int64_t m);

FiniteLamplighterElement evaluate_in_wm(const FreeWord& word, int64_t m);

// Deterministic enumeration of all (2m+1) * 3^(2m+1) elements of W_m.
// Throws cap_exceeded if the group is larger than `cap`.
std::vector<FiniteLamplighterElement> enumerate_wm(int64_t m, uint64_t cap);

struct LamplighterHash {
  size_t operator()(const LamplighterElement& g) const {
    size_t h = std::hash<int64_t>()(g.shift());
    for (const auto& [pos, val] : g.lamps())
      h = h * 1000003u ^ (std::hash<int64_t>()(pos) + val);
    return h;
  }
};

struct FiniteLamplighterHash {
  size_t operator()(const FiniteLamplighterElement& g) const {
    size_t h = std::hash<int64_t>()(g.shift()) ^ (g.modulus_m() << 1);
    for (int64_t i = -g.modulus_m(); i <= g.modulus_m(); ++i)
      h = h * 31 + g.lamp(i);
    return h;
  }
};

} // namespace permstab

#endif
