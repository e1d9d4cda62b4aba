#ifndef PERMSTAB_PERM_HPP
#define PERMSTAB_PERM_HPP

#include "permstab/rational.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace permstab {

// Permutation of {0, ..., degree-1}. All text I/O is 1-based; points are
// 0-based in memory. Composition is (s * t)(w) = s(t(w)): the right factor
// acts first, so evaluating a product applies factors right to left.
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(uint32_t degree); // identity
  explicit Permutation(std::vector<uint32_t> images);

  // k-cycle (1 2 ... k) padded with fixed points up to `degree`:
  // point i maps to i+1 and k wraps to 1 (1-based description).
  static Permutation cycle(uint32_t k, uint32_t degree);
  // 3-cycle (a b c) on 1-based points inside `degree`.
  static Permutation three_cycle(uint32_t a, uint32_t b, uint32_t c, uint32_t degree);

  uint32_t degree() const { return static_cast<uint32_t>(images_.size()); }
  uint32_t apply(uint32_t point) const { return images_[point]; }
  const std::vector<uint32_t>& images() const { return images_; }

  Permutation operator*(const Permutation& rhs) const; // this after rhs
  Permutation inverse() const;
  Permutation power(int64_t e) const;

  bool is_identity() const;
  uint64_t support_size() const;     // |{w : s(w) != w}|
  bool is_even() const;

  // Normalized Hamming distance |{w : s(w) != t(w)}| / degree.
  friend Rational hamming_distance(const Permutation& s, const Permutation& t);

  // Cycle form on 1-based points, cycles and cycle entries ordered by their
  // smallest element, fixed points omitted; identity prints as "()".
  std::string to_cycle_string() const;

  bool operator==(const Permutation& rhs) const = default;
  auto operator<=>(const Permutation& rhs) const = default;

private:
  std::vector<uint32_t> images_;
};

// Accepts an image line "2 1 3" (degree = token count) or cycle form
// "(1 2 3)(4 5)". Cycle-form degree is the largest point mentioned unless
// degree_hint is larger; an image line must match a nonzero degree_hint.
Permutation parse_permutation(const std::string& text, uint32_t degree_hint = 0);

struct PermutationHash {
  size_t operator()(const Permutation& p) const {
    size_t h = p.degree();
    for (uint32_t v : p.images()) h = h * 1000003u + v + 1;
    return h;
  }
};

} // namespace permstab

#endif
