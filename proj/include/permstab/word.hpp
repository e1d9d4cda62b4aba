#ifndef PERMSTAB_WORD_HPP
#define PERMSTAB_WORD_HPP

#include "permstab/rational.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace permstab {

// Reduced word in a free group. Letters are +-(k+1) for generator k, so the
// representation is rank-generic; parsing, printing and ball enumeration use
// the rank-2 alphabet a = x, A = x^-1, b = y, B = y^-1. Words are kept fully
// reduced at all times, and evaluating a word multiplies the letter images
// left to right.
class FreeWord {
public:
  FreeWord() = default;
  explicit FreeWord(std::vector<int8_t> letters); // reduces

  static FreeWord generator(unsigned index, int exponent = 1);

  const std::vector<int8_t>& letters() const { return letters_; }
  size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  FreeWord operator*(const FreeWord& rhs) const; // concatenation, reduced
  FreeWord inverse() const;
  FreeWord power(int64_t e) const;

  std::string to_string() const;

  bool operator==(const FreeWord& rhs) const = default;

  template <class T, class Mul, class Inv>
  T evaluate(const T& identity, const std::vector<T>& gen_images, Mul mul, Inv inv) const {
    T acc = identity;
    for (int8_t v : letters_) {
      unsigned idx = static_cast<unsigned>(v > 0 ? v : -v) - 1;
      acc = v > 0 ? mul(acc, gen_images.at(idx)) : mul(acc, inv(gen_images.at(idx)));
    }
    return acc;
  }

private:
  std::vector<int8_t> letters_;
};

inline FreeWord conjugate(const FreeWord& u, const FreeWord& v) { return u * v * u.inverse(); }
inline FreeWord commutator(const FreeWord& u, const FreeWord& v) {
  return u * v * u.inverse() * v.inverse();
}

// Strict alphabet {a, A, b, B}; whitespace is ignored anywhere.
FreeWord parse_word(const std::string& text);

// All reduced words of length <= radius over the rank-2 alphabet, in
// length-lex order with letters ordered a < A < b < B.
std::vector<FreeWord> ball(unsigned radius);
BigInt ball_count(unsigned radius); // 1 + 2(3^radius - 1)

struct FreeWordHash {
  size_t operator()(const FreeWord& w) const {
    size_t h = 14695981039346656037ull;
    for (int8_t v : w.letters()) h = (h ^ static_cast<uint8_t>(v)) * 1099511628211ull;
    return h;
  }
};

// Finite relation set E over the rank-2 basis. Parsing drops blank lines and
// '#' comments and dedupes exact duplicates, keeping first-occurrence order;
// the norm is the sum of the reduced lengths of the deduped set.
class RelationSet {
public:
  RelationSet() = default;
  explicit RelationSet(std::vector<FreeWord> relations); // dedupes

  static RelationSet parse(const std::string& file_contents);

  const std::vector<FreeWord>& relations() const { return relations_; }
  size_t size() const { return relations_.size(); }
  uint64_t norm() const;

private:
  std::vector<FreeWord> relations_;
};

} // namespace permstab

#endif
