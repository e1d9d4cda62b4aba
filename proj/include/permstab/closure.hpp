#ifndef PERMSTAB_CLOSURE_HPP
#define PERMSTAB_CLOSURE_HPP

#include "permstab/error.hpp"
#include "permstab/perm.hpp"

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace permstab {

// BFS closure of `generators` under right multiplication, seeded with
// `identity`. For finite groups this is the generated subgroup (inverses
// arise as powers), and insertion order is deterministic: breadth-first,
// generators applied in the order given. parent/gen let callers rebuild a
// defining generator word for any element. Throws cap_exceeded when the
// closure grows past `cap`.
template <class T, class Hash, class Mul>
struct Closure {
  std::vector<T> elements;       // elements[0] == identity
  std::vector<size_t> parent;    // parent[0] == 0
  std::vector<size_t> gen_index; // elements[i] == elements[parent[i]] * gens[gen_index[i]]

  std::vector<size_t> word_for(size_t index) const {
    std::vector<size_t> gens;
    for (size_t i = index; i != 0; i = parent[i]) gens.push_back(gen_index[i]);
    return {gens.rbegin(), gens.rend()};
  }
};

template <class T, class Hash, class Mul>
Closure<T, Hash, Mul> closure_enumerate(const T& identity, const std::vector<T>& generators,
                                        Mul mul, uint64_t cap, Hash hash = Hash()) {
  Closure<T, Hash, Mul> out;
  std::unordered_map<T, size_t, Hash> seen(16, hash);
  out.elements.push_back(identity);
  out.parent.push_back(0);
  out.gen_index.push_back(0);
  seen.emplace(identity, 0);
  for (size_t i = 0; i < out.elements.size(); ++i) {
    for (size_t gi = 0; gi < generators.size(); ++gi) {
      T next = mul(out.elements[i], generators[gi]);
      if (seen.count(next)) continue;
      if (out.elements.size() >= cap)
        fail(errc::cap_exceeded,
             "closure exceeded cap of " + std::to_string(cap) + " elements");
      seen.emplace(next, out.elements.size());
      out.elements.push_back(std::move(next));
      out.parent.push_back(i);
      out.gen_index.push_back(gi);
    }
  }
  return out;
}

// Left-regular representation of a finite group given as a closed element
// list containing the identity: g maps to the permutation i -> index of
// g * elements[i]. This is a homomorphism under (s*t)(w) = s(t(w)), and every
// non-identity image is fixed-point-free, i.e. at normalized Hamming
// distance exactly 1 from the identity. Throws invalid_argument if the list
// is not closed under the supplied multiplication.
template <class T, class Hash, class Mul>
std::vector<Permutation> regular_representation(const std::vector<T>& elements, Mul mul,
                                                Hash hash = Hash()) {
  if (elements.empty()) fail(errc::invalid_argument, "empty element list");
  std::unordered_map<T, uint32_t, Hash> index(16, hash);
  for (size_t i = 0; i < elements.size(); ++i) {
    if (!index.emplace(elements[i], static_cast<uint32_t>(i)).second)
      fail(errc::invalid_argument, "duplicate element in list");
  }
  std::vector<Permutation> images;
  images.reserve(elements.size());
  for (const auto& g : elements) {
    std::vector<uint32_t> img(elements.size());
    for (size_t i = 0; i < elements.size(); ++i) {
      auto it = index.find(mul(g, elements[i]));
      if (it == index.end())
        fail(errc::invalid_argument, "element list is not closed under multiplication");
      img[i] = it->second;
    }
    images.emplace_back(std::move(img));
  }
  return images;
}

} // namespace permstab

#endif
