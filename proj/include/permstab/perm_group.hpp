#ifndef PERMSTAB_PERM_GROUP_HPP
#define PERMSTAB_PERM_GROUP_HPP

#include "permstab/perm.hpp"
#include "permstab/rational.hpp"

#include <optional>
#include <vector>

namespace permstab {

// Deterministic Schreier-Sims stabilizer chain with explicit transversals.
// Base points are chosen as the smallest point moved by the offending
// generator, and orbits are extended in increasing point order, so the chain
// (and everything derived from it) is reproducible across runs.
class PermGroup {
public:
  explicit PermGroup(std::vector<Permutation> generators);

  uint32_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  BigInt order() const;
  bool contains(const Permutation& p) const;

private:
  struct Level {
    uint32_t base = 0;
    std::vector<Permutation> gens;
    // transversal[p] maps base to p; empty slots mean p is outside the orbit.
    std::vector<std::optional<Permutation>> transversal;
  };

  // Every strong generator homed at `level` or deeper.
  std::vector<Permutation> gens_at(size_t level) const;
  void extend_orbit(size_t level);
  void add_generator(size_t level, const Permutation& g);
  // Returns the identity if g sifts through; otherwise the residue and the
  // first level it could not pass.
  std::pair<Permutation, size_t> sift(const Permutation& g) const;

  uint32_t degree_;
  std::vector<Permutation> generators_;
  std::vector<Level> levels_;
};

} // namespace permstab

#endif
