#include "permstab/perm_group.hpp"

#include "permstab/error.hpp"

#include <cassert>

namespace permstab {

PermGroup::PermGroup(std::vector<Permutation> generators) : generators_(std::move(generators)) {
  if (generators_.empty()) fail(errc::invalid_argument, "need at least one generator");
  degree_ = generators_.front().degree();
  for (const auto& g : generators_)
    if (g.degree() != degree_) fail(errc::degree_mismatch, "generator degrees differ");
  for (const auto& g : generators_) add_generator(0, g);
}

std::pair<Permutation, size_t> PermGroup::sift(const Permutation& g) const {
  Permutation residue = g;
  for (size_t i = 0; i < levels_.size(); ++i) {
    uint32_t image = residue.apply(levels_[i].base);
    const auto& rep = levels_[i].transversal[image];
    if (!rep) return {residue, i};
    residue = rep->inverse() * residue;
  }
  return {residue, levels_.size()};
}

std::vector<Permutation> PermGroup::gens_at(size_t level) const {
  // The candidate stabilizer at `level` is generated by every strong
  // generator homed at this level or deeper: a generator homed at j fixes
  // the bases of all levels before j.
  std::vector<Permutation> out;
  for (size_t j = level; j < levels_.size(); ++j)
    out.insert(out.end(), levels_[j].gens.begin(), levels_[j].gens.end());
  return out;
}

void PermGroup::add_generator(size_t level, const Permutation& g) {
  // Sift from `level` down so the inserted residue fixes all earlier bases.
  Permutation residue = g;
  size_t i = level;
  for (; i < levels_.size(); ++i) {
    if (residue.is_identity()) return;
    uint32_t image = residue.apply(levels_[i].base);
    const auto& rep = levels_[i].transversal[image];
    if (!rep) break;
    residue = rep->inverse() * residue;
  }
  if (residue.is_identity()) return;
  if (i == levels_.size()) {
    uint32_t base = 0;
    while (residue.apply(base) == base) ++base;
    Level lvl;
    lvl.base = base;
    lvl.transversal.assign(degree_, std::nullopt);
    lvl.transversal[base] = Permutation(degree_);
    levels_.push_back(std::move(lvl));
  }
  levels_[i].gens.push_back(residue);
  // The residue joined the candidate stabilizers of levels `level`..i, so
  // their orbits and Schreier generators must be re-closed, deepest first.
  // Levels before `level` are untouched: the residue already lies in their
  // generated groups.
  for (size_t k = i + 1; k-- > level;) extend_orbit(k);
}

void PermGroup::extend_orbit(size_t level) {
  // Rebuild the orbit of this level's base to a fixpoint, then sift every
  // Schreier generator into the deeper levels. Uses a by-value snapshot of
  // the relevant generators: recursive calls may grow levels_ (invalidating
  // references), and any generator they insert is a product of snapshot
  // elements, so the snapshot still generates this level's group.
  const std::vector<Permutation> gens = gens_at(level);
  {
    Level& lvl = levels_[level];
    std::vector<uint32_t> queue;
    for (uint32_t p = 0; p < degree_; ++p)
      if (lvl.transversal[p]) queue.push_back(p);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      uint32_t p = queue[qi];
      for (const auto& s : gens) {
        uint32_t q = s.apply(p);
        if (!lvl.transversal[q]) {
          lvl.transversal[q] = s * *lvl.transversal[p];
          queue.push_back(q);
        }
      }
    }
  }
  for (uint32_t p = 0; p < degree_; ++p) {
    if (!levels_[level].transversal[p]) continue;
    for (const Permutation& s : gens) {
      uint32_t q = s.apply(p);
      assert(levels_[level].transversal[q]);
      Permutation schreier =
          levels_[level].transversal[q]->inverse() * (s * *levels_[level].transversal[p]);
      if (!schreier.is_identity()) add_generator(level + 1, schreier);
    }
  }
}

BigInt PermGroup::order() const {
  BigInt n = 1;
  for (const auto& lvl : levels_) {
    uint64_t orbit = 0;
    for (const auto& slot : lvl.transversal)
      if (slot) ++orbit;
    n *= orbit;
  }
  return n;
}

bool PermGroup::contains(const Permutation& p) const {
  if (p.degree() != degree_) fail(errc::degree_mismatch, "membership test needs equal degree");
  auto [residue, level] = sift(p);
  return level == levels_.size() && residue.is_identity();
}

} // namespace permstab
