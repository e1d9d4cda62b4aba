#ifndef PERMSTAB_STABILITY_HPP
#define PERMSTAB_STABILITY_HPP

#include "permstab/perm.hpp"
#include "permstab/rational.hpp"
#include "permstab/word.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace permstab {

// Assignment of the two free generators to permutations of a common degree.
struct PermTuple {
  Permutation x, y;
};

PermTuple make_perm_tuple(Permutation x, Permutation y); // enforces equal degrees

// Two permutation lines, x then y (image line or cycle form); cycle-form
// degrees are unified to the larger of the two, so the identity may be
// written "()" as long as the other line fixes the degree.
PermTuple parse_perm_tuple(const std::string& text);

Permutation evaluate_tuple(const PermTuple& rho, const FreeWord& w); // rho(w)

// rho(w)(point) evaluated letter by letter (right factor first) without
// composing the word image.
uint32_t apply_word(const PermTuple& rho, const FreeWord& w, uint32_t point);

struct TestVerdict {
  bool pass;
  // (relation index, point), both 0-based; present iff pass is false, and
  // replayable: the relation moves the point.
  std::optional<std::pair<size_t, uint32_t>> witness;
  uint64_t samples_per_relation;
  uint64_t seed;
  uint64_t total_queries; // point evaluations actually performed
  uint64_t weighted_cost; // sum of |r| over performed evaluations
};

// d(rho(r), id) < delta for every r in E, with exact rational comparison.
bool is_almost_solution(const PermTuple& rho, const Rational& delta, const RelationSet& E);

// Samples n = ceil(ln(|E| / (1-confidence)) / delta) points per relation,
// uniformly with replacement (mt19937_64 with rejection sampling), and fails
// on the first moved point. If some relation has d(rho(r), id) >= delta the
// pass probability is at most (1-delta)^n <= (1-confidence)/|E|.
TestVerdict sample_and_substitute(const PermTuple& rho, const RelationSet& E,
                                  const Rational& delta, const Rational& confidence,
                                  uint64_t seed);

// L_R(rho) = sum over r in R of d(rho(r), id).
Rational local_defect(const PermTuple& rho, const RelationSet& R);

struct GlobalDefect {
  Rational defect;
  PermTuple minimizer;
};

// G_R(rho) = min over solution pairs phi in Sym(N)^2 of
// d(rho_x, phi_x) + d(rho_y, phi_y), by exhaustive enumeration; ties are
// broken by lexicographic image order.
GlobalDefect global_defect(const PermTuple& rho, const RelationSet& R,
                           uint32_t cap_degree = 6);

struct PadResult {
  PermTuple padded; // on q copies of the block plus r fixed points
  uint64_t q;       // always 1
  uint64_t r;
  Rational violation; // d(padded(w1), id) = q|Omega| / (q|Omega| + r)
};

// Blows psi up to q = 1 copy plus r fresh fixed points, with the violation
// ratio inside the open interval (delta/2, delta). Requires
// d(psi(w1), id) = 1.
PadResult pad_block_solution(const PermTuple& psi, const FreeWord& w1, const Rational& delta);

// ||E|| / delta, the cost of one explicit certificate pair.
Rational stability_cost(const RelationSet& E, const Rational& delta);

struct SoficEntry {
  std::string g, h, gh; // the table states g * h = gh
};

struct SoficTable {
  std::vector<std::string> labels;
  std::vector<SoficEntry> products;
};

struct SoficViolation {
  std::string condition; // "product", "separation", or "identity"
  std::string detail;
  Rational value; // the offending distance (0 for an identity violation)
};

struct SoficReport {
  bool pass;
  std::vector<SoficViolation> violations;
};

// Checks, with exact rationals: (i) every table product satisfies
// d(phi(gh), phi(g)phi(h)) < epsilon; (ii) every g != "e" satisfies
// d(phi(g), id) > 1 - epsilon; (iii) if "e" is present, phi(e) = id exactly.
SoficReport sofic_check(const SoficTable& table, const std::map<std::string, Permutation>& phi,
                        const Rational& epsilon);

} // namespace permstab

#endif
