#ifndef PERMSTAB_LEF_HPP
#define PERMSTAB_LEF_HPP

#include "permstab/perm.hpp"
#include "permstab/rational.hpp"
#include "permstab/sequence_spec.hpp"
#include "permstab/word.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace permstab {

struct ProjectionEntry {
  FreeWord word;
  std::vector<Permutation> coords; // pi_1(w) .. pi_{4l+1}(w)
};

struct ProjectionTable {
  unsigned l;
  std::vector<ProjectionEntry> entries; // ball words in length-lex order
};

// w -> (pi_1(w), ..., pi_{4l+1}(w)) over the ball of radius l, verified
// injective (distinct words in the group map to distinct tuples). Throws
// invalid_argument naming the hypothesis r(n), d(n)-2r(n) >= n on failure.
ProjectionTable projection_embedding(const SequenceSpec& spec, unsigned l, uint64_t cap);

struct SubstitutionEntry {
  Permutation key;   // pi_{4l+1}(w), degree d(4l+1)
  Permutation image; // w evaluated at the degree-(12l+3) patterns
  FreeWord representative;
};

struct SubstitutionTable {
  unsigned l;
  size_t coordinate; // 4l+1
  std::vector<SubstitutionEntry> entries;
};

// pi_{4l+1}(w) -> w(abar, bbar) with abar = (1 ... 12l+3) and
// bbar = (1, 4l+2, 8l+3), over the ball of radius l. Requires l >= 1 and
// r(4l+1), d(4l+1) - 2 r(4l+1) >= 4l+1; well-definedness and injectivity are
// verified over the ball.
SubstitutionTable substitute_embedding(const SequenceSpec& spec, unsigned l);

struct LefCertificate {
  unsigned l;
  size_t ball_size;
  bool projection_injective;
  bool partial_homomorphism; // image(uv) = image(u) image(v) whenever |uv| <= l
  bool substitution_well_defined;
  bool substitution_injective;
  std::vector<size_t> substituted_coords; // coordinates realizable in Alt(12l+3)
  BigInt constructed_order; // product of the per-coordinate factors actually used
  BigInt reference_bound;   // ((15l)!)^(4l+1)
  ProjectionTable projection;
  SubstitutionTable substitution;
};

LefCertificate lef_certificate(const SequenceSpec& spec, unsigned l, uint64_t cap);

nlohmann::json to_json(const LefCertificate& cert);

} // namespace permstab

#endif
