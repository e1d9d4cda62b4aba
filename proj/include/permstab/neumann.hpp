#ifndef PERMSTAB_NEUMANN_HPP
#define PERMSTAB_NEUMANN_HPP

#include "permstab/lamplighter.hpp"
#include "permstab/perm.hpp"
#include "permstab/rational.hpp"
#include "permstab/sequence_spec.hpp"
#include "permstab/word.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace permstab {

// alpha_n = (1 2 ... d(n)), beta_n = (1, 1+r(n), 1+2r(n)); both even.
std::pair<Permutation, Permutation> generator_images(const SequenceSpec& spec, size_t n);

// pi_n(alpha^j beta alpha^-j): the 3-cycle pattern the lamp generator b_j
// projects to at coordinate n.
Permutation lamp_generator_image(const SequenceSpec& spec, size_t n, int64_t j);

// Element of G(d, r): a defining word in the generators (x -> alpha,
// y -> beta) with memoized coordinate and tail images. The memo caches are
// single-writer; copies share the spec but not the caches.
class NeumannElement {
public:
  NeumannElement(std::shared_ptr<const SequenceSpec> spec, FreeWord word);

  const FreeWord& word() const { return word_; }
  const SequenceSpec& spec() const { return *spec_; }
  const std::shared_ptr<const SequenceSpec>& spec_ptr() const { return spec_; }

  Permutation coordinate(size_t n) const; // pi_n(g), memoized
  const LamplighterElement& tau() const;  // tau(g), memoized

  NeumannElement operator*(const NeumannElement& rhs) const;
  NeumannElement inverse() const;

private:
  std::shared_ptr<const SequenceSpec> spec_;
  FreeWord word_;
  mutable std::unordered_map<size_t, Permutation> coord_memo_;
  mutable std::optional<LamplighterElement> tau_memo_;
};

// Word problem. A nontrivial witness (tau or a coordinate) decides "false"
// without a certified tail; "true" additionally requires threshold(spec, |w|)
// so that triviality transfers to all unseen coordinates.
bool is_identity(const NeumannElement& g);
bool equals(const NeumannElement& g, const NeumannElement& h);

// All (n, pi_n(g)) with pi_n(g) != e, for g in ker(tau); every such index is
// below threshold(spec, |word|). Throws invalid_argument when tau(g) != e.
std::vector<std::pair<size_t, Permutation>> kernel_support(const NeumannElement& g);

// --- Lamp words: products of the generators b_j = alpha^j beta alpha^-j ---

struct LampLetter {
  int64_t position;
  int exponent; // nonzero; negative means the inverse power
  bool operator==(const LampLetter&) const = default;
};
using LampWord = std::vector<LampLetter>;

LampWord parse_lamp_word(const std::string& text); // tokens b_<j> or b_<j>^<e>
std::string lamp_word_to_string(const LampWord& w);
FreeWord lamp_word_to_free(const LampWord& w);
int64_t lamp_word_radius(const LampWord& w); // max |position|, 0 if empty
LamplighterElement lamp_word_tau(const LampWord& w);

// --- Canonical finite forms ---

// Coordinates 1..window-1 plus the tau image: a complete invariant on
// G_n L_m alpha^Z whenever window >= max(n, threshold(spec, m)).
struct CanonicalForm {
  std::vector<Permutation> coords; // coords[k-1] = pi_k
  LamplighterElement tail;
  bool operator==(const CanonicalForm&) const = default;
};

struct CanonicalFormHash {
  size_t operator()(const CanonicalForm& f) const {
    size_t h = LamplighterHash()(f.tail);
    for (const auto& p : f.coords) h = h * 1000003u ^ PermutationHash()(p);
    return h;
  }
};

CanonicalForm canonical_identity(const SequenceSpec& spec, size_t window);
CanonicalForm canonical_of_word(const SequenceSpec& spec, const FreeWord& w, size_t window);
CanonicalForm canonical_of_lamp_word(const SequenceSpec& spec, const LampWord& w, size_t window);
CanonicalForm canonical_alpha_power(const SequenceSpec& spec, int64_t j, size_t window);
CanonicalForm canonical_mul(const CanonicalForm& a, const CanonicalForm& b);
CanonicalForm canonical_inverse(const CanonicalForm& a);

// --- L_m, Folner sets, finite quotients ---

struct LmEnumeration {
  size_t window;
  int64_t m;
  std::vector<CanonicalForm> elements; // BFS order, identity first
  std::vector<LampWord> words;         // defining words, parallel to elements
};

// Full enumeration of L_m = <b_j : |j| <= m> in canonical form. The form
// window is max(threshold(spec, m), window_hint).
LmEnumeration lm_elements(const SequenceSpec& spec, int64_t m, uint64_t cap,
                          size_t window_hint = 0);

struct FolnerSet {
  size_t n;
  int64_t m;
  size_t window;
  std::vector<CanonicalForm> glm;      // G_n L_m, BFS order
  std::vector<CanonicalForm> elements; // F_n = {u alpha^j}, grouped by j = -m..m
};

// F_n = {g l alpha^j : g in G_n, l in L_m, |j| <= m}. G_n is realized
// directly as tuples over Alt(d(1)) x ... x Alt(d(n-1)).
FolnerSet folner_set(const SequenceSpec& spec, size_t n, int64_t m, uint64_t cap);

// Exact |F_n s \ F_n| / |F_n| for s one of a, A, b, B (alpha, its inverse,
// beta, its inverse).
Rational folner_ratio(const SequenceSpec& spec, size_t n, int64_t m, char generator,
                      uint64_t cap);

struct FiniteQuotientElement {
  std::vector<Permutation> coords; // pi_1 .. pi_{n-1}
  FiniteLamplighterElement tail;   // in W_m
  bool operator==(const FiniteQuotientElement&) const = default;
};

struct FiniteQuotientHash {
  size_t operator()(const FiniteQuotientElement& e) const {
    size_t h = FiniteLamplighterHash()(e.tail);
    for (const auto& p : e.coords) h = h * 1000003u ^ PermutationHash()(p);
    return h;
  }
};

// phi_n(g) = (pi_1(g), ..., pi_{n-1}(g), rho_m(tau(g))) in P_n = G_n x W_m.
FiniteQuotientElement finite_quotient(const SequenceSpec& spec, const NeumannElement& g,
                                      size_t n, int64_t m);
FiniteQuotientElement finite_quotient_of_form(const CanonicalForm& f, size_t n, int64_t m);

// |P_n| = (prod_{k<n} d(k)!/2) * (2m+1) * 3^(2m+1).
BigInt pn_order(const SequenceSpec& spec, size_t n, int64_t m);

struct BijectionReport {
  bool bijective;
  size_t folner_size;
  size_t image_size;
  BigInt pn_size;
};

// Enumerates F_n and measures phi_n on it: bijective iff no collisions and
// the image fills P_n.
BijectionReport finite_quotient_bijection(const SequenceSpec& spec, size_t n, int64_t m,
                                          uint64_t cap);

struct DensityResult {
  Rational density;
  uint64_t folner_size;
  uint64_t hits;
};

// |{f in F_n : f g f^-1 in G_n L_m}| / |F_n| for g in L_infty (a lamp word).
DensityResult conjugation_density(const SequenceSpec& spec, const LampWord& g, size_t n,
                                  int64_t m, uint64_t cap);

// --- Cosofic approximants ---

// Number of sigma in Alt(N) with sigma x sigma^-1 = y, via cycle types and
// centralizer orders.
BigInt alt_conjugator_count(const Permutation& x, const Permutation& y);

struct CosoficResult {
  std::vector<FiniteQuotientElement> k_image; // phi_n(H), deduplicated
  BigInt folner_size;                         // |F_n|
  std::vector<Rational> densities;            // p_n per test element
};

// H = <h_gens> (lamp words, windows <= m); for each test element g (a lamp
// word) computes p_n(g) = |{f in F_n : f g f^-1 in H symdiff K_n}| / |F_n|
// exactly, by factorized counting over P_n (no F_n enumeration). Requires
// threshold(spec, m) <= n, which makes phi_n faithful on G_n L_m.
CosoficResult cosofic_approximant(const SequenceSpec& spec,
                                  const std::vector<LampWord>& h_gens,
                                  const std::vector<LampWord>& tests, size_t n, int64_t m,
                                  uint64_t cap);

// Same density by direct enumeration of F_n (cross-check; needs
// |F_n| <= cap but not threshold(spec, m) <= n).
Rational cosofic_density_direct(const SequenceSpec& spec, const std::vector<LampWord>& h_gens,
                                const LampWord& test, size_t n, int64_t m, uint64_t cap);

// p_n for a test element given as a free word whose tau image has a nonzero
// shift k: f g f^-1 then never lands in H, and lands in K_n only if the shift
// vanishes mod 2m+1, so the density is computable without lamp form.
Rational cosofic_density_shifted(const SequenceSpec& spec, const std::vector<LampWord>& h_gens,
                                 const FreeWord& test, size_t n, int64_t m, uint64_t cap);

} // namespace permstab

#endif
