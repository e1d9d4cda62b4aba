/*
 * permstab — exact permutation-stability toolkit, C interface.
 *
 * The library computes with generalized alternating-product groups defined
 * by a sequence spec (d(n), r(n)), their lamplighter quotient, Folner sets,
 * finite quotients, LEF embeddings, and the randomized almost-solution
 * tester. All arithmetic is exact; rationals are rendered as "p/q".
 *
 * Conventions
 *   - Every function that can fail reports through its return value (NULL
 *     for pointer returns, nonzero status otherwise) and records a status
 *     code and message retrievable with ps_last_status / ps_last_error on
 *     the calling thread.
 *   - Returned strings are heap-allocated UTF-8 and must be released with
 *     ps_string_free. Unless noted otherwise they contain a JSON document.
 *   - Sequence specs are opaque handles. A handle is not thread-safe:
 *     share one across threads only after ps_spec_ensure has materialized
 *     every index the threads will touch.
 *   - Permutations cross this interface as text, either one image line
 *     ("2 3 1") or cycle form ("(1 2 3)(4 5)"), 1-based. Words use the
 *     alphabet a, A, b, B (A = a^-1). Lamp words are products of tokens
 *     b_<j> or b_<j>^<e>, e.g. "b_0 * b_-2^2".
 *   - A `cap` argument of 0 selects the default of 200000.
 */

#ifndef PERMSTAB_H
#define PERMSTAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes, mirroring the library's error conditions. */
typedef enum ps_status {
  PS_OK = 0,
  PS_EINVAL = 1,       /* invalid argument or unmet hypothesis */
  PS_EPARSE = 2,       /* malformed text or JSON input */
  PS_EDEGREE = 3,      /* mixed permutation degrees */
  PS_ECAP = 4,         /* an enumeration exceeded its cap */
  PS_EHORIZON = 5,     /* the spec's materialized horizon is too short */
  PS_EUNSUPPORTED = 6, /* request outside the supported range */
  PS_EOVERFLOW = 7,    /* fixed-width arithmetic would overflow */
  PS_EINTERNAL = 8     /* internal invariant violated (a bug) */
} ps_status;

/* Opaque sequence spec (the data (d(n), r(n))). */
typedef struct ps_spec ps_spec;

/* --------------------------------------------------------------- errors -- */

/* Status of the most recent failing call on this thread (PS_OK if the most
 * recent call succeeded). */
int ps_last_status(void);

/* Message for the most recent failing call on this thread. The pointer stays
 * valid until the next library call on the same thread. Never NULL. */
const char* ps_last_error(void);

/* Releases a string returned by this library. NULL is allowed. */
void ps_string_free(char* s);

/* ---------------------------------------------------------------- specs -- */

/* Parses a spec from a JSON document:
 *   {"explicit": {"d": [5, 7, ...], "r": [1, 2, ...], "tail_certified": true}}
 * or
 *   {"generated": {"F": "one" | {"table": [[m, value], ...]}, "C": 79, "N": 3}}
 */
ps_spec* ps_spec_from_json(const char* json_text);

/* Reads the file at `path` and parses it as spec JSON. */
ps_spec* ps_spec_from_file(const char* path);

void ps_spec_free(ps_spec* spec);

/* The spec as JSON (inverse of ps_spec_from_json; generated specs include
 * the currently materialized length as "N"). */
char* ps_spec_to_json(const ps_spec* spec);

/* Materializes indices 1..n. Generated specs extend; explicit specs fail
 * with PS_EHORIZON when n exceeds their table. Returns PS_OK on success. */
int ps_spec_ensure(ps_spec* spec, uint64_t n);

/* Materialized terms 1..upto as {"d": [...], "r": [...]} (extending
 * generated specs as needed). */
char* ps_spec_terms(ps_spec* spec, uint64_t upto);

/* Least N with r(n) >= 2l+1 and d(n) - 2r(n) >= 2l+1 for every n >= N.
 * Returns 0 and sets PS_EHORIZON when no such N can be certified. */
uint64_t ps_threshold(ps_spec* spec, uint64_t l);

/* ----------------------------------------------------- sequence recipes -- */

/* Runs the recursive recipe for `length` terms against a growth target
 *   {"F": "one" | "linear" | "poly2" | "poly3" | "exp2" | "tower"
 *         | {"table": [[m, value], ...]}, "C": 79}
 * and returns the resulting spec as JSON. */
char* ps_seq_generate(const char* target_json, uint64_t length);

/* Re-derives primality, interval, congruence and (optionally) growth-bound
 * conditions over indices 1..upto. `target_json` may be NULL. Returns
 *   {"entries": [{"check", "index", "pass", ...}, ...],
 *    "standing_ok": bool, "theorem_ok": bool}. */
char* ps_seq_verify(ps_spec* spec, uint64_t upto, const char* target_json);

/* ------------------------------------------------------- group elements -- */

/* Evaluates a word at coordinates 1..coords plus the lamplighter image:
 *   {"word": "...", "coords": [{"n": 1, "image": "(1 2 ...)"}, ...],
 *    "tau": {"shift": k, "lamps": {"0": 1, ...}, "text": "..."}} */
char* ps_eval(ps_spec* spec, const char* word, uint64_t coords);

/* Word problem. Returns
 *   {"word": "...", "trivial": bool,
 *    "witness": {"kind": "tau" | "coordinate", "n": k, "image": "..."}}
 * with "witness" present only for nontrivial words. The witness is the first
 * coordinate (lowest n) whose image is nontrivial when one exists within the
 * certified window; otherwise the lamplighter image. Fails with PS_EHORIZON
 * when triviality cannot be certified on this spec. */
char* ps_wp(ps_spec* spec, const char* word);

/* Lamplighter image of a word:
 *   {"shift": k, "lamps": {"pos": value, ...}, "text": "a^k · b_i ..."} */
char* ps_tau(const char* word);

/* Ball of radius l in the rank-2 free group:
 *   {"radius": l, "count": "...", "words": ["", "a", ...]}
 * "words" is included only when include_words is nonzero. */
char* ps_ball(uint32_t radius, int include_words);

/* ------------------------------------------------------------ stability -- */

/* tuple_text: two permutation lines (x then y, '#' comments allowed).
 * relations_text: one word per line.
 * delta / confidence / epsilon: exact rationals like "1/4".
 *
 * Runs the randomized tester and returns
 *   {"pass": bool, "witness": {"relation": i, "point": w} | null,
 *    "samples_per_relation": n, "seed": s,
 *    "total_queries": q, "weighted_cost": c}
 * (relation index and point are 1-based in this JSON). */
char* ps_sas(const char* tuple_text, const char* relations_text, const char* delta,
             const char* confidence, uint64_t seed);

/* Local and global defect:
 *   {"local": "p/q", "global": "p/q", "minimizer": {"x": "...", "y": "..."}}
 * The global part enumerates Sym(N)^2 and requires degree <= cap_degree
 * (pass 0 for the default cap of 6). */
char* ps_defect(const char* tuple_text, const char* relations_text, uint32_t cap_degree);

/* Local defect alone (no enumeration, any degree) as "p/q". */
char* ps_defect_local(const char* tuple_text, const char* relations_text);

/* Pads an exact block solution to an almost-solution with violation in
 * (delta/2, delta):
 *   {"q": 1, "r": r, "violation": "p/q", "x": "...", "y": "..."} */
char* ps_pad(const char* tuple_text, const char* word, const char* delta);

/* Certificate cost ||E|| / delta as "p/q". */
char* ps_stability_cost(const char* relations_text, const char* delta);

/* --------------------------------------------- Folner sets and quotients -- */

/* Boundary ratio |gF \ F| / |F| for generator in {a, A, b, B} as "p/q". */
char* ps_folner(ps_spec* spec, uint64_t n, int64_t m, char generator, uint64_t cap);

/* Enumerates F_n and measures the finite-quotient map on it:
 *   {"bijective": bool, "folner_size": s, "image_size": i, "quotient_order": "..."} */
char* ps_quotient(ps_spec* spec, uint64_t n, int64_t m, uint64_t cap);

/* Conjugation density of a lamp word over F_n:
 *   {"density": "p/q", "hits": h, "folner_size": s} */
char* ps_density(ps_spec* spec, const char* lamp_word, uint64_t n, int64_t m, uint64_t cap);

/* Cosofic approximant densities. h_gens_json and tests_json are JSON arrays
 * of lamp-word strings; a test entry may also be {"word": "..."} to denote a
 * free word with nonzero lamplighter shift. Returns
 *   {"folner_size": "...", "k_image_size": k, "densities": ["p/q", ...]} */
char* ps_cosofic(ps_spec* spec, const char* h_gens_json, const char* tests_json, uint64_t n,
                 int64_t m, uint64_t cap);

/* ------------------------------------------------------------------ LEF -- */

/* Local-embedding certificate at radius l (projection and substitution
 * tables, flags, and the constructed/reference order bounds) as JSON. */
char* ps_lef(ps_spec* spec, uint32_t l, uint64_t cap);

/* ---------------------------------------------------------- verification -- */

/* Runs the whole invariant battery against the spec:
 *   {"pass": bool, "checks": [{"name", "status": "PASS"|"FAIL"|"SKIP",
 *    "detail"}, ...]}
 * cap bounds each enumeration (0 selects the default of 200000); seed feeds
 * the randomized property checks (0 selects the default). */
char* ps_verify_paper(ps_spec* spec, uint64_t cap, uint64_t seed);

/* Library version as a static string (not ps_string_free'd). */
const char* ps_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PERMSTAB_H */
