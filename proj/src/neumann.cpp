#include "permstab/neumann.hpp"

#include "permstab/closure.hpp"
#include "permstab/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace permstab {

namespace {

constexpr uint32_t kMaxDegree32 = 0xFFFFFFFFu;
constexpr int64_t kMaxLampMagnitude = 1000000;

uint32_t degree_of(const SequenceSpec& spec, size_t n) {
  uint64_t d = spec.d(n);
  if (d > kMaxDegree32) fail(errc::unsupported, "degree d(" + std::to_string(n) + ") exceeds 2^32-1");
  return static_cast<uint32_t>(d);
}

Permutation pmul(const Permutation& s, const Permutation& t) { return s * t; }
Permutation pinv(const Permutation& s) { return s.inverse(); }

// Prod_{k<n} d(k)!/2, the order of the head product of alternating groups.
BigInt head_order(const SequenceSpec& spec, size_t n) {
  BigInt out = 1;
  for (size_t k = 1; k < n; ++k) {
    uint64_t d = spec.d(k);
    if (d > 100000) fail(errc::unsupported, "degree d(" + std::to_string(k) + ") too large for an order computation");
    out *= factorial(static_cast<unsigned>(d)) / 2;
  }
  return out;
}

BigInt pow3(uint64_t e) {
  BigInt out = 1;
  for (uint64_t i = 0; i < e; ++i) out *= 3;
  return out;
}

// Cycles of p including fixed points, each cycle starting at its smallest
// point, cycles ordered by smallest point. Points are 0-based.
std::vector<std::vector<uint32_t>> cycle_decomposition(const Permutation& p) {
  std::vector<std::vector<uint32_t>> cycles;
  std::vector<bool> seen(p.degree(), false);
  for (uint32_t s = 0; s < p.degree(); ++s) {
    if (seen[s]) continue;
    std::vector<uint32_t> cyc;
    for (uint32_t w = s; !seen[w]; w = p.apply(w)) {
      seen[w] = true;
      cyc.push_back(w);
    }
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

void check_window(int64_t m) {
  if (m < 0) fail(errc::invalid_argument, "lamp window m must be >= 0");
}

std::vector<CanonicalForm> closure_forms(const SequenceSpec& spec, size_t window,
                                         const std::vector<CanonicalForm>& gens, uint64_t cap) {
  auto mul = [](const CanonicalForm& a, const CanonicalForm& b) { return canonical_mul(a, b); };
  return closure_enumerate(canonical_identity(spec, window), gens, mul, cap, CanonicalFormHash{})
      .elements;
}

// Generators of G_n L_m in canonical form: alpha_n-/beta_n-slot tuples for
// each head coordinate k < n and the lamp generators b_i for |i| <= m.
std::vector<CanonicalForm> glm_generators(const SequenceSpec& spec, size_t n, int64_t m,
                                          size_t window) {
  CanonicalForm id = canonical_identity(spec, window);
  std::vector<CanonicalForm> gens;
  for (size_t k = 1; k < n; ++k) {
    auto [a, b] = generator_images(spec, k);
    CanonicalForm fa = id;
    fa.coords[k - 1] = a;
    gens.push_back(std::move(fa));
    CanonicalForm fb = id;
    fb.coords[k - 1] = b;
    gens.push_back(std::move(fb));
  }
  for (int64_t i = -m; i <= m; ++i)
    gens.push_back(canonical_of_lamp_word(spec, {{i, 1}}, window));
  return gens;
}

LampWord merge_adjacent(const LampWord& w) {
  LampWord out;
  for (const auto& letter : w) {
    if (!out.empty() && out.back().position == letter.position) {
      out.back().exponent += letter.exponent;
      if (out.back().exponent == 0) out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

} // namespace

std::pair<Permutation, Permutation> generator_images(const SequenceSpec& spec, size_t n) {
  if (n == 0) fail(errc::invalid_argument, "coordinate index must be >= 1");
  uint32_t d = degree_of(spec, n);
  uint64_t r = spec.r(n);
  return {Permutation::cycle(d, d),
          Permutation::three_cycle(1, static_cast<uint32_t>(1 + r),
                                   static_cast<uint32_t>(1 + 2 * r), d)};
}

Permutation lamp_generator_image(const SequenceSpec& spec, size_t n, int64_t j) {
  if (n == 0) fail(errc::invalid_argument, "coordinate index must be >= 1");
  uint32_t d = degree_of(spec, n);
  uint64_t r = spec.r(n);
  auto shifted = [&](uint64_t point) { // alpha^j on 1-based points
    int64_t v = static_cast<int64_t>(point - 1) + (j % d);
    v %= static_cast<int64_t>(d);
    if (v < 0) v += d;
    return static_cast<uint32_t>(v + 1);
  };
  return Permutation::three_cycle(shifted(1), shifted(1 + r), shifted(1 + 2 * r), d);
}

NeumannElement::NeumannElement(std::shared_ptr<const SequenceSpec> spec, FreeWord word)
    : spec_(std::move(spec)), word_(std::move(word)) {
  if (!spec_) fail(errc::invalid_argument, "null sequence spec");
  for (int8_t v : word_.letters()) {
    unsigned idx = static_cast<unsigned>(v > 0 ? v : -v);
    if (idx > 2) fail(errc::invalid_argument, "word uses a generator outside {x, y}");
  }
}

Permutation NeumannElement::coordinate(size_t n) const {
  auto it = coord_memo_.find(n);
  if (it != coord_memo_.end()) return it->second;
  auto [a, b] = generator_images(*spec_, n);
  Permutation res = word_.evaluate(Permutation(a.degree()), std::vector<Permutation>{a, b},
                                   pmul, pinv);
  coord_memo_.emplace(n, res);
  return res;
}

const LamplighterElement& NeumannElement::tau() const {
  if (!tau_memo_) tau_memo_ = evaluate_in_w(word_);
  return *tau_memo_;
}

NeumannElement NeumannElement::operator*(const NeumannElement& rhs) const {
  if (spec_ != rhs.spec_)
    fail(errc::invalid_argument, "elements come from different sequence specs");
  return NeumannElement(spec_, word_ * rhs.word_);
}

NeumannElement NeumannElement::inverse() const { return NeumannElement(spec_, word_.inverse()); }

bool is_identity(const NeumannElement& g) {
  if (!g.tau().is_identity()) return false;
  size_t N;
  try {
    N = threshold(g.spec(), g.word().length());
  } catch (const Error& e) {
    if (e.code() != errc::horizon_insufficient) throw;
    // No certified window. A nontrivial materialized coordinate still
    // decides "no"; otherwise the answer is genuinely out of reach.
    for (size_t n = 1; n <= g.spec().horizon(); ++n)
      if (!g.coordinate(n).is_identity()) return false;
    throw;
  }
  for (size_t n = 1; n < N; ++n)
    if (!g.coordinate(n).is_identity()) return false;
  return true;
}

bool equals(const NeumannElement& g, const NeumannElement& h) {
  return is_identity(g * h.inverse());
}

std::vector<std::pair<size_t, Permutation>> kernel_support(const NeumannElement& g) {
  if (!g.tau().is_identity())
    fail(errc::invalid_argument, "kernel_support requires tau(g) to be the identity");
  size_t N = threshold(g.spec(), g.word().length());
  std::vector<std::pair<size_t, Permutation>> out;
  for (size_t n = 1; n < N; ++n) {
    Permutation p = g.coordinate(n);
    if (!p.is_identity()) out.emplace_back(n, std::move(p));
  }
  return out;
}

// --- Lamp words ---

LampWord parse_lamp_word(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '*') {
      s.push_back(' ');
    } else if (i + 1 < text.size() && static_cast<unsigned char>(text[i]) == 0xC2 &&
               static_cast<unsigned char>(text[i + 1]) == 0xB7) { // UTF-8 middle dot
      s.push_back(' ');
      ++i;
    } else {
      s.push_back(text[i]);
    }
  }
  std::istringstream iss(s);
  std::string tok;
  LampWord out;
  auto parse_int = [&](const std::string& part, const char* what) {
    try {
      size_t used = 0;
      long long v = std::stoll(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      if (v > kMaxLampMagnitude || v < -kMaxLampMagnitude)
        fail(errc::unsupported, std::string(what) + " out of supported range: " + part);
      return static_cast<int64_t>(v);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(errc::parse_error, std::string("bad ") + what + " in lamp word: '" + part + "'");
    }
  };
  while (iss >> tok) {
    if (tok == "e") continue;
    if (tok.size() < 3 || tok[0] != 'b' || tok[1] != '_')
      fail(errc::parse_error, "lamp word token must look like b_<j> or b_<j>^<e>: got '" + tok + "'");
    size_t caret = tok.find('^');
    int64_t pos = parse_int(tok.substr(2, caret == std::string::npos ? std::string::npos : caret - 2),
                            "lamp position");
    int64_t exp = caret == std::string::npos ? 1 : parse_int(tok.substr(caret + 1), "lamp exponent");
    if (exp == 0) fail(errc::parse_error, "lamp word exponent must be nonzero: '" + tok + "'");
    out.push_back({pos, static_cast<int>(exp)});
  }
  return out;
}

std::string lamp_word_to_string(const LampWord& w) {
  if (w.empty()) return "e";
  std::ostringstream oss;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) oss << ' ';
    oss << "b_" << w[i].position;
    if (w[i].exponent != 1) oss << '^' << w[i].exponent;
  }
  return oss.str();
}

FreeWord lamp_word_to_free(const LampWord& w) {
  FreeWord out;
  for (const auto& [pos, exp] : w) {
    if (pos > kMaxLampMagnitude || pos < -kMaxLampMagnitude)
      fail(errc::unsupported, "lamp position out of supported range");
    out = out * (FreeWord::generator(0, static_cast<int>(pos)) * FreeWord::generator(1, exp) *
                 FreeWord::generator(0, static_cast<int>(-pos)));
  }
  return out;
}

int64_t lamp_word_radius(const LampWord& w) {
  int64_t r = 0;
  for (const auto& letter : w) r = std::max(r, std::abs(letter.position));
  return r;
}

LamplighterElement lamp_word_tau(const LampWord& w) {
  LamplighterElement acc;
  for (const auto& [pos, exp] : w) acc = acc * LamplighterElement::lamp(pos, exp);
  return acc;
}

// --- Canonical forms ---

CanonicalForm canonical_identity(const SequenceSpec& spec, size_t window) {
  if (window == 0) fail(errc::invalid_argument, "canonical window must be >= 1");
  CanonicalForm f;
  f.coords.reserve(window - 1);
  for (size_t k = 1; k < window; ++k) f.coords.emplace_back(degree_of(spec, k));
  return f;
}

CanonicalForm canonical_of_word(const SequenceSpec& spec, const FreeWord& w, size_t window) {
  CanonicalForm f = canonical_identity(spec, window);
  for (size_t k = 1; k < window; ++k) {
    auto [a, b] = generator_images(spec, k);
    f.coords[k - 1] = w.evaluate(Permutation(a.degree()), std::vector<Permutation>{a, b}, pmul, pinv);
  }
  f.tail = evaluate_in_w(w);
  return f;
}

CanonicalForm canonical_of_lamp_word(const SequenceSpec& spec, const LampWord& w, size_t window) {
  CanonicalForm f = canonical_identity(spec, window);
  for (size_t k = 1; k < window; ++k) {
    Permutation acc(degree_of(spec, k));
    for (const auto& [pos, exp] : w) {
      int e = ((exp % 3) + 3) % 3;
      if (e == 0) continue;
      acc = acc * lamp_generator_image(spec, k, pos).power(e);
    }
    f.coords[k - 1] = std::move(acc);
  }
  f.tail = lamp_word_tau(w);
  return f;
}

CanonicalForm canonical_alpha_power(const SequenceSpec& spec, int64_t j, size_t window) {
  CanonicalForm f = canonical_identity(spec, window);
  for (size_t k = 1; k < window; ++k) {
    uint32_t d = degree_of(spec, k);
    f.coords[k - 1] = Permutation::cycle(d, d).power(j);
  }
  f.tail = LamplighterElement::shift_power(j);
  return f;
}

CanonicalForm canonical_mul(const CanonicalForm& a, const CanonicalForm& b) {
  if (a.coords.size() != b.coords.size())
    fail(errc::degree_mismatch, "canonical forms have different windows");
  CanonicalForm f;
  f.coords.reserve(a.coords.size());
  for (size_t i = 0; i < a.coords.size(); ++i) f.coords.push_back(a.coords[i] * b.coords[i]);
  f.tail = a.tail * b.tail;
  return f;
}

CanonicalForm canonical_inverse(const CanonicalForm& a) {
  CanonicalForm f;
  f.coords.reserve(a.coords.size());
  for (const auto& p : a.coords) f.coords.push_back(p.inverse());
  f.tail = a.tail.inverse();
  return f;
}

// --- L_m, Folner sets, finite quotients ---

LmEnumeration lm_elements(const SequenceSpec& spec, int64_t m, uint64_t cap, size_t window_hint) {
  check_window(m);
  size_t thr = threshold(spec, static_cast<uint64_t>(m));
  size_t window = std::max({thr, window_hint, static_cast<size_t>(1)});
  std::vector<CanonicalForm> gens;
  std::vector<LampLetter> letters;
  for (int64_t i = -m; i <= m; ++i) {
    gens.push_back(canonical_of_lamp_word(spec, {{i, 1}}, window));
    letters.push_back({i, 1});
  }
  auto mul = [](const CanonicalForm& a, const CanonicalForm& b) { return canonical_mul(a, b); };
  auto clo = closure_enumerate(canonical_identity(spec, window), gens, mul, cap, CanonicalFormHash{});
  LmEnumeration out{window, m, std::move(clo.elements), {}};
  out.words.reserve(out.elements.size());
  for (size_t i = 0; i < out.elements.size(); ++i) {
    LampWord w;
    for (size_t gi : clo.word_for(i)) w.push_back(letters[gi]);
    out.words.push_back(merge_adjacent(w));
  }
  return out;
}

FolnerSet folner_set(const SequenceSpec& spec, size_t n, int64_t m, uint64_t cap) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  size_t thr = threshold(spec, static_cast<uint64_t>(m));
  size_t window = std::max(n, thr);
  uint64_t wsize = 2 * static_cast<uint64_t>(m) + 1;
  uint64_t head_cap = cap / wsize;
  if (head_cap == 0)
    fail(errc::cap_exceeded, "cap " + std::to_string(cap) + " is below the slice count 2m+1");
  FolnerSet out;
  out.n = n;
  out.m = m;
  out.window = window;
  out.glm = closure_forms(spec, window, glm_generators(spec, n, m, window), head_cap);
  out.elements.reserve(out.glm.size() * wsize);
  for (int64_t j = -m; j <= m; ++j) {
    CanonicalForm aj = canonical_alpha_power(spec, j, window);
    for (const auto& u : out.glm) out.elements.push_back(canonical_mul(u, aj));
  }
  return out;
}

Rational folner_ratio(const SequenceSpec& spec, size_t n, int64_t m, char generator,
                      uint64_t cap) {
  FreeWord s;
  switch (generator) {
    case 'a': s = FreeWord::generator(0, 1); break;
    case 'A': s = FreeWord::generator(0, -1); break;
    case 'b': s = FreeWord::generator(1, 1); break;
    case 'B': s = FreeWord::generator(1, -1); break;
    default: fail(errc::invalid_argument, "generator must be one of a, A, b, B");
  }
  FolnerSet fs = folner_set(spec, n, m, cap);
  CanonicalForm sf = canonical_of_word(spec, s, fs.window);
  std::unordered_set<CanonicalForm, CanonicalFormHash> members(fs.elements.begin(),
                                                               fs.elements.end());
  uint64_t moved = 0;
  for (const auto& f : fs.elements)
    if (!members.count(canonical_mul(f, sf))) ++moved;
  return Rational(moved, fs.elements.size());
}

FiniteQuotientElement finite_quotient(const SequenceSpec& spec, const NeumannElement& g,
                                      size_t n, int64_t m) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  if (&g.spec() != &spec)
    fail(errc::invalid_argument, "element does not belong to this sequence spec");
  FiniteQuotientElement out{{}, project_finite(g.tau(), m)};
  out.coords.reserve(n - 1);
  for (size_t k = 1; k < n; ++k) out.coords.push_back(g.coordinate(k));
  return out;
}

FiniteQuotientElement finite_quotient_of_form(const CanonicalForm& f, size_t n, int64_t m) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  if (f.coords.size() + 1 < n)
    fail(errc::invalid_argument, "canonical window too small for the requested quotient");
  FiniteQuotientElement out{{f.coords.begin(), f.coords.begin() + (n - 1)},
                            project_finite(f.tail, m)};
  return out;
}

BigInt pn_order(const SequenceSpec& spec, size_t n, int64_t m) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  uint64_t wsize = 2 * static_cast<uint64_t>(m) + 1;
  return head_order(spec, n) * wsize * pow3(wsize);
}

BijectionReport finite_quotient_bijection(const SequenceSpec& spec, size_t n, int64_t m,
                                          uint64_t cap) {
  FolnerSet fs = folner_set(spec, n, m, cap);
  std::unordered_set<FiniteQuotientElement, FiniteQuotientHash> image;
  for (const auto& f : fs.elements) image.insert(finite_quotient_of_form(f, n, m));
  BigInt pn = pn_order(spec, n, m);
  bool bij = image.size() == fs.elements.size() && BigInt(image.size()) == pn;
  return {bij, fs.elements.size(), image.size(), pn};
}

DensityResult conjugation_density(const SequenceSpec& spec, const LampWord& g, size_t n,
                                  int64_t m, uint64_t cap) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  int64_t mg = lamp_word_radius(g);
  size_t window = std::max(n, threshold(spec, static_cast<uint64_t>(m + mg)));
  uint64_t wsize = 2 * static_cast<uint64_t>(m) + 1;
  uint64_t head_cap = cap / wsize;
  if (head_cap == 0)
    fail(errc::cap_exceeded, "cap " + std::to_string(cap) + " is below the slice count 2m+1");
  auto glm = closure_forms(spec, window, glm_generators(spec, n, m, window), head_cap);
  std::unordered_set<CanonicalForm, CanonicalFormHash> members(glm.begin(), glm.end());
  CanonicalForm gf = canonical_of_lamp_word(spec, g, window);
  uint64_t hits = 0;
  for (int64_t j = -m; j <= m; ++j) {
    CanonicalForm aj = canonical_alpha_power(spec, j, window);
    CanonicalForm gj = canonical_mul(canonical_mul(aj, gf), canonical_inverse(aj));
    for (const auto& u : glm) {
      CanonicalForm v = canonical_mul(canonical_mul(u, gj), canonical_inverse(u));
      if (members.count(v)) ++hits;
    }
  }
  uint64_t total = glm.size() * wsize;
  return {Rational(hits, total), total, hits};
}

// --- Cosofic approximants ---

BigInt alt_conjugator_count(const Permutation& x, const Permutation& y) {
  if (x.degree() != y.degree())
    fail(errc::degree_mismatch, "permutations act on different domains");
  auto cx = cycle_decomposition(x);
  auto cy = cycle_decomposition(y);
  std::map<size_t, std::vector<const std::vector<uint32_t>*>> by_len_x, by_len_y;
  for (const auto& c : cx) by_len_x[c.size()].push_back(&c);
  for (const auto& c : cy) by_len_y[c.size()].push_back(&c);
  if (by_len_x.size() != by_len_y.size()) return 0;
  for (const auto& [len, cs] : by_len_x) {
    auto it = by_len_y.find(len);
    if (it == by_len_y.end() || it->second.size() != cs.size()) return 0;
  }
  // |C_Sym(x)| = prod_i c_i! * i^c_i over cycle lengths i with multiplicity c_i.
  BigInt centralizer = 1;
  bool has_odd_centralizer_element = false;
  for (const auto& [len, cs] : by_len_x) {
    BigInt mult = factorial(static_cast<unsigned>(cs.size()));
    BigInt power = 1;
    for (size_t t = 0; t < cs.size(); ++t) power *= static_cast<uint64_t>(len);
    centralizer *= mult * power;
    if (len % 2 == 0 || (len % 2 == 1 && cs.size() >= 2)) has_odd_centralizer_element = true;
  }
  if (has_odd_centralizer_element) return centralizer / 2;
  // The centralizer lies in Alt: every Sym-conjugator has the same parity,
  // so build one and let its sign decide.
  std::vector<uint32_t> gamma(x.degree());
  for (const auto& [len, cs] : by_len_x) {
    const auto& ds = by_len_y.at(len);
    for (size_t t = 0; t < cs.size(); ++t)
      for (size_t i = 0; i < len; ++i) gamma[(*cs[t])[i]] = (*ds[t])[i];
  }
  Permutation g(std::move(gamma));
  return g.is_even() ? centralizer : BigInt(0);
}

namespace {

// theta_k(c) = prod_i pi_k(b_{i-m})^{c_i}: the coordinate image of the
// L_m element with lamp configuration c.
Permutation theta(const std::vector<Permutation>& patterns, const std::vector<int>& c) {
  Permutation acc(patterns.empty() ? 0u : patterns[0].degree());
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) acc = acc * patterns[i].power(c[i]);
  return acc;
}

bool next_config(std::vector<int>& c) { // odometer over {0,1,2}^len
  for (auto& v : c) {
    if (v < 2) {
      ++v;
      return true;
    }
    v = 0;
  }
  return false;
}

} // namespace

CosoficResult cosofic_approximant(const SequenceSpec& spec, const std::vector<LampWord>& h_gens,
                                  const std::vector<LampWord>& tests, size_t n, int64_t m,
                                  uint64_t cap) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  int64_t m_h = 0;
  for (const auto& w : h_gens) m_h = std::max(m_h, lamp_word_radius(w));
  if (m_h > m)
    fail(errc::invalid_argument, "subgroup generators reach lamp position " + std::to_string(m_h) +
                                     ", outside the window m = " + std::to_string(m));
  size_t thr_m = threshold(spec, static_cast<uint64_t>(m));
  if (!tests.empty() && thr_m > n)
    fail(errc::invalid_argument,
         "factored counting requires threshold(spec, m) <= n: the threshold is " +
             std::to_string(thr_m) + " but n = " + std::to_string(n));
  size_t window = std::max(n, thr_m);
  std::vector<size_t> kstar(tests.size());
  for (size_t t = 0; t < tests.size(); ++t) {
    int64_t mg = lamp_word_radius(tests[t]);
    kstar[t] = std::max(n, threshold(spec, static_cast<uint64_t>(m + mg)));
    window = std::max(window, kstar[t]);
  }

  std::vector<CanonicalForm> hgen_forms;
  hgen_forms.reserve(h_gens.size());
  for (const auto& w : h_gens) hgen_forms.push_back(canonical_of_lamp_word(spec, w, window));
  auto subgroup = closure_forms(spec, window, hgen_forms, cap);

  CosoficResult res;
  std::unordered_set<FiniteQuotientElement, FiniteQuotientHash> kset;
  for (const auto& h : subgroup) {
    auto q = finite_quotient_of_form(h, n, m);
    if (kset.insert(q).second) res.k_image.push_back(q);
  }

  uint64_t wsize = 2 * static_cast<uint64_t>(m) + 1;
  BigInt lamp_count = pow3(wsize); // |L_m| = 3^(2m+1)
  res.folner_size = head_order(spec, n) * wsize * lamp_count;

  for (size_t t = 0; t < tests.size(); ++t) {
    CanonicalForm gf = canonical_of_lamp_word(spec, tests[t], window);
    // Conjugates g_j = alpha^j g alpha^-j, j = -m..m.
    std::vector<CanonicalForm> gj;
    gj.reserve(wsize);
    for (int64_t j = -m; j <= m; ++j) {
      CanonicalForm aj = canonical_alpha_power(spec, j, window);
      gj.push_back(canonical_mul(canonical_mul(aj, gf), canonical_inverse(aj)));
    }
    // Lamp patterns pi_k(b_i) for the c-window coordinates n <= k < kstar.
    std::vector<std::vector<Permutation>> patterns; // [k - n][i + m]
    for (size_t k = n; k < kstar[t]; ++k) {
      std::vector<Permutation> row;
      row.reserve(wsize);
      for (int64_t i = -m; i <= m; ++i) row.push_back(lamp_generator_image(spec, k, i));
      patterns.push_back(std::move(row));
    }

    // T1: pairs against phi_n(H); the head count per pair is a product of
    // conjugator counts and the whole lamp slice contributes uniformly.
    BigInt t1 = 0;
    for (const auto& v : gj) {
      FiniteLamplighterElement vt = project_finite(v.tail, m);
      for (const auto& p : res.k_image) {
        if (!(vt == p.tail)) continue;
        BigInt prod = 1;
        for (size_t k = 1; k < n && prod != 0; ++k)
          prod *= alt_conjugator_count(v.coords[k - 1], p.coords[k - 1]);
        t1 += prod;
      }
    }
    t1 *= lamp_count;

    // T2: pairs against H itself; lamp configurations must also transport
    // the c-window coordinates exactly.
    BigInt t2 = 0;
    for (const auto& v : gj) {
      for (const auto& h : subgroup) {
        if (!(v.tail == h.tail)) continue;
        BigInt prod = 1;
        for (size_t k = 1; k < n && prod != 0; ++k)
          prod *= alt_conjugator_count(v.coords[k - 1], h.coords[k - 1]);
        if (prod == 0) continue;
        BigInt cc;
        if (patterns.empty()) {
          cc = lamp_count;
        } else {
          cc = 0;
          std::vector<int> c(wsize, 0);
          do {
            bool ok = true;
            for (size_t k = n; ok && k < kstar[t]; ++k) {
              Permutation th = theta(patterns[k - n], c);
              ok = th * v.coords[k - 1] * th.inverse() == h.coords[k - 1];
            }
            if (ok) ++cc;
          } while (next_config(c));
        }
        t2 += prod * cc;
      }
    }

    BigInt num = t1 - t2;
    if (num < 0) fail(errc::internal, "negative symmetric-difference count");
    res.densities.push_back(Rational(num, res.folner_size));
  }
  return res;
}

Rational cosofic_density_direct(const SequenceSpec& spec, const std::vector<LampWord>& h_gens,
                                const LampWord& test, size_t n, int64_t m, uint64_t cap) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  int64_t m_h = 0;
  for (const auto& w : h_gens) m_h = std::max(m_h, lamp_word_radius(w));
  if (m_h > m)
    fail(errc::invalid_argument, "subgroup generators reach lamp position " + std::to_string(m_h) +
                                     ", outside the window m = " + std::to_string(m));
  int64_t mg = lamp_word_radius(test);
  size_t window = std::max(n, threshold(spec, static_cast<uint64_t>(m + mg)));
  uint64_t wsize = 2 * static_cast<uint64_t>(m) + 1;
  uint64_t head_cap = cap / wsize;
  if (head_cap == 0)
    fail(errc::cap_exceeded, "cap " + std::to_string(cap) + " is below the slice count 2m+1");
  auto glm = closure_forms(spec, window, glm_generators(spec, n, m, window), head_cap);

  std::vector<CanonicalForm> hgen_forms;
  for (const auto& w : h_gens) hgen_forms.push_back(canonical_of_lamp_word(spec, w, window));
  auto subgroup = closure_forms(spec, window, hgen_forms, cap);
  std::unordered_set<CanonicalForm, CanonicalFormHash> h_set(subgroup.begin(), subgroup.end());
  std::unordered_set<FiniteQuotientElement, FiniteQuotientHash> phi_h;
  for (const auto& h : subgroup) phi_h.insert(finite_quotient_of_form(h, n, m));

  CanonicalForm gf = canonical_of_lamp_word(spec, test, window);
  uint64_t hits = 0;
  for (int64_t j = -m; j <= m; ++j) {
    CanonicalForm aj = canonical_alpha_power(spec, j, window);
    CanonicalForm gj = canonical_mul(canonical_mul(aj, gf), canonical_inverse(aj));
    for (const auto& u : glm) {
      CanonicalForm v = canonical_mul(canonical_mul(u, gj), canonical_inverse(u));
      bool in_k = phi_h.count(finite_quotient_of_form(v, n, m)) != 0;
      bool in_h = h_set.count(v) != 0;
      if (in_k != in_h) ++hits;
    }
  }
  return Rational(hits, glm.size() * wsize);
}

Rational cosofic_density_shifted(const SequenceSpec& spec, const std::vector<LampWord>& h_gens,
                                 const FreeWord& test, size_t n, int64_t m, uint64_t cap) {
  if (n < 1) fail(errc::invalid_argument, "n must be >= 1");
  check_window(m);
  int64_t m_h = 0;
  for (const auto& w : h_gens) m_h = std::max(m_h, lamp_word_radius(w));
  if (m_h > m)
    fail(errc::invalid_argument, "subgroup generators reach lamp position " + std::to_string(m_h) +
                                     ", outside the window m = " + std::to_string(m));
  int64_t shift = evaluate_in_w(test).shift();
  if (shift == 0)
    fail(errc::invalid_argument,
         "test word has zero shift; use the lamp-word form of the test element");
  int64_t wsize = 2 * m + 1;
  // Conjugation preserves the shift, so f g f^-1 never lands in H; it lands
  // in K_n only if the shift survives reduction mod 2m+1.
  if (((shift % wsize) + wsize) % wsize != 0) return Rational(0);

  size_t window = std::max(n, threshold(spec, static_cast<uint64_t>(m)));
  uint64_t head_cap = cap / static_cast<uint64_t>(wsize);
  if (head_cap == 0)
    fail(errc::cap_exceeded, "cap " + std::to_string(cap) + " is below the slice count 2m+1");
  auto glm = closure_forms(spec, window, glm_generators(spec, n, m, window), head_cap);
  std::vector<CanonicalForm> hgen_forms;
  for (const auto& w : h_gens) hgen_forms.push_back(canonical_of_lamp_word(spec, w, window));
  auto subgroup = closure_forms(spec, window, hgen_forms, cap);
  std::unordered_set<FiniteQuotientElement, FiniteQuotientHash> phi_h;
  for (const auto& h : subgroup) phi_h.insert(finite_quotient_of_form(h, n, m));

  CanonicalForm gf = canonical_of_word(spec, test, window);
  uint64_t hits = 0;
  for (int64_t j = -m; j <= m; ++j) {
    CanonicalForm aj = canonical_alpha_power(spec, j, window);
    CanonicalForm gj = canonical_mul(canonical_mul(aj, gf), canonical_inverse(aj));
    for (const auto& u : glm) {
      CanonicalForm v = canonical_mul(canonical_mul(u, gj), canonical_inverse(u));
      if (phi_h.count(finite_quotient_of_form(v, n, m))) ++hits;
    }
  }
  return Rational(hits, glm.size() * static_cast<uint64_t>(wsize));
}

} // namespace permstab
