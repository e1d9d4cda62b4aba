#include "permstab/perm.hpp"

#include "permstab/error.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace permstab {

Permutation::Permutation(uint32_t degree) : images_(degree) {
  if (degree == 0) fail(errc::invalid_argument, "permutation degree must be >= 1");
  std::iota(images_.begin(), images_.end(), 0u);
}

Permutation::Permutation(std::vector<uint32_t> images) : images_(std::move(images)) {
  if (images_.empty()) fail(errc::invalid_argument, "permutation degree must be >= 1");
  std::vector<bool> seen(images_.size(), false);
  for (uint32_t v : images_) {
    if (v >= images_.size() || seen[v])
      fail(errc::invalid_argument, "image list is not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::cycle(uint32_t k, uint32_t degree) {
  if (k == 0 || k > degree) fail(errc::invalid_argument, "cycle length out of range");
  Permutation p(degree);
  for (uint32_t i = 0; i + 1 < k; ++i) p.images_[i] = i + 1;
  if (k >= 1) p.images_[k - 1] = 0;
  return p;
}

Permutation Permutation::three_cycle(uint32_t a, uint32_t b, uint32_t c, uint32_t degree) {
  if (a < 1 || b < 1 || c < 1 || a > degree || b > degree || c > degree || a == b || b == c ||
      a == c)
    fail(errc::invalid_argument, "bad 3-cycle points");
  Permutation p(degree);
  p.images_[a - 1] = b - 1;
  p.images_[b - 1] = c - 1;
  p.images_[c - 1] = a - 1;
  return p;
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (degree() != rhs.degree())
    fail(errc::degree_mismatch, "cannot compose permutations of degrees " +
                                    std::to_string(degree()) + " and " +
                                    std::to_string(rhs.degree()));
  Permutation out;
  out.images_.resize(degree());
  for (uint32_t i = 0; i < degree(); ++i) out.images_[i] = images_[rhs.images_[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  out.images_.resize(degree());
  for (uint32_t i = 0; i < degree(); ++i) out.images_[images_[i]] = i;
  return out;
}

Permutation Permutation::power(int64_t e) const {
  Permutation base = e < 0 ? inverse() : *this;
  uint64_t k = e < 0 ? static_cast<uint64_t>(-(e + 1)) + 1 : static_cast<uint64_t>(e);
  Permutation acc(degree());
  while (k) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

bool Permutation::is_identity() const {
  for (uint32_t i = 0; i < degree(); ++i)
    if (images_[i] != i) return false;
  return true;
}

uint64_t Permutation::support_size() const {
  uint64_t n = 0;
  for (uint32_t i = 0; i < degree(); ++i)
    if (images_[i] != i) ++n;
  return n;
}

bool Permutation::is_even() const {
  std::vector<bool> seen(degree(), false);
  uint32_t transpositions = 0;
  for (uint32_t i = 0; i < degree(); ++i) {
    if (seen[i]) continue;
    uint32_t len = 0;
    for (uint32_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

Rational hamming_distance(const Permutation& s, const Permutation& t) {
  if (s.degree() != t.degree())
    fail(errc::degree_mismatch, "hamming distance needs equal degrees");
  uint64_t diff = 0;
  for (uint32_t i = 0; i < s.degree(); ++i)
    if (s.images_[i] != t.images_[i]) ++diff;
  return Rational(BigInt(diff), BigInt(s.degree()));
}

std::string Permutation::to_cycle_string() const {
  std::vector<bool> seen(degree(), false);
  std::ostringstream out;
  bool any = false;
  for (uint32_t i = 0; i < degree(); ++i) {
    if (seen[i] || images_[i] == i) {
      seen[i] = true;
      continue;
    }
    any = true;
    out << '(';
    for (uint32_t j = i;; j = images_[j]) {
      if (seen[j]) break;
      seen[j] = true;
      if (j != i) out << ' ';
      out << j + 1;
    }
    out << ')';
  }
  if (!any) return "()";
  return out.str();
}

namespace {

Permutation parse_cycle_form(const std::string& text, uint32_t degree_hint) {
  std::vector<std::vector<uint32_t>> cycles;
  uint32_t max_point = 0;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') fail(errc::parse_error, "expected '(' in cycle form");
    ++i;
    std::vector<uint32_t> cycle;
    skip_ws();
    while (i < text.size() && text[i] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        fail(errc::parse_error, "expected point in cycle form");
      uint32_t v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i] - '0');
        if (v > 100000000u) fail(errc::parse_error, "point out of range");
        ++i;
      }
      if (v == 0) fail(errc::parse_error, "points are 1-based");
      cycle.push_back(v);
      max_point = std::max(max_point, v);
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        skip_ws();
      }
    }
    if (i >= text.size()) fail(errc::parse_error, "unterminated cycle");
    ++i; // ')'
    if (!cycle.empty()) cycles.push_back(std::move(cycle));
    skip_ws();
  }
  uint32_t degree = std::max(degree_hint, max_point);
  if (degree == 0) fail(errc::parse_error, "empty cycle form needs a degree hint");
  std::vector<uint32_t> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<bool> moved(degree, false);
  for (const auto& cycle : cycles) {
    for (size_t k = 0; k < cycle.size(); ++k) {
      uint32_t from = cycle[k] - 1;
      uint32_t to = cycle[(k + 1) % cycle.size()] - 1;
      if (moved[from]) fail(errc::parse_error, "point repeated across cycles");
      moved[from] = true;
      images[from] = to;
    }
  }
  return Permutation(std::move(images));
}

} // namespace

Permutation parse_permutation(const std::string& text, uint32_t degree_hint) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(errc::parse_error, "empty permutation text");
  if (text[first] == '(') return parse_cycle_form(text, degree_hint);

  std::istringstream in(text);
  std::vector<uint32_t> images;
  long long v;
  while (in >> v) {
    if (v < 1) fail(errc::parse_error, "image entries are 1-based");
    images.push_back(static_cast<uint32_t>(v - 1));
  }
  if (!in.eof()) fail(errc::parse_error, "bad token in image line");
  if (degree_hint != 0 && images.size() != degree_hint)
    fail(errc::degree_mismatch, "image line has degree " + std::to_string(images.size()) +
                                    ", expected " + std::to_string(degree_hint));
  return Permutation(std::move(images));
}

} // namespace permstab
