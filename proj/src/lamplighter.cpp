#include "permstab/lamplighter.hpp"

#include "permstab/error.hpp"

#include <algorithm>
#include <sstream>

namespace permstab {

namespace {

uint8_t mod3(int64_t v) {
  int64_t r = v % 3;
  if (r < 0) r += 3;
  return static_cast<uint8_t>(r);
}

// Centered residue of x modulo 2m+1, in [-m, m].
int64_t centered_mod(int64_t x, int64_t m) {
  int64_t w = 2 * m + 1;
  int64_t r = x % w;
  if (r > m) r -= w;
  if (r < -m) r += w;
  return r;
}

// Shared printer: the element equals a^shift times the product of
// b_i^{f(i)} for f = the configuration translated by -shift, because
// a^shift b_i a^-shift = b_{i+shift}. Printing f gives a literal product.
std::string format_product(int64_t shift,
                           const std::vector<std::pair<int64_t, uint8_t>>& translated) {
  std::ostringstream out;
  out << "a^" << shift;
  for (const auto& [pos, val] : translated)
    out << " · b_" << pos << "^" << int(val);
  return out.str();
}

} // namespace

LamplighterElement LamplighterElement::shift_gen() { return shift_power(1); }

LamplighterElement LamplighterElement::shift_power(int64_t k) {
  LamplighterElement g;
  g.shift_ = k;
  return g;
}

LamplighterElement LamplighterElement::lamp(int64_t pos, int exponent) {
  LamplighterElement g;
  uint8_t e = mod3(exponent);
  if (e != 0) g.lamps_[pos] = e;
  return g;
}

LamplighterElement LamplighterElement::operator*(const LamplighterElement& rhs) const {
  LamplighterElement out;
  out.lamps_ = lamps_;
  for (const auto& [pos, val] : rhs.lamps_) {
    int64_t p = pos + shift_; // (k.g)(i) = g(i - k)
    uint8_t e = mod3(int64_t(out.lamps_.count(p) ? out.lamps_[p] : 0) + val);
    if (e == 0)
      out.lamps_.erase(p);
    else
      out.lamps_[p] = e;
  }
  out.shift_ = shift_ + rhs.shift_;
  return out;
}

LamplighterElement LamplighterElement::inverse() const {
  LamplighterElement out;
  for (const auto& [pos, val] : lamps_)
    out.lamps_[pos - shift_] = mod3(-int64_t(val));
  out.shift_ = -shift_;
  return out;
}

std::string LamplighterElement::to_string() const {
  std::vector<std::pair<int64_t, uint8_t>> translated;
  for (const auto& [pos, val] : lamps_)
    translated.emplace_back(pos - shift_, val);
  return format_product(shift_, translated);
}

LamplighterElement parse_lamplighter(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  if (!(in >> tok) || tok.rfind("a^", 0) != 0)
    fail(errc::parse_error, "lamplighter element must start with a^<shift>: '" + text + "'");
  LamplighterElement result;
  try {
    result = LamplighterElement::shift_power(std::stoll(tok.substr(2)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(errc::parse_error, "bad shift exponent in '" + text + "'");
  }
  int64_t last_pos = 0;
  bool seen_lamp = false;
  while (in >> tok) {
    if (tok == "·" || tok == "*") continue;
    if (tok.rfind("b_", 0) != 0)
      fail(errc::parse_error, "expected lamp factor b_<i>^<e>, got '" + tok + "'");
    size_t caret = tok.find('^');
    if (caret == std::string::npos)
      fail(errc::parse_error, "lamp factor missing exponent: '" + tok + "'");
    int64_t pos;
    int64_t exp;
    try {
      pos = std::stoll(tok.substr(2, caret - 2));
      exp = std::stoll(tok.substr(caret + 1));
    } catch (const std::exception&) {
      fail(errc::parse_error, "bad lamp factor '" + tok + "'");
    }
    if (seen_lamp && pos <= last_pos)
      fail(errc::parse_error, "lamp positions must be strictly increasing");
    seen_lamp = true;
    last_pos = pos;
    result = result * LamplighterElement::lamp(pos, int(exp));
  }
  return result;
}

LamplighterElement evaluate_in_w(const FreeWord& word) {
  LamplighterElement a = LamplighterElement::shift_gen();
  LamplighterElement b = LamplighterElement::lamp(0, 1);
  return word.evaluate(
      LamplighterElement(), std::vector<LamplighterElement>{a, b},
      [](const LamplighterElement& s, const LamplighterElement& t) { return s * t; },
      [](const LamplighterElement& g) { return g.inverse(); });
}

FiniteLamplighterElement::FiniteLamplighterElement(int64_t m) : m_(m) {
  if (m < 0) fail(errc::invalid_argument, "window parameter m must be >= 0");
  lamps_.assign(static_cast<size_t>(2 * m + 1), 0);
}

size_t FiniteLamplighterElement::index_of(int64_t residue) const {
  return static_cast<size_t>(centered_mod(residue, m_) + m_);
}

FiniteLamplighterElement
FiniteLamplighterElement::operator*(const FiniteLamplighterElement& rhs) const {
  if (m_ != rhs.m_)
    fail(errc::degree_mismatch, "finite lamplighter elements live in different quotients");
  FiniteLamplighterElement out(m_);
  out.lamps_ = lamps_;
  for (int64_t i = -m_; i <= m_; ++i) {
    uint8_t v = rhs.lamps_[rhs.index_of(i)];
    if (v == 0) continue;
    size_t idx = index_of(i + shift_);
    out.lamps_[idx] = mod3(int64_t(out.lamps_[idx]) + v);
  }
  out.shift_ = centered_mod(shift_ + rhs.shift_, m_);
  return out;
}

FiniteLamplighterElement FiniteLamplighterElement::inverse() const {
  FiniteLamplighterElement out(m_);
  for (int64_t i = -m_; i <= m_; ++i) {
    uint8_t v = lamps_[index_of(i)];
    if (v != 0) out.lamps_[out.index_of(i - shift_)] = mod3(-int64_t(v));
  }
  out.shift_ = centered_mod(-shift_, m_);
  return out;
}

bool FiniteLamplighterElement::is_identity() const {
  if (shift_ != 0) return false;
  for (uint8_t v : lamps_)
    if (v != 0) return false;
  return true;
}

std::string FiniteLamplighterElement::to_string() const {
  std::vector<std::pair<int64_t, uint8_t>> translated;
  for (int64_t i = -m_; i <= m_; ++i) {
    uint8_t v = lamps_[index_of(i)];
    if (v != 0) translated.emplace_back(centered_mod(i - shift_, m_), v);
  }
  std::sort(translated.begin(), translated.end());
  std::ostringstream out;
  out << format_product(shift_, translated) << " (mod " << window() << ")";
  return out.str();
}

FiniteLamplighterElement project_finite(const LamplighterElement& g, int64_t m) {
  FiniteLamplighterElement out(m);
  for (const auto& [pos, val] : g.lamps()) {
    size_t idx = out.index_of(pos);
    out.lamps_[idx] = mod3(int64_t(out.lamps_[idx]) + val);
  }
  out.shift_ = centered_mod(g.shift(), m);
  return out;
}

FiniteLamplighterElement evaluate_in_wm(const FreeWord& word, int64_t m) {
  FiniteLamplighterElement a = project_finite(LamplighterElement::shift_gen(), m);
  FiniteLamplighterElement b = project_finite(LamplighterElement::lamp(0, 1), m);
  return word.evaluate(
      FiniteLamplighterElement(m), std::vector<FiniteLamplighterElement>{a, b},
      [](const FiniteLamplighterElement& s, const FiniteLamplighterElement& t) { return s * t; },
      [](const FiniteLamplighterElement& g) { return g.inverse(); });
}

std::vector<FiniteLamplighterElement> enumerate_wm(int64_t m, uint64_t cap) {
  int64_t w = 2 * m + 1;
  // |W_m| = (2m+1) * 3^(2m+1); guard before materializing.
  uint64_t size = static_cast<uint64_t>(w);
  for (int64_t i = 0; i < w; ++i) {
    if (size > cap / 3 + 1) fail(errc::cap_exceeded, "finite lamplighter quotient too large");
    size *= 3;
  }
  if (size > cap) fail(errc::cap_exceeded, "finite lamplighter quotient too large");

  std::vector<FiniteLamplighterElement> out;
  out.reserve(size);
  FiniteLamplighterElement g(m);
  for (int64_t s = -m; s <= m; ++s) {
    g.shift_ = s;
    std::fill(g.lamps_.begin(), g.lamps_.end(), 0);
    while (true) {
      out.push_back(g);
      size_t i = 0;
      for (; i < g.lamps_.size(); ++i) {
        if (g.lamps_[i] < 2) {
          ++g.lamps_[i];
          break;
        }
        g.lamps_[i] = 0;
      }
      if (i == g.lamps_.size()) break;
    }
  }
  return out;
}

} // namespace permstab
