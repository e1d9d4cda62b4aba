#include "permstab/word.hpp"

#include "permstab/error.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace permstab {

namespace {

void push_reduced(std::vector<int8_t>& letters, int8_t v) {
  if (!letters.empty() && letters.back() == -v)
    letters.pop_back();
  else
    letters.push_back(v);
}

} // namespace

FreeWord::FreeWord(std::vector<int8_t> letters) {
  letters_.reserve(letters.size());
  for (int8_t v : letters) {
    if (v == 0) fail(errc::invalid_argument, "0 is not a letter");
    push_reduced(letters_, v);
  }
}

FreeWord FreeWord::generator(unsigned index, int exponent) {
  if (index > 126) fail(errc::invalid_argument, "generator index out of range");
  FreeWord w;
  int8_t v = static_cast<int8_t>(exponent >= 0 ? index + 1 : -(static_cast<int>(index) + 1));
  for (int i = 0; i < std::abs(exponent); ++i) w.letters_.push_back(v);
  return w;
}

FreeWord FreeWord::operator*(const FreeWord& rhs) const {
  FreeWord out = *this;
  for (int8_t v : rhs.letters_) push_reduced(out.letters_, v);
  return out;
}

FreeWord FreeWord::inverse() const {
  FreeWord out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.letters_.push_back(static_cast<int8_t>(-*it));
  return out;
}

FreeWord FreeWord::power(int64_t e) const {
  FreeWord base = e < 0 ? inverse() : *this;
  FreeWord acc;
  for (int64_t i = 0, n = e < 0 ? -e : e; i < n; ++i) acc = acc * base;
  return acc;
}

std::string FreeWord::to_string() const {
  std::string out;
  out.reserve(letters_.size());
  for (int8_t v : letters_) {
    switch (v) {
      case 1: out += 'a'; break;
      case -1: out += 'A'; break;
      case 2: out += 'b'; break;
      case -2: out += 'B'; break;
      default: fail(errc::unsupported, "word uses generators beyond rank 2");
    }
  }
  return out;
}

FreeWord parse_word(const std::string& text) {
  std::vector<int8_t> letters;
  for (char c : text) {
    switch (c) {
      case 'a': letters.push_back(1); break;
      case 'A': letters.push_back(-1); break;
      case 'b': letters.push_back(2); break;
      case 'B': letters.push_back(-2); break;
      case ' ':
      case '\t':
      case '\r':
      case '\n': break;
      default:
        fail(errc::parse_error, std::string("bad word character '") + c + "'");
    }
  }
  return FreeWord(std::move(letters));
}

std::vector<FreeWord> ball(unsigned radius) {
  static constexpr int8_t kAlphabet[4] = {1, -1, 2, -2};
  std::vector<FreeWord> out;
  out.emplace_back();
  size_t level_begin = 0;
  for (unsigned len = 1; len <= radius; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i) {
      for (int8_t v : kAlphabet) {
        const auto& w = out[i].letters();
        if (!w.empty() && w.back() == -v) continue;
        std::vector<int8_t> next = w;
        next.push_back(v);
        FreeWord nw;
        nw = FreeWord(std::move(next));
        out.push_back(std::move(nw));
      }
    }
    level_begin = level_end;
  }
  return out;
}

BigInt ball_count(unsigned radius) {
  BigInt pow3 = 1;
  for (unsigned i = 0; i < radius; ++i) pow3 *= 3;
  return 1 + 2 * (pow3 - 1);
}

RelationSet::RelationSet(std::vector<FreeWord> relations) {
  std::unordered_set<FreeWord, FreeWordHash> seen;
  for (auto& r : relations)
    if (seen.insert(r).second) relations_.push_back(std::move(r));
}

RelationSet RelationSet::parse(const std::string& file_contents) {
  std::vector<FreeWord> rels;
  std::istringstream in(file_contents);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    rels.push_back(parse_word(line));
  }
  return RelationSet(std::move(rels));
}

uint64_t RelationSet::norm() const {
  uint64_t n = 0;
  for (const auto& r : relations_) n += r.length();
  return n;
}

} // namespace permstab
