#ifndef PERMSTAB_ERROR_HPP
#define PERMSTAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace permstab {

enum class errc {
  ok = 0,
  invalid_argument = 1,   // malformed input, precondition violation
  parse_error = 2,        // text/JSON input could not be parsed
  degree_mismatch = 3,    // permutations act on different domains
  cap_exceeded = 4,       // enumeration grew past the caller's cap
  horizon_insufficient = 5, // sequence spec too short to certify an answer
  unsupported = 6,        // parameters outside the supported range
  overflow = 7,           // value does not fit in 64 bits
  internal = 8,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace permstab

#endif
