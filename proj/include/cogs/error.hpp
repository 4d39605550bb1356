#pragma once

#include <stdexcept>
#include <string>

namespace cogs {

// All validation failures carry a stable code (e.g. "NotAssociative") plus a
// human-readable detail naming the offending cell/element.
struct Error : std::runtime_error {
  std::string code;

  Error(std::string c, const std::string& detail)
      : std::runtime_error(c + ": " + detail), code(std::move(c)) {}
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
  throw Error(code, detail);
}

inline void require(bool cond, const std::string& code, const std::string& detail) {
  if (!cond) fail(code, detail);
}

}  // namespace cogs
