#pragma once

#include <stdexcept>
#include <string>

namespace dendro {

// All library failures surface as this exception; `kind` is a short stable
// tag ("syntax", "bound", "argument", ...) used by the CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace dendro
