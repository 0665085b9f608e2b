#pragma once

#include <stdexcept>
#include <string>

namespace corral {

// A precondition of a mathematical operation failed (exit status 1 in the CLI).
struct DomainError : std::runtime_error {
  std::string code;
  DomainError(std::string c, const std::string& what) : std::runtime_error(what), code(std::move(c)) {}
};

// A search limit was reached before a certified answer (exit status 3).
struct BoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Tri { no, yes, unknown };

inline auto tri(bool b) -> Tri { return b ? Tri::yes : Tri::no; }

inline auto tri_and(Tri a, Tri b) -> Tri {
  if (a == Tri::no || b == Tri::no) return Tri::no;
  if (a == Tri::unknown || b == Tri::unknown) return Tri::unknown;
  return Tri::yes;
}

inline auto to_string(Tri t) -> std::string {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    default: return "unknown";
  }
}

}  // namespace corral
