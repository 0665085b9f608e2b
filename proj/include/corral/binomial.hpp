#pragma once

// Pure-difference binomial ideals, i.e. completed commutative rewriting systems
// for finitely presented monoids.  Used to decide the word problem and
// cancellativity of presentations.

#include <optional>
#include <vector>

#include "corral/errors.hpp"
#include "corral/monoid.hpp"

namespace corral {

using Exponent = std::vector<long>;

struct Binomial {
  Exponent lead, tail;  // lead ≻ tail
};

class RewriteSystem {
 public:
  // Graded reverse lexicographic order; with `eliminate` set, that variable's
  // exponent is compared first.
  struct Order {
    std::optional<std::size_t> eliminate;
    [[nodiscard]] auto greater(const Exponent& a, const Exponent& b) const -> bool;
  };

  // Completion of the congruence generated by `rules`; nullopt when more than
  // `budget` rules or pair reductions would be needed.
  static auto complete(const std::vector<std::pair<Exponent, Exponent>>& rules, std::size_t nvars, Order order,
                       std::size_t budget) -> std::optional<RewriteSystem>;

  [[nodiscard]] auto normal_form(Exponent a) const -> Exponent;
  [[nodiscard]] auto equivalent(const Exponent& a, const Exponent& b) const -> bool;
  [[nodiscard]] auto rules() const -> const std::vector<Binomial>& { return rules_; }

 private:
  std::vector<Binomial> rules_;
  Order order_;
};

struct WordProblemOptions {
  std::size_t budget = 4000;
};

// Whether u ~ v in the presented monoid.
auto congruent(const MonoidPresentation& p, const IntVec& u, const IntVec& v, const WordProblemOptions& opts = {})
    -> Tri;

// Cancellativity (integrality) of the presented monoid.
auto presentation_integral(const MonoidPresentation& p, const WordProblemOptions& opts = {}) -> Tri;

// Whether the presented monoid has no nontrivial units.
auto presentation_sharp(const MonoidPresentation& p, const WordProblemOptions& opts = {}) -> Tri;

}  // namespace corral
