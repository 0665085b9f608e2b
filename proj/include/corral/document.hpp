#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "corral/bcotangent.hpp"
#include "corral/lattice.hpp"
#include "corral/monoid.hpp"
#include "corral/transverse.hpp"

namespace corral {

// Diagnostic with a 1-based source position (exit status 2 in the CLI).
struct ParseError : std::runtime_error {
  std::size_t line = 0, column = 0;
  ParseError(const std::string& what, std::size_t l, std::size_t c)
      : std::runtime_error(what), line(l), column(c) {}
};

struct NamedPresentation {
  std::string name;
  MonoidPresentation presentation;
  friend auto operator==(const NamedPresentation&, const NamedPresentation&) -> bool = default;
};

struct NamedAffine {
  std::string name;
  AffineMonoid monoid;  // provenance is not part of the document
  friend auto operator==(const NamedAffine& a, const NamedAffine& b) -> bool {
    return a.name == b.name && a.monoid.ambient.free_rank == b.monoid.ambient.free_rank &&
           a.monoid.ambient.torsion == b.monoid.ambient.torsion && a.monoid.gens == b.monoid.gens &&
           a.monoid.labels == b.monoid.labels;
  }
};

// Binomial relations in multiplicative notation: Π x^u = Π x^v.
struct NamedModel {
  std::string name;
  std::vector<std::string> gens;
  std::vector<std::pair<IntVec, IntVec>> relations;
  [[nodiscard]] auto presentation() const -> MonoidPresentation { return MonoidPresentation{gens, relations}; }
  friend auto operator==(const NamedModel&, const NamedModel&) -> bool = default;
};

// One side of a germ pair: its monoid by a presentation, the number of free
// ℝ directions and, for the left and right sides, the images of the target's
// generators as ℕ-combinations of its own generators plus the b-Jacobian.
struct GermSideDoc {
  std::string name;
  MonoidPresentation presentation;
  std::size_t free_rank = 0;
  std::vector<IntVec> map;
  RatMatrix jacobian;
  friend auto operator==(const GermSideDoc&, const GermSideDoc&) -> bool = default;
};

struct GermPairDoc {
  std::string name;
  GermSideDoc target, left, right;
  [[nodiscard]] auto germs() const -> std::pair<GermMap, GermMap>;
  friend auto operator==(const GermPairDoc&, const GermPairDoc&) -> bool = default;
};

struct PointDoc {
  std::string name;
  std::vector<std::pair<std::string, double>> values;
  [[nodiscard]] auto resolve(const std::vector<std::string>& real, const std::vector<std::string>& interior) const
      -> RPoint;
  friend auto operator==(const PointDoc&, const PointDoc&) -> bool = default;
};

using DocumentPayload =
    std::variant<NamedPresentation, NamedAffine, NamedModel, GermPairDoc, CRingPresentation, PointDoc, CRingMorphism>;

struct Document {
  DocumentPayload payload;
  [[nodiscard]] auto kind() const -> std::string;
  [[nodiscard]] auto name() const -> std::string;
  friend auto operator==(const Document&, const Document&) -> bool = default;
};

// Documents in file order.  Morphisms refer to rings declared earlier.
auto parse_documents(const std::string& text) -> std::vector<Document>;
auto print_documents(const std::vector<Document>& docs) -> std::string;

// JSON form: {"format": 1, "documents": [...]}; expressions are strings in
// the text grammar.
auto parse_documents_json(const std::string& text) -> std::vector<Document>;
auto print_documents_json(const std::vector<Document>& docs) -> std::string;

// Dispatches on a leading '{'.
auto parse_any(const std::string& text) -> std::vector<Document>;

auto print_expr(const SmoothExpr& e, const std::vector<std::string>& real, const std::vector<std::string>& interior)
    -> std::string;
auto print_interior(const InteriorExpr& e, const std::vector<std::string>& real,
                    const std::vector<std::string>& interior) -> std::string;
auto parse_expr(const std::string& text, const std::vector<std::string>& real,
                const std::vector<std::string>& interior) -> SmoothExpr;
auto parse_interior(const std::string& text, const std::vector<std::string>& real,
                    const std::vector<std::string>& interior) -> InteriorExpr;

}  // namespace corral
