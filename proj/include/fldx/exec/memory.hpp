#pragma once

#include "fldx/domain/abstract_float.hpp"
#include "fldx/frontend/ast.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fldx {

/// One scalar storage location. Integers are concrete; floating-point values
/// are abstract. A poisoned cell held different values on paths joined by a
/// merge that did not list it; reading it is an alarm.
struct Cell {
  enum class Tag { Uninit, Int, Float, Poison };
  Tag tag = Tag::Uninit;
  Rational i;
  AbstractFloat f;

  static Cell of_int(const Rational &v) { return {Tag::Int, v, {}}; }
  static Cell of_float(AbstractFloat v) { return {Tag::Float, {}, std::move(v)}; }
  bool same_as(const Cell &o) const;
};

/// Where an array parameter points: a variable of an outer frame, or a
/// global when frame is -1.
struct ArrayRef {
  int frame = -1;
  std::string name;
};

struct Variable {
  Type type;
  /// One cell for a scalar, the elements for an array.
  std::vector<Cell> cells;
  std::optional<ArrayRef> ref;
};

struct Frame {
  const Function *fn = nullptr;
  std::map<std::string, Variable> vars;
  std::optional<Cell> ret;
};

/// The state of one execution path: variables of every active frame, the
/// globals, and the ranges of the noise symbols narrowed on this path.
class Memory {
public:
  SymbolRanges ranges;
  std::map<std::string, Variable> globals;
  std::vector<Frame> frames;

  /// Resolves `name` in the innermost frame, then the globals, following
  /// array references. Returns nullptr when undeclared.
  Variable *find(const std::string &name);
  const Variable *find(const std::string &name) const;
  /// Frame index holding the storage of `name` (-1 for globals), after
  /// following references.
  ArrayRef locate(const std::string &name) const;

  /// Storage of a scalar or an array element. Throws DomainAlarm on an
  /// out-of-bounds index or an undeclared name.
  Cell &cell(const std::string &name, std::optional<long> index);

  /// Every abstract value in memory, for constraint propagation.
  std::vector<AbstractFloat *> floats();
};

/// A scalar in the interpreter: a concrete integer or an abstract float,
/// with the static scalar type it was computed at.
struct Value {
  Scalar type = Scalar::Int;
  Rational i;
  AbstractFloat f;

  bool is_float() const { return fldx::is_float(type); }
  static Value of_int(Scalar t, const Rational &v) { return {t, v, {}}; }
  static Value of_float(Scalar t, AbstractFloat v) { return {t, {}, std::move(v)}; }
};

} // namespace fldx
