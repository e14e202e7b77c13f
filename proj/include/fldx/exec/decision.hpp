#pragma once

#include "fldx/domain/abstract_float.hpp"
#include "fldx/frontend/ast.hpp"

#include <string>
#include <vector>

namespace fldx {

/// Which executions a path follows. After a test whose float and real
/// outcomes diverge, a path follows only one of them until its section merges.
enum class Mode { Both, FloatOnly, RealOnly };

/// How execution continues after a divergent test: along the branch taken by
/// the machine value or along the branch taken by the real value.
enum class Interp { Stable, AsFloat, AsReal };

/// One execution flow at a test. For a comparison cf and cr are the outcomes
/// under floating-point and real evaluation; for a cast kf and kr are the
/// integers produced by the machine and the real value.
struct Flow {
  bool cf = true;
  bool cr = true;
  Interp interp = Interp::Stable;
  long kf = 0;
  long kr = 0;

  /// The branch control follows.
  bool branch() const { return interp == Interp::AsReal ? cr : cf; }
  /// The integer a cast produces.
  long value() const { return interp == Interp::AsReal ? kr : kf; }
  bool diverges() const { return interp != Interp::Stable; }
  std::string str(bool is_cast) const;
};

/// Mode after taking `f` in mode `m`.
Mode next_mode(Mode m, const Flow &f);

BinOp negate_comparison(BinOp op);

/// Candidate flows of a comparison, in exploration order: in mode Both the
/// two stable flows then the four divergent ones; otherwise the two outcomes
/// of the followed side.
std::vector<Flow> compare_flows(Mode m);

/// Restricts the state to flow `f` of `a op b`: propagates the float-side and
/// real-side constraints onto the noise symbols, substitutes them into every
/// value of `env` (which should include a and b), and narrows the intervals
/// of a and b. Throws InfeasiblePath when the flow is impossible.
void apply_compare(const Flow &f, BinOp op, AbstractFloat &a, AbstractFloat &b, const std::vector<AbstractFloat *> &env,
                   Mode m, DomainContext &ctx);

/// Candidate (kf, kr) pairs of a truncating cast of `x` to `target`, before
/// feasibility checks. Throws DomainAlarm when the machine value may fall
/// outside the target range or spans too many integers.
std::vector<Flow> cast_flows(const AbstractFloat &x, Scalar target, Mode m, const SymbolRanges &ranges);

/// Restricts the state to the preimage of flow `f` of a cast of `x`.
void apply_cast(const Flow &f, AbstractFloat &x, const std::vector<AbstractFloat *> &env, Mode m, DomainContext &ctx);

/// A local decision recorded by an explorer: the test site, its feasible
/// flows, and the one taken on the current path.
struct Decision {
  int site = -1;
  std::vector<Flow> options;
  std::size_t choice = 0;
};

/// Depth-first enumeration of the decision sequences of one section.
class PathExplorer {
public:
  explicit PathExplorer(int section) : section_(section) {}

  int section() const { return section_; }
  /// True while the current path is replaying recorded decisions.
  bool replaying() const { return cursor_ < trace_.size(); }
  /// Takes the recorded decision at the cursor. Throws std::logic_error if
  /// the site differs from the recorded one.
  const Decision &replay(int site);
  /// Records a new decision taking its first option.
  const Decision &record(int site, std::vector<Flow> options);
  /// Advances to the next path: the deepest decision with an untried option
  /// moves to it and deeper decisions are dropped. False when exhausted.
  bool next_path();
  /// Decisions of the current path so far.
  std::vector<Decision> taken() const { return {trace_.begin(), trace_.begin() + static_cast<long>(cursor_)}; }
  std::size_t depth() const { return cursor_; }

private:
  int section_;
  std::vector<Decision> trace_;
  std::size_t cursor_ = 0;
};

} // namespace fldx
