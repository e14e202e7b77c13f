#include "doctest.h"

#include "fldx/driver/pipeline.hpp"
#include "fldx/oracle/soundness.hpp"

#include <fstream>
#include <sstream>

using namespace fldx;

namespace {

Rational q(const char *s) { return Rational::parse(s); }

std::string corpus_file(const std::string &name) {
  std::ifstream in(std::string(FLDX_CORPUS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DrawFn no_draws = [](std::size_t, Scalar, const RInterval &r, const RInterval &) {
  return ConcreteInput{r.lo(), r.lo()};
};

} // namespace

TEST_CASE("interpolation near -1: the machine and real runs take different table segments") {
  Prepared p = prepare(corpus_file("interpolate.c"));
  // Machine value -1 truncates to -1; the real value just above it truncates to 0.
  ShadowRun r = run_shadow(p.program, p.info, {{"in", {q("-1"), q("-0.99999999")}}}, no_draws);
  REQUIRE(r.error.empty());
  REQUIRE(r.visits.size() == 1);
  CHECK(!r.visits[0].agreed);
  const ShadowValue &out = r.visits[0].values.at("out");
  CHECK(out.machine == Rational(1));
  CHECK(out.real == q("0.00000001"));
}
