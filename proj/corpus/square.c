/* square: x - x*x on the unit interval, where correlation matters.
   Scenario: x=[0,1]~0 */

double main(double x) {
  double sq = x * x;
  double d = x - sq;
  /*@ assert accuracy_assert_derr(d, -1e-15, 1e-15); */
  return d;
}
