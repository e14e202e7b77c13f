/* division: a quotient of two inexact operands.
   Scenario: x=[1,2]~[-1e-17,1e-17]; y=[3,4]~0 */

double main(double x, double y) {
  double z1 = x / y;
  double z2 = z1 / 3.0;
  /*@ assert accuracy_assert_derr(z2, -1e-16, 1e-16); */
  return z2;
}
