/* associativity: two groupings of the same sum differ by rounding.
   Scenario: a=[1,2]~0; b=[1e-3,2e-3]~0; c=[-1,-0.5]~0 */

double main(double a, double b, double c) {
  double left = (a + b) + c;
  double right = a + (b + c);
  double u = left - right;
  /*@ assert accuracy_assert_derr(u, -1e-15, 1e-15); */
  return u;
}
