/* triangle: sixteen times the squared area of a triangle from its sides.
   Scenario: a=[3,3.01]~0; b=[4,4.01]~0; c=[5,5.01]~0 */

double main(double a, double b, double c) {
  double p = a + b + c;
  double q = -a + b + c;
  double r = a - b + c;
  double s = a + b - c;
  double area16 = p * q * r * s;
  /*@ assert accuracy_assert_derr(area16, -1e-11, 1e-11); */
  return area16;
}
