/* relative: a product chain checked by its relative error.
   Scenario: a=[10,20]~[-1e-12,1e-12]; b=[0.5,0.75]~0 */

double main(double a, double b) {
  double p = a * b;
  double z = p * p + a;
  /*@ assert accuracy_assert_drelerr(z, -1e-12, 1e-12); */
  return z;
}
