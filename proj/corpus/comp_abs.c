/* comp_abs: absolute value through an unstable test at zero.
   Scenario: x=[-1e-6,1e-6]~[-1e-7,1e-7] */

double main(double x) {
  double z;
  if (x < 0.0)
    z = -x;
  else
    z = x;
  /*@ assert accuracy_assert_derr(z, -4e-7, 4e-7); */
  return z;
}
