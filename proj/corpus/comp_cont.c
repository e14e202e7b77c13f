/* comp_cont: two branches that agree where the test switches.
   Scenario: x=[0.999,1.001]~[-1e-6,1e-6] */

double main(double x) {
  double z;
  if (x <= 1.0)
    z = x * x;
  else
    z = 2.0 * x - 1.0;
  /*@ assert accuracy_assert_derr(z, -1e-4, 1e-4); */
  return z;
}
