/* comp_disc: a step function whose unstable test jumps by one half.
   Scenario: x=[0.4999,0.5001]~[-1e-6,1e-6] */

double main(double x) {
  double z;
  if (x < 0.5)
    z = 0.0;
  else
    z = 0.5;
  /*@ assert accuracy_assert_derr(z, -1e-3, 1e-3); */
  return z;
}
