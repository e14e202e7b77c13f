/* comp_disc_nested: nested unstable tests with a jump of one tenth.
   Scenario: x=[0.2999,0.3001]~[-1e-6,1e-6]; y=[0.5,0.6]~0 */

double main(double x, double y) {
  double z = 0.0;
  if (y > 0.25) {
    if (x < 0.3)
      z = y;
    else
      z = y + 0.1;
  }
  /*@ assert accuracy_assert_derr(z, -1e-3, 1e-3); */
  return z;
}
