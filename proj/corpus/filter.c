/* filter: a second order linear filter run for a few steps.
   Scenario: e=[0.9,1.1]~[-1e-15,1e-15] */

double main(double e) {
  double s0 = 0.0;
  double s1 = 0.0;
  double s = 0.0;
  int i = 0;
  while (i < 8) {
    s = 0.7 * e - 1.3 * e + 1.4 * s0 - 0.7 * s1;
    s1 = s0;
    s0 = s;
    i = i + 1;
  }
  /*@ assert accuracy_assert_derr(s, -1e-13, 1e-13); */
  return s;
}
