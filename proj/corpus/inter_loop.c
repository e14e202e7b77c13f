/* inter_loop: table interpolation with the segment found by a loop.
   Scenario: x=[1.49,1.51]~[-1e-8,1e-8] */

double main(double x) {
  double xs[4] = {0.0, 1.0, 2.0, 3.0};
  double ys[4] = {0.0, 2.0, 3.0, 5.0};
  int i = 0;
  while (i < 2 && x >= xs[i + 1])
    i = i + 1;
  double res = ys[i] + (x - xs[i]) * (ys[i + 1] - ys[i]);
  /*@ assert accuracy_assert_derr(res, -1e-6, 1e-6); */
  return res;
}
