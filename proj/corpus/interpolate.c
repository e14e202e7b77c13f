/* Linear interpolation in a four-entry table.
   The assertion bounds the error of the result by twice the largest step of
   the table times the input error, which fails near in = -1 where the
   truncation of in jumps between two table segments.
   Scenario mid-table: in=[0.5,0.5]~[-1e-9,1e-9]
   Scenario near -1: in=[-1.0000001,-0.9999999] */

double interpolate(double in, double y[4], int n) {
  double out;
  int index = (int) in;
  if (index < 0 || index >= n - 1)
    out = (index < 0) ? y[0] : y[n - 1];
  else
    out = y[index] + (in - index) * (y[index + 1] - y[index]);
  return out;
}

int main(double in) {
  double y[4] = {1.0, 2.0, 4.0, 7.0};
  double out = interpolate(in, y, 4);
  /*@ assert
        \let (err_min, err_max) = accuracy_get_derr(in);
        \let cst = 3.0;
        accuracy_assert_derr(out,
          2.0 * cst * \min(err_min, -err_max),
          2.0 * cst * \max(-err_min, err_max)); */
  return 0;
}
