/* patriot: a clock kept by adding a tenth of a second in single precision.
   Scenario: ticks=300 */

float main(int ticks) {
  float t = 0.0f;
  int i = 0;
  while (i < ticks) {
    t = t + 0.1f;
    i = i + 1;
  }
  /*@ assert accuracy_assert_ferr(t, -1e-3, 1e-3); */
  return t;
}
