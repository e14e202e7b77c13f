/* polynome: Horner evaluation of a cubic in single precision.
   Scenario: x=[0.9,1.1]~[-1e-7,1e-7] */

float main(float x) {
  float t = 0.5f;
  t = t * x - 1.25f;
  t = t * x + 2.0f;
  t = t * x - 0.75f;
  /*@ assert accuracy_assert_ferr(t, -1e-5, 1e-5); */
  return t;
}
