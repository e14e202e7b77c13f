/* absorption: a tiny term added to one in single precision is absorbed.
   Scenario: y=[0,1e-8]~0 */

float main(float y) {
  float x = 1.0f;
  float z = x + y;
  /*@ assert accuracy_assert_ferr(z, -1.1e-8, 1e-9); */
  return z;
}
