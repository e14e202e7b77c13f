/* delayed_merge: an integer set under an unstable test and read by a loop.
   Scenario: x=[-2,-1.6]~[-1e-7,1e-7] */

float main(float x) {
  int n;
  if (2 * x + 3 < 0) { n = 10; } else { n = 0; }
  while (n > 0) { x = x * 0.5f; n = n - 1; }
  return x;
}
