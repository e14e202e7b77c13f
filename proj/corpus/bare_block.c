/* bare_block: an unstable test nested in a bare block.
   Scenario: x=[-0.5,0.5]~[-1e-7,1e-7] */

int f(float x) {
  float t = 0.0f;
  { t = x * 2.0f;
    if (x < 0)
      { t = t + 1.0f; }
  }
  return 0;
}

int main(float x) {
  int r = f(x);
  return r;
}
