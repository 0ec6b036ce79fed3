// Monte Carlo means of the trace difference D_{n,k} against the exact
// finite-n expectation and the n -> infinity limit.

#include <cstdio>

#include "hml/combinatorics.hpp"
#include "hml/rng.hpp"
#include "hml/sampler.hpp"
#include "hml/trace.hpp"

int main() {
  const std::size_t n = 200;
  const double beta = 2.0;
  const std::size_t reps = 2000;
  const hml::rng::Stream root(7);

  std::printf("n=%zu beta=%g reps=%zu\n", n, beta, reps);
  std::printf("%3s %12s %12s %12s\n", "k", "mc mean", "exact mean", "limit");
  for (int k = 1; k <= 6; ++k) {
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      hml::rng::Stream s = root.substream(r);
      const hml::TridiagonalMatrix y =
          hml::rescale(hml::sample_beta_hermite(n, beta, s), n, beta);
      sum += hml::trace_diff(y, k).value;
    }
    const double limit =
        (k % 2 == 0) ? hml::u128_to_double(hml::binomial_u128(k, k / 2))
                     : 0.0;
    std::printf("%3d %12.6f %12.6f %12.6f\n", k, sum / double(reps),
                hml::expected_trace_diff(n, k, beta), limit);
  }
  return 0;
}
