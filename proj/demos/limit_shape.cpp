// One rescaled draw, its interlacing Young diagram, and the distance of the
// rotated profile from the limit curve.

#include <cstdio>

#include "hml/rng.hpp"
#include "hml/sampler.hpp"
#include "hml/sturm.hpp"
#include "hml/young.hpp"

int main() {
  const std::size_t n = 400;
  const double beta = 2.0;
  hml::rng::Stream s(11);

  const hml::TridiagonalMatrix y =
      hml::rescale(hml::sample_beta_hermite(n, beta, s), n, beta);
  const hml::Spectrum outer = hml::eigenvalues(y);
  const hml::Spectrum inner = hml::eigenvalues(hml::minor_of(y));
  const double slack = 10.0 * (outer.tol > inner.tol ? outer.tol : inner.tol);
  const hml::YoungDiagram d =
      hml::build_diagram(outer.values, inner.values, slack);

  std::printf("n=%zu beta=%g z0=%.6f\n", n, beta, d.z0());
  std::printf("%8s %10s %10s\n", "x", "w(x)", "omega(x)");
  for (double x = -2.5; x <= 2.5 + 1e-9; x += 0.5)
    std::printf("%8.2f %10.6f %10.6f\n", x, d.w(x), hml::vkls(x));
  std::printf("sup distance on [-3,3]: %.6f\n",
              hml::sup_distance(d, 1e-3, 3.0));
  return 0;
}
