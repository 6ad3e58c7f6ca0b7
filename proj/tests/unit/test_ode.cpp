#include <doctest.h>

#include <cmath>
#include <vector>

#include "eitcav/errors.hpp"
#include "eitcav/ode.hpp"

using namespace eitcav;
using namespace eitcav::ode;

TEST_CASE("explicit pair on exponential decay and rotation") {
  Integrator in([](double, const double* y, double* dy) {
    dy[0] = -y[0];
    dy[1] = -y[2];
    dy[2] = y[1];
  }, 3);
  std::vector<double> y{1.0, 1.0, 0.0};
  double t = 0.0;
  in.advance(y, t, 5.0);
  CHECK(t == 5.0);
  CHECK(y[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-8));
  CHECK(y[1] == doctest::Approx(std::cos(5.0)).epsilon(1e-8));
  CHECK(y[2] == doctest::Approx(std::sin(5.0)).epsilon(1e-8));
  CHECK(in.method() == Method::kExplicit);
  CHECK_FALSE(in.stats().switched_to_rosenbrock);
}

TEST_CASE("Rosenbrock path is fourth order") {
  // Fixed steps via h_init = h_max and a loose tolerance so nothing is rejected.
  auto run = [](double h) {
    Options o;
    o.method = Method::kRosenbrock;
    o.h_init = o.h_max = h;
    o.rtol = o.atol = 1.0;
    Integrator in([](double, const double* y, double* dy) { dy[0] = -2.0 * y[0] + y[1]; dy[1] = -y[1] * y[1]; }, 2, o);
    std::vector<double> y{1.0, 1.0};
    double t = 0.0;
    in.advance(y, t, 1.0);
    return y;
  };
  // Exact: y1 = 1/(1+t); y0 from variation of constants, evaluated with a fine run.
  const auto ref = run(1e-4);
  const double e1 = std::abs(run(0.1)[0] - ref[0]);
  const double e2 = std::abs(run(0.05)[0] - ref[0]);
  CHECK(ref[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("stiff problem switches to the Rosenbrock path") {
  // Robertson chemical kinetics.
  Integrator in([](double, const double* y, double* dy) {
    dy[0] = -0.04 * y[0] + 1e4 * y[1] * y[2];
    dy[1] = 0.04 * y[0] - 1e4 * y[1] * y[2] - 3e7 * y[1] * y[1];
    dy[2] = 3e7 * y[1] * y[1];
  }, 3, Options{.rtol = 1e-8, .atol = 1e-14});
  std::vector<double> y{1.0, 0.0, 0.0};
  double t = 0.0;
  in.advance(y, t, 40.0);
  CHECK(in.stats().switched_to_rosenbrock);
  CHECK(in.stats().accepted < 20000);
  CHECK(y[0] == doctest::Approx(0.7158271).epsilon(1e-5));
  CHECK(y[0] + y[1] + y[2] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("weakly damped fast rotation counts as stiff") {
  // Slow forced decay plus a fast, nearly undamped oscillation that is never excited.
  Integrator in([](double, const double* y, double* dy) {
    dy[0] = -0.1 * y[0] + 1.0;
    dy[1] = -50.0 * y[1] - 3e4 * y[2] + y[0];
    dy[2] = 3e4 * y[1] - 50.0 * y[2];
  }, 3);
  std::vector<double> y{0.0, 0.0, 0.0};
  double t = 0.0;
  in.advance(y, t, 100.0);
  CHECK(in.stats().switched_to_rosenbrock);
  CHECK(y[0] == doctest::Approx(10.0 * (1 - std::exp(-10.0))).epsilon(1e-7));
}

TEST_CASE("step budget exhaustion reports the spectral radius") {
  Options o;
  o.max_steps = 50;
  o.method = Method::kExplicit;
  Integrator in([](double, const double* y, double* dy) { dy[0] = -1e3 * y[0]; }, 1, o);
  std::vector<double> y{1.0};
  double t = 0.0;
  try {
    in.advance(y, t, 1e3);
    FAIL("expected StiffnessError");
  } catch (const StiffnessError& e) {
    CHECK(e.spectral_radius() == doctest::Approx(1e3).epsilon(1e-3));
  }
}

TEST_CASE("spectral radius of a linear system") {
  const Rhs f = [](double, const double* y, double* dy) {
    dy[0] = -3.0 * y[0] + y[1];
    dy[1] = -7.0 * y[1];
  };
  CHECK(estimate_spectral_radius(f, 0.0, {1.0, 1.0}) == doctest::Approx(7.0).epsilon(1e-3));
}

TEST_CASE("argument checks") {
  Integrator in([](double, const double*, double* dy) { dy[0] = 0.0; }, 1);
  std::vector<double> y{1.0}, bad{1.0, 2.0};
  double t = 1.0;
  CHECK_THROWS_AS(in.advance(y, t, 0.5), PreconditionError);
  CHECK_THROWS_AS(in.advance(bad, t, 2.0), PreconditionError);
}
