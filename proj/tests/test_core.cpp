#include "uwsc/core.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace uwsc;

int main() {
  uwsc_test::Suite suite;

  suite.add("distance_examples", [](uwsc_test::Runner& t) {
    t.check_close(distance(Vec3(0, 0, 0), Vec3(0, 0, 0)), 0.0, 0.0, "identity");
    t.check_close(distance(Vec3(0, 0, 0), Vec3(3, 4, 0)), 5.0, 1e-12, "pythagorean triple");
    t.check_close(distance(Vec3(1, 1, 1), Vec3(2, 3, 4)), std::sqrt(14.0), 1e-12, "hand norm");
  });

  suite.add("distance_is_a_metric", [](uwsc_test::Runner& t) {
    Rng rng(Seed{21});
    for (int i = 0; i < 1000; ++i) {
      const Vec3 a(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
      const Vec3 b(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
      const Vec3 c(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
      if (!t.check(distance(a, b) == distance(b, a), "symmetry")) return;
      if (!t.check(distance(a, a) == 0.0, "identity")) return;
      if (!t.check(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-12,
                   "triangle inequality")) {
        return;
      }
      if (!t.check(distance(a, b) >= 0.0, "non-negative")) return;
    }
  });

  suite.add("bearing_examples", [](uwsc_test::Runner& t) {
    t.check_close(bearing_in_plane(Vec3(0, 0, 0), Vec3(1, 0, 0)).degrees(), 0.0, 1e-12,
                  "reference axis");
    t.check_close(bearing_in_plane(Vec3(0, 0, 0), Vec3(0, 1, 0)).degrees(), 90.0, 1e-12,
                  "quarter turn");
    t.check_close(bearing_in_plane(Vec3(0, 0, 0), Vec3(-1, -1, 0)).degrees(), -135.0, 1e-12,
                  "third quadrant");
  });

  suite.add("bearing_reverse_differs_by_180", [](uwsc_test::Runner& t) {
    Rng rng(Seed{22});
    for (int i = 0; i < 500; ++i) {
      const Vec3 a(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
      const Vec3 b(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
      if (std::hypot(a.x() - b.x(), a.y() - b.y()) < 1e-6) continue;
      const double forward = bearing_in_plane(a, b).degrees();
      const double backward = bearing_in_plane(b, a).degrees();
      if (!t.check_close(angular_distance_deg(forward, backward), 180.0, 1e-9,
                         "opposite directions")) {
        return;
      }
    }
  });

  suite.add("bearing_degenerate_direction", [](uwsc_test::Runner& t) {
    t.check_throws(ErrorCode::DegenerateDirection,
                   [] { bearing_in_plane(Vec3(0, 0, 0), Vec3(0, 0, 1)); },
                   "vertical displacement has no planar bearing");
  });

  suite.add("bearing_normalization", [](uwsc_test::Runner& t) {
    t.check_close(Bearing::from_degrees(190.0).degrees(), -170.0, 1e-12, "wrap above");
    t.check_close(Bearing::from_degrees(-180.0).degrees(), 180.0, 1e-12, "-180 maps to +180");
    t.check_close(Bearing::from_degrees(180.0).degrees(), 180.0, 1e-12, "180 stays");
    t.check_close(Bearing::from_degrees(720.25).degrees(), 0.25, 1e-12, "multiple wraps");
    t.check_close(Bearing::from_degrees(-365.0).degrees(), -5.0, 1e-12, "negative wrap");
  });

  suite.add("rng_determinism", [](uwsc_test::Runner& t) {
    Rng a(Seed{1234});
    Rng b(Seed{1234});
    for (int i = 0; i < 100; ++i) {
      if (!t.check(a.next_u64() == b.next_u64(), "same seed, same stream")) return;
    }
    Rng c(Seed{1234});
    Rng d(Seed{1235});
    int differing = 0;
    for (int i = 0; i < 100; ++i) {
      if (c.next_u64() != d.next_u64()) ++differing;
    }
    t.check(differing > 90, "different seeds diverge");

    Rng base(Seed{7});
    Rng s0 = base.derive(0);
    Rng s1 = base.derive(1);
    Rng s0_again = base.derive(0);
    t.check(s0.next_u64() != s1.next_u64(), "substreams differ");
    Rng s0_ref = base.derive(0);
    t.check(s0_again.next_u64() == s0_ref.next_u64(), "derive is reproducible");
  });

  suite.add("rng_gaussian_moments", [](uwsc_test::Runner& t) {
    Rng rng(Seed{99});
    const int n = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gaussian(2.0);
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    t.check_close(mean, 0.0, 0.02, "mean near zero");
    t.check_close(std::sqrt(var), 2.0, 0.02, "sigma near 2");
  });

  suite.add("rng_uniform_bounds", [](uwsc_test::Runner& t) {
    Rng rng(Seed{5});
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform01();
      if (!t.check(u >= 0.0 && u < 1.0, "uniform01 in [0,1)")) return;
      const std::uint64_t k = rng.next_below(7);
      if (!t.check(k < 7, "next_below bound")) return;
    }
  });

  return suite.run();
}
