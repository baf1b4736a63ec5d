#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vlc/experiment.hpp"

using namespace vlc;

TEST_CASE("stepped range") {
  const auto r = stepped_range(-1.0, 1.0, 0.1);
  REQUIRE(r.size() == 21);
  CHECK(r.front() == -1.0);
  CHECK(r[10] == 0.0);
  CHECK(r.back() == 1.0);
  CHECK(stepped_range(0.3, 0.3, 0.1) == std::vector<double>{0.3});
}

TEST_CASE("user grid positions") {
  SweepConfig c;
  const auto xy = user_positions(c, -0.3, 0.1);
  REQUIRE(xy.size() == 16);
  CHECK(xy[0].x == doctest::Approx(-0.3));
  CHECK(xy[0].y == doctest::Approx(0.1));
  CHECK(xy[3].x == doctest::Approx(0.3));
  CHECK(xy[15].y == doctest::Approx(0.7));
  CHECK(xy[15].z == 2.0);
  c.plane = SweepPlane::YZ;
  c.fixed = 0.5;
  const auto yz = user_positions(c, 0.0, 1.0);
  CHECK(yz[5].x == 0.5);
  CHECK(yz[5].y == doctest::Approx(0.2));
  CHECK(yz[5].z == doctest::Approx(1.2));
}

TEST_CASE("map lookup and direct solve give the same rates") {
  const Workspace ws = make_workspace(SceneSpec::baseline());
  MapOptions mo;
  mo.use_symmetry = true;
  const DecodingMap m = build_map(ws.scene, ws.layers, 0, mo);
  SweepConfig c;
  const auto pos = user_positions(c, -0.1, 0.2);
  const auto a = make_users(ws, 0, pos, &m, 1);
  const auto b = make_users(ws, 0, pos, nullptr, 1);
  for (std::size_t j = 0; j < pos.size(); ++j) {
    // mirrored cells reuse the gains of their canonical twin, equal up to rounding
    REQUIRE(a[j].gains.size() == b[j].gains.size());
    for (std::size_t i = 0; i < b[j].gains.size(); ++i) {
      CHECK(a[j].gains[i] == doctest::Approx(b[j].gains[i]).epsilon(1e-12));
    }
    CHECK(a[j].order.outage == b[j].order.outage);
    auto ra = a[j].order.rates, rb = b[j].order.rates;
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    REQUIRE(ra.size() == rb.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
      if (std::isinf(rb[k])) {
        CHECK(std::isinf(ra[k]));
      } else {
        CHECK(ra[k] == doctest::Approx(rb[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("small sweep is thread independent and formatted") {
  const Workspace ws = make_workspace(SceneSpec::baseline());
  SweepConfig c;
  c.u_lo = 0.0;
  c.u_hi = 0.1;
  c.v_lo = 0.0;
  c.v_hi = 0.0;
  c.ga.generations = 20;
  c.threads = 1;
  const auto r1 = run_sweep_experiment(ws, c, nullptr);
  c.threads = 3;
  const auto r3 = run_sweep_experiment(ws, c, nullptr);
  std::ostringstream s1, s3;
  write_sweep_csv(s1, r1);
  write_sweep_csv(s3, r3);
  CHECK(s1.str() == s3.str());
  REQUIRE(r1.points.size() == 2);
  for (const auto& p : r1.points) {
    CHECK(p.converged);
    CHECK(p.sum_rate >= p.phase_one_sum - 1e-9);
  }
  const std::string text = s1.str();
  CHECK(text.rfind("plane,x,y,z,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}
