#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vlc/error.hpp"
#include "vlc/scene_config.hpp"

using namespace vlc;

namespace {

SceneSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scene_spec(in);
}

}  // namespace

TEST_CASE("shipped configs parse") {
  for (const char* name : {"baseline_4x4.cfg", "corner_2x2.cfg", "pair_1x2.cfg"}) {
    CAPTURE(name);
    const SceneSpec s = load_scene_spec(std::string(VLC_CONFIG_DIR) + "/" + name);
    CHECK_NOTHROW(build_scene(s));
  }
  SceneSpec p = load_scene_spec(std::string(VLC_CONFIG_DIR) + "/baseline_4x4.cfg");
  // cos 60 deg is not exactly 1/2 in binary
  CHECK(p.optics.lambertian_order == doctest::Approx(1.0).epsilon(1e-14));
  p.optics.lambertian_order = SceneSpec::baseline().optics.lambertian_order;
  CHECK(to_text(p) == to_text(SceneSpec::baseline()));
}

TEST_CASE("text form round trip") {
  SceneSpec s = SceneSpec::baseline();
  s.spacing_h = 0.1 + 0.2;  // not exactly representable in short decimal
  s.snr_db = 13.25;
  s.position_colors = {0, 2};
  const SceneSpec back = parse(to_text(s));
  CHECK(to_text(back) == to_text(s));
  CHECK(back.spacing_h == s.spacing_h);
  CHECK(scene_hash(back) == scene_hash(s));
  s.snr_db = 13.5;
  CHECK(scene_hash(back) != scene_hash(s));
}

TEST_CASE("parser") {
  const SceneSpec s = parse(
      "# comment\n"
      "tx.cols = 2   # trailing\n"
      "tx.spacing = 0.5, 0.4\n"
      "color.bands = 400:450, 500:600\n"
      "color.leakage = 0.1, 0.2\n"
      "tx.colors = 2\n"
      "snr.ref_filter = 2\n");
  CHECK(s.cols == 2);
  CHECK(s.spacing_h == 0.5);
  CHECK(s.spacing_v == 0.4);
  REQUIRE(s.bands.size() == 2);
  CHECK(s.bands[1].lo_nm == 500);
  CHECK(s.filters.size() == 2);  // follow the bands when not given
  CHECK(s.position_colors == std::vector<std::size_t>{1});
  CHECK(s.snr_ref_filter == 1);

  CHECK_THROWS_AS(parse("nope = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("tx.cols\n"), ConfigError);
  CHECK_THROWS_AS(parse("tx.cols = x\n"), ConfigError);
  CHECK_THROWS_AS(parse("tx.colors = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("color.bands = 1-2\n"), ConfigError);
  try {
    parse("\n\ntx.rows = -1\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("scene geometry") {
  const Scene s = build_scene(SceneSpec::baseline());
  CHECK(s.transmitter_count() == 64);
  CHECK(s.grid.nx == 27);
  CHECK(s.grid.ny == 27);
  CHECK(s.world_offset.x == doctest::Approx(0.3));
  CHECK(s.world_offset.y == doctest::Approx(0.3));
  // First cell at the world origin, colours in wavelength order.
  CHECK(s.to_world(s.transmitters[0].position).x == doctest::Approx(0.0));
  CHECK(s.to_world(s.transmitters[0].position).y == doctest::Approx(0.0));
  for (std::size_t c = 0; c < 4; ++c) CHECK(s.transmitters[c].color == c);
  CHECK(s.transmitters[s.transmitter_at(3, 3, 0)].array_col == 3);

  // A h / sigma = 15 dB on the reference link
  const SceneSpec spec = SceneSpec::baseline();
  const double h = reference_gain(s, spec);
  CHECK(20 * std::log10(h / s.noise_sigma) == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(calibrate_noise(2.0, 1.0, 20.0) == doctest::Approx(0.2));

  SceneSpec fixed = spec;
  fixed.noise_sigma = 0.25;
  CHECK(build_scene(fixed).noise_sigma == 0.25);

  SceneSpec bad = spec;
  bad.sampling = 0.07;
  CHECK_THROWS_AS(build_scene(bad), ConfigError);
  bad = spec;
  bad.snr_ref_tx = 64;
  CHECK_THROWS_AS(build_scene(bad), ConfigError);
}
