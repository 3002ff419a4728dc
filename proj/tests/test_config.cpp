#include <doctest.h>

#include "pdecrl/config.hpp"

#include <cstdio>
#include <fstream>
#include <string>

using namespace pdecrl;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& text) {
        path = std::string(std::tmpnam(nullptr)) + ".cfg";
        std::ofstream(path) << text;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("the small periodic preset carries the published settings") {
    ExperimentConfig c = preset_config("ks-L22");
    CHECK(c.env_type == "ks");
    CHECK(c.ks.length == 22.0);
    CHECK(c.sensors.count_x == 8);
    CHECK(c.sensors.s_axis == 1);
    CHECK(c.sensors.kernel.sigma == 0.8);
    CHECK(c.actor_hidden == std::vector<int>{6});
    CHECK(c.critic_hidden == std::vector<int>{140});
    CHECK(c.actuators.margin == 0);
    CHECK(c.domain_length() == 22.0);
}

TEST_CASE("the chemotaxis preset matches its published geometry") {
    ExperimentConfig c = preset_config("keller-segel");
    CHECK(c.env_components() == 2);
    CHECK(c.sensors.count_x == 40);
    CHECK(c.sensors.s_axis == 3);
    CHECK(c.delays == 1);
    CHECK(c.actuators.margin == 2);
    CHECK(c.actor_hidden == (std::vector<int>{20, 20}));
    // 12-dimensional agent input: 2 components x S=3 x 2 frames
    CHECK(c.env_components() * c.sensors.view_rows() * (1 + c.delays) == 12);
}

TEST_CASE("every preset validates end to end") {
    for (const std::string& name : preset_names()) CHECK_NOTHROW(preset_config(name).validate());
    CHECK_THROWS_AS(preset_config("nope"), std::invalid_argument);
}

TEST_CASE("config files layer overrides on a preset") {
    TempFile f("preset = ks-L22\n"
               "[training]\n"
               "seed = 9\n"
               "episodes = 3\n"
               "[reward]\n"
               "alpha = 0.2  # inline comment\n");
    ExperimentConfig c = parse_config(f.path);
    CHECK(c.seed == 9);
    CHECK(c.episodes == 3);
    CHECK(c.reward.alpha == 0.2);
    CHECK(c.ks.length == 22.0);
}

TEST_CASE("unknown keys are rejected with their line number") {
    TempFile f("preset = ks-L22\n[training]\nepisodez = 3\n");
    try {
        parse_config(f.path);
        FAIL("expected rejection");
    } catch (const std::exception& e) {
        std::string msg = e.what();
        CHECK(msg.find("episodez") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
}

TEST_CASE("duplicate keys and malformed lines are rejected") {
    TempFile dup("[training]\nseed = 1\nseed = 2\n");
    CHECK_THROWS(parse_config(dup.path));
    TempFile noeq("[training]\nseed 1\n");
    CHECK_THROWS(parse_config(noeq.path));
    TempFile stray("seed = 1\n");
    CHECK_THROWS(parse_config(stray.path));
    CHECK_THROWS(parse_config("/nonexistent/path.cfg"));
}

TEST_CASE("invariant violations surface at parse time") {
    TempFile even_s("preset = ks-L22\n[sensors]\nS = 2\n");
    CHECK_THROWS(parse_config(even_s.path));
    TempFile bad_gamma("preset = ks-L22\n[agent]\ngamma = 2.0\n");
    CHECK_THROWS(parse_config(bad_gamma.path));
    TempFile bad_num("preset = ks-L22\n[training]\nepisodes = many\n");
    CHECK_THROWS(parse_config(bad_num.path));
}

TEST_CASE("overrides re-validate and reject unknown keys") {
    ExperimentConfig c = preset_config("ks-L22");
    c = apply_overrides(std::move(c), {{"training.seed", "77"}, {"reward.alpha", "0.3"}});
    CHECK(c.seed == 77);
    CHECK(c.reward.alpha == 0.3);
    CHECK_THROWS(apply_overrides(preset_config("ks-L22"), {{"training.bogus", "1"}}));
    CHECK_THROWS(apply_overrides(preset_config("ks-L22"), {{"noseparator", "1"}}));
}

TEST_CASE("the echo contains a reproducible description") {
    ExperimentConfig c = preset_config("keller-segel");
    std::string e = c.echo();
    CHECK(e.find("type = keller-segel") != std::string::npos);
    CHECK(e.find("chi = ") != std::string::npos);
    CHECK(e.find("delay_stride = 20") != std::string::npos);
    CHECK(e.find("seed = 0") != std::string::npos);
}

TEST_CASE("resolve falls back from file to preset name") {
    ExperimentConfig c = resolve_config("turbulence-16");
    CHECK(c.env_type == "vorticity2d");
    CHECK(c.sensors.count_x == 16);
    CHECK_THROWS(resolve_config("not-a-preset-or-file"));
}

TEST_CASE("policy geometry derives from the config") {
    ExperimentConfig c = preset_config("ks-L200");
    PolicyGeometry g = c.geometry();
    CHECK(g.domain_per_sensor == doctest::Approx(2.5));
    CHECK(g.s_axis == 1);
    ExperimentConfig c5 = preset_config("ks-L500");
    CHECK(c5.geometry().domain_per_sensor == doctest::Approx(2.5));
    std::string why;
    CHECK(g.compatible(c5.geometry(), &why));
}
