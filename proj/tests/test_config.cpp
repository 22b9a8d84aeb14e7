#include <cmath>

#include "doctest.h"
#include "sifter/error.hpp"
#include "sifter/config.hpp"
#include "sifter/purifier.hpp"

using namespace sifter;

TEST_CASE("parse scalars, sections and comments") {
  const auto c = KeyValueConfig::parse(R"(# top
seed = 7
name = "a \"quoted\" \\ value"   # trailing comment
ratio = 0.1
big = -3e2
flag = true

[purifier]
binarize = "localdiff"
k_size = 21
)");
  CHECK(c.get_int("seed") == 7);
  CHECK(c.get_string("name") == std::string("a \"quoted\" \\ value"));
  CHECK(c.get_double("ratio") == 0.1);
  CHECK(c.get_double("big") == -300.0);
  CHECK(c.get_bool("flag") == true);
  CHECK(c.get_string("purifier.binarize") == std::string("localdiff"));
  CHECK(c.get_int("purifier.k_size") == 21);
  CHECK_FALSE(c.get_int("missing").has_value());
  CHECK(c.get_int("missing", 4) == 4);
  // Integers widen to doubles, nothing else converts.
  CHECK(c.get_double("seed") == 7.0);
  CHECK_THROWS_AS(c.get_int("ratio"), ConfigError);
  CHECK_THROWS_AS(c.get_string("seed"), ConfigError);
}

TEST_CASE("parse errors name the source and line") {
  auto message = [](const char* text) {
    try {
      KeyValueConfig::parse(text, "run.toml");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("a = 1\nb 2\n").find("run.toml:2") != std::string::npos);
  CHECK(message("a = \"open\n").find("run.toml:1") != std::string::npos);
  CHECK(message("[sec\n").find("run.toml:1") != std::string::npos);
  CHECK(message("a = 1\na = 2\n").find("run.toml:2") != std::string::npos);
  CHECK(message("a = what\n") != "no error");
}

TEST_CASE("to_text is canonical and round-trips") {
  KeyValueConfig c;
  c.set("zeta", std::int64_t{1});
  c.set("alpha", std::string("x\ny\t\"z\""));
  c.set("purifier.remove_time", std::int64_t{1000});
  c.set("purifier.binarize", std::string("global"));
  c.set("eval.ratio", 0.1);
  c.set("eval.inf", INFINITY);
  c.set("flag", false);
  c.set("whole", 2.0);
  const auto text = c.to_text();
  CHECK(KeyValueConfig::parse(text) == c);
  CHECK(KeyValueConfig::parse(text).to_text() == text);
  CHECK(text.find("alpha") < text.find("[eval]"));
  CHECK(text.find("[eval]") < text.find("[purifier]"));
  CHECK(KeyValueConfig::parse(text).get_double("whole") == 2.0);
}

TEST_CASE("merge overrides key by key") {
  auto base = KeyValueConfig::parse("a = 1\nb = 2\n");
  base.merge(KeyValueConfig::parse("b = 3\nc = 4\n"));
  CHECK(base.get_int("a") == 1);
  CHECK(base.get_int("b") == 3);
  CHECK(base.get_int("c") == 4);
}

TEST_CASE("PurifierConfig round-trips through key/value form") {
  PurifierConfig p;
  p.binarization = Binarization::local_diff(15);
  p.remove_time = 321;
  p.seed = 99;
  p.seeds_per_class = 5;
  p.scramble = true;
  p.scramble_seed = 4;
  p.update_order = UpdateOrder::kWithReplacement;
  const auto kv = p.to_config();
  CHECK(PurifierConfig::from_config(kv, PurifierConfig{}) == p);
  CHECK(PurifierConfig::from_config(KeyValueConfig::parse(kv.to_text()), PurifierConfig{}) == p);

  const auto partial = KeyValueConfig::parse("[purifier]\nremove_time = 5\n");
  auto merged = PurifierConfig::from_config(partial, p);
  CHECK(merged.remove_time == 5);
  CHECK(merged.binarization == p.binarization);

  CHECK_THROWS_AS(PurifierConfig::from_config(KeyValueConfig::parse("[purifier]\nbinarize = \"otsu\"\n"), p),
                  ConfigError);
  CHECK_THROWS_AS(
      PurifierConfig::from_config(KeyValueConfig::parse("[purifier]\nremove_time = -1\n"), p),
      ConfigError);
}

TEST_CASE("PurifierConfig defaults and validation") {
  const auto mnist = PurifierConfig::defaults_for(28, 28, 1);
  CHECK(mnist.binarization.mode == Binarization::Mode::kGlobal);
  CHECK(mnist.remove_time == 1000);
  const auto cifar = PurifierConfig::defaults_for(32, 32, 3);
  CHECK(cifar.binarization == Binarization::local_diff(21));
  CHECK(cifar.remove_time == 200);
  CHECK(cifar.seeds_per_class == 3);

  PurifierConfig bad;
  bad.binarization = Binarization::local_diff(4);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = PurifierConfig{};
  bad.seeds_per_class = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = PurifierConfig{};
  bad.binarization.threshold = 256;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(PurifierConfig{}.validate());
}
