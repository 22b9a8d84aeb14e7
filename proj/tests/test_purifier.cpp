#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "sifter/attacks.hpp"
#include "sifter/capacity.hpp"
#include "sifter/error.hpp"
#include "sifter/eval.hpp"
#include "sifter/purifier.hpp"

using namespace sifter;

namespace {

Image random_image(int w, int h, int c, Rng& rng) {
  std::vector<GrayImage> planes;
  for (int i = 0; i < c; ++i) planes.push_back(oracle::random_gray(w, h, rng));
  return Image(std::move(planes));
}

SeedDataset random_seeds(int classes, int per_class, int w, int h, int c, std::uint64_t seed) {
  Rng rng(seed);
  SeedDataset ds;
  ds.class_count = classes;
  for (int i = 0; i < classes * per_class; ++i) {
    ds.items.push_back({random_image(w, h, c, rng), i % classes});
  }
  return ds;
}

PurifierConfig global_config(std::uint64_t remove_time, std::uint64_t seed = 1) {
  PurifierConfig c;
  c.binarization = Binarization::global();
  c.remove_time = remove_time;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("select_seeds stratifies by class") {
  const auto ds = random_seeds(10, 5, 4, 4, 1, 1);
  const auto picked = select_seeds(ds, 3, 7);
  CHECK(picked.size() == 30);
  CHECK(picked.class_histogram() == std::vector<std::size_t>(10, 3));
  for (std::size_t i = 1; i < picked.size(); ++i) {
    CHECK(picked.items[i - 1].label <= picked.items[i].label);
  }
  CHECK(select_seeds(ds, 3, 7).items.size() == picked.items.size());
  for (std::size_t i = 0; i < picked.size(); ++i) {
    CHECK(select_seeds(ds, 3, 7).items[i].image == picked.items[i].image);
  }

  const auto all = select_seeds(ds, 100, 7);
  CHECK(all.size() == ds.size());
  CHECK(all.class_histogram() == ds.class_histogram());

  auto missing = ds;
  missing.class_count = 11;
  CHECK_THROWS_AS(select_seeds(missing, 1, 0), DataError);
  CHECK_THROWS_AS(select_seeds(ds, 0, 0), ConfigError);
}

TEST_CASE("train_purifier composes binarize and train_hebbian") {
  const auto one = random_seeds(1, 1, 6, 5, 1, 2);
  const auto p = train_purifier(one, global_config(10));
  REQUIRE(p.channels() == 1);
  const auto pattern = image_to_pattern(binarize_global(one.items[0].image.channel(0), 127));
  std::vector<BinaryPattern> ps{pattern};
  CHECK(p.network(0) == train_hebbian(ps, 30));

  const auto rgb = random_seeds(2, 2, 5, 5, 3, 3);
  const auto p3 = train_purifier(rgb, global_config(10));
  CHECK(p3.channels() == 3);
  CHECK_FALSE(p3.network(0) == p3.network(1));

  CHECK(serialize_purifier(train_purifier(rgb, global_config(10))) == serialize_purifier(p3));

  auto mixed = rgb;
  Rng rng(1);
  mixed.items[1].image = random_image(5, 5, 1, rng);
  CHECK_THROWS_AS(train_purifier(mixed, global_config(10)), DimensionError);
  CHECK_THROWS_AS(train_purifier(SeedDataset{}, global_config(10)), DataError);
}

TEST_CASE("remove_time 0 returns the binarized input") {
  const auto seeds = random_seeds(2, 2, 8, 8, 3, 4);
  Rng rng(5);
  const auto img = random_image(8, 8, 3, rng);
  for (auto bin : {Binarization::global(), Binarization::local_diff(3)}) {
    auto cfg = global_config(0);
    cfg.binarization = bin;
    const auto out = purify(train_purifier(seeds, cfg), img);
    for (int c = 0; c < 3; ++c) CHECK(out.channel(c) == bin.apply(img.channel(c)).plane());
  }
}

TEST_CASE("a corner patch is erased by recall to the single stored image") {
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    auto img = random_image(16, 16, 1, rng);
    // Keep the trigger visible against the stored image.
    for (int y = 13; y < 16; ++y)
      for (int x = 13; x < 16; ++x) img.channel(0).at(x, y) = 0;
    SeedDataset seeds;
    seeds.class_count = 1;
    seeds.items.push_back({img, 0});
    const auto p = train_purifier(seeds, global_config(2000, trial));
    const auto poisoned = inject_patch(img, PatchTrigger{});
    CHECK(binarized_hamming(poisoned, img, Binarization::global()) == 9);
    const auto out = purify(p, poisoned);
    CHECK(out.channel(0) == binarize_global(img.channel(0), 127).plane());
  }
}

TEST_CASE("a clean seed stays at least as close as a patched copy started") {
  const auto seeds = random_seeds(3, 1, 12, 12, 1, 7);
  const auto p = train_purifier(seeds, global_config(500));
  const auto bin = Binarization::global();
  for (const auto& item : seeds.items) {
    const auto clean_after = binarized_hamming(purify(p, item.image), item.image, bin);
    const auto patched = inject_patch(item.image, PatchTrigger{});
    CHECK(clean_after <= binarized_hamming(patched, item.image, bin));
  }
}

TEST_CASE("stored patterns are fixed points of purification") {
  const auto seeds = random_seeds(3, 1, 20, 20, 1, 8);
  const auto p = train_purifier(seeds, global_config(1000));
  for (const auto& item : seeds.items) {
    const auto bin = binarize_global(item.image.channel(0), 127);
    if (check_stability(p.network(0), image_to_pattern(bin)) != 0.0) continue;
    CHECK(purify(p, item.image).channel(0) == bin.plane());
  }
}

TEST_CASE("purify is deterministic per ordinal and rejects wrong shapes") {
  const auto seeds = random_seeds(2, 3, 10, 10, 1, 9);
  const auto p = train_purifier(seeds, global_config(40));
  Rng rng(10);
  const auto img = random_image(10, 10, 1, rng);
  CHECK(purify(p, img, 3) == purify(p, img, 3));
  CHECK_THROWS_AS(purify(p, random_image(10, 9, 1, rng)), DimensionError);
  CHECK_THROWS_AS(purify(p, random_image(10, 10, 3, rng)), DimensionError);
  CHECK(recall_seed(1, 2, 0) != recall_seed(1, 2, 1));
  CHECK(recall_seed(1, 2, 0) != recall_seed(1, 3, 0));
}

TEST_CASE("purify_batch matches sequential purify") {
  const auto seeds = random_seeds(2, 2, 8, 8, 3, 11);
  const auto p = train_purifier(seeds, global_config(100));
  Rng rng(12);
  std::vector<Image> batch;
  for (int i = 0; i < 9; ++i) batch.push_back(random_image(8, 8, 3, rng));

  CHECK(purify_batch(p, std::span<const Image>{}).empty());
  const auto par = purify_batch(p, batch, 5);
  const auto ser = purify_batch_serial(p, batch, 5);
  REQUIRE(par.size() == 9);
  CHECK(par == ser);
  for (std::size_t i = 0; i < batch.size(); ++i) CHECK(par[i] == purify(p, batch[i], 5 + i));

  batch.push_back(random_image(8, 8, 1, rng));
  CHECK_THROWS_AS(purify_batch(p, batch), DimensionError);
}

TEST_CASE("scramble permutations") {
  CHECK(make_scramble(1, 5) == Permutation::identity(1));
  Rng rng(13);
  for (std::size_t n : {2u, 17u, 784u, 10000u}) {
    const auto perm = make_scramble(n, n);
    const auto p = random_pattern(n, rng);
    CHECK(perm.undo(perm.apply(p)) == p);
    CHECK(perm.apply(perm.undo(p)) == p);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto perm = make_scramble(784, seed);
    double displacement = 0.0;
    for (std::size_t i = 0; i < 784; ++i) {
      displacement += std::abs(static_cast<double>(perm.forward()[i]) - static_cast<double>(i));
    }
    CHECK(displacement / 784.0 > 784.0 / 8.0);
  }
  // Position i moves to forward[i].
  const Permutation swap({1, 2, 0});
  CHECK(swap.apply(BinaryPattern{1, -1, -1}) == BinaryPattern{-1, 1, -1});
  CHECK_THROWS_AS(Permutation({0, 0, 1}), DataError);
}

TEST_CASE("scrambled purification is the plain pipeline conjugated by the permutation") {
  const auto seeds = random_seeds(3, 2, 12, 12, 1, 14);
  auto cfg = global_config(300, 21);
  cfg.scramble = true;
  cfg.scramble_seed = 77;
  const auto scrambled = train_purifier(seeds, cfg);
  REQUIRE(scrambled.scramble().has_value());
  const auto& perm = *scrambled.scramble();

  auto moved = seeds;
  for (auto& item : moved.items) item.image = perm.apply(item.image);
  cfg.scramble = false;
  const auto plain = train_purifier(moved, cfg);

  Rng rng(15);
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto img = random_image(12, 12, 1, rng);
    CHECK(purify(scrambled, img, k) == perm.undo(purify(plain, perm.apply(img), k)));
  }
}

TEST_CASE("purifier container round-trips bit-exactly") {
  const auto seeds = random_seeds(2, 2, 6, 6, 3, 16);
  auto cfg = global_config(33, 4);
  cfg.binarization = Binarization::local_diff(5);
  cfg.scramble = true;
  cfg.scramble_seed = 8;
  const auto p = train_purifier(seeds, cfg);
  const auto bytes = serialize_purifier(p);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "SFTR");
  const auto back = deserialize_purifier(bytes);
  CHECK(back == p);
  CHECK(serialize_purifier(back) == bytes);

  const auto path = std::filesystem::temp_directory_path() / "sifter_purifier_roundtrip.sftr";
  save_purifier(p, path.string());
  CHECK(load_purifier(path.string()) == p);
  std::filesystem::remove(path);

  auto cut = bytes;
  cut.resize(cut.size() - 3);
  CHECK_THROWS_AS(deserialize_purifier(cut), DataError);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize_purifier(trailing), DataError);
  CHECK_THROWS_AS(load_purifier("/nonexistent/dir/x.sftr"), IoError);
}

TEST_CASE("with_recall changes only recall settings") {
  const auto seeds = random_seeds(2, 1, 5, 5, 1, 17);
  const auto p = train_purifier(seeds, global_config(10, 1));
  const auto q = p.with_recall(99, 5);
  CHECK(q.config().remove_time == 99);
  CHECK(q.config().seed == 5);
  CHECK(q.network(0) == p.network(0));
  CHECK(q.config().binarization == p.config().binarization);
}
