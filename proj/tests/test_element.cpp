#include "doctest.h"

#include <random>

#include "mobidesc/model/element.hpp"

using namespace mobidesc;

namespace {

ElementNode sample_tree() {
  auto battery = scalar("batteryStatus", "80");
  battery.is_dynamic = true;
  return container("contextualDescription",
                   {container("deviceContext", {battery, scalar("dataPlan", "prepaid")}),
                    container("userContext", {scalar("presence", "available")})});
}

} // namespace

TEST_CASE("path lookup finds nested nodes") {
  const ElementNode root = sample_tree();
  const ElementNode& node = element_at(root, "deviceContext/batteryStatus");
  CHECK(node.value == "80");
  CHECK(node.is_dynamic);
}

TEST_CASE("empty path names the root") {
  const ElementNode root = sample_tree();
  CHECK(&element_at(root, "") == &root);
}

TEST_CASE("missing paths raise NotFound and lookup is case-sensitive") {
  const ElementNode root = sample_tree();
  CHECK(find_element(root, "nonexistent") == nullptr);
  CHECK(find_element(root, "deviceContext/BatteryStatus") == nullptr);
  CHECK_THROWS_AS(element_at(root, "nonexistent"), NotFound);
}

TEST_CASE("repeated siblings are addressed by index") {
  const ElementNode root =
      container("hardwareDescription",
                {container("sensorList", {container("sensor", {scalar("name", "GPS")}),
                                          container("sensor", {scalar("name", "compass")})})});
  CHECK(element_at(root, "sensorList/sensor[0]/name").value == "GPS");
  CHECK(element_at(root, "sensorList/sensor[1]/name").value == "compass");
  // Without an index the first sibling wins.
  CHECK(element_at(root, "sensorList/sensor/name").value == "GPS");
  CHECK(find_element(root, "sensorList/sensor[2]") == nullptr);
}

namespace {

ElementNode random_tree(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"alpha", "beta", "gamma", "delta"};
  ElementNode node;
  node.name = names[rng() % 4];
  if (depth == 0 || rng() % 3 == 0) {
    node.value = "v" + std::to_string(rng() % 100);
    return node;
  }
  const std::size_t fanout = rng() % 4;
  for (std::size_t i = 0; i < fanout; ++i) node.children.push_back(random_tree(rng, depth - 1));
  return node;
}

} // namespace

TEST_CASE("path enumeration is inverted by lookup") {
  std::mt19937_64 rng(20150601);
  for (int round = 0; round < 200; ++round) {
    const ElementNode root = random_tree(rng, 4);
    for (const auto& [path, node] : enumerate_paths(root)) {
      CAPTURE(path);
      CHECK(find_element(root, path) == node);
    }
  }
}

TEST_CASE("leaf counting splits by isDynamic") {
  const ElementNode root = sample_tree();
  const LeafCounts counts = count_leaves(root);
  CHECK(counts.static_leaves == 2);
  CHECK(counts.dynamic_leaves == 1);
}
