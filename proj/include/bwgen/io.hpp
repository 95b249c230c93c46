#pragma once

// JSON forms of instance sets, plans and block catalogs.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bwgen/catalog.hpp"
#include "bwgen/core.hpp"
#include "bwgen/error.hpp"
#include "bwgen/plan.hpp"

namespace bwgen {

using json = nlohmann::json;

inline constexpr int kInstanceFormatVersion = 1;

struct InstanceSet {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> steps;
  std::size_t per_step = 0;
  std::vector<Instance> instances;
};

template <class F>
auto parse_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptArchive, std::string("malformed JSON: ") + e.what());
  }
}

inline json to_json(const InstanceSet& set) {
  json items = json::array();
  for (const auto& i : set.instances) {
    items.push_back({{"init", i.init}, {"goal", i.goal}, {"L", i.walk_length}, {"seed", i.seed}});
  }
  return {{"version", kInstanceFormatVersion},
          {"n", set.n},
          {"k", set.k},
          {"seed", set.seed},
          {"steps", set.steps},
          {"perStep", set.per_step},
          {"trivialPolicy", "redraw"},
          {"instances", items}};
}

inline InstanceSet instance_set_from_json(const json& j) {
  return parse_guard([&] {
    if (j.at("version").get<int>() != kInstanceFormatVersion) {
      throw Error(ErrorKind::UnsupportedVersion, "instance file version " + j.at("version").dump());
    }
    InstanceSet set;
    set.n = j.at("n").get<std::size_t>();
    set.k = j.at("k").get<std::size_t>();
    set.seed = j.value("seed", std::uint64_t{0});
    set.steps = j.value("steps", std::vector<std::uint32_t>{});
    set.per_step = j.value("perStep", std::size_t{0});
    for (const auto& item : j.at("instances")) {
      set.instances.push_back({set.n, set.k, item.at("init").get<StateRank>(), item.at("goal").get<StateRank>(),
                               item.at("L").get<std::uint32_t>(), item.at("seed").get<std::uint64_t>()});
    }
    return set;
  });
}

// ---------------------------------------------------------------------------

inline std::string action_type_name(ActionType t) {
  switch (t) {
    case ActionType::Move: return "move";
    case ActionType::Polish: return "polish";
    case ActionType::Unpolish: return "unpolish";
  }
  return {};
}

inline json to_json(const Action& a) {
  json j = {{"type", action_type_name(a.type)}, {"block", a.block}};
  if (a.type == ActionType::Move) j["dst"] = a.dst;
  return j;
}

inline Action action_from_json(const json& j) {
  return parse_guard([&] {
    const std::string type = j.at("type").get<std::string>();
    const auto block = j.at("block").get<BlockId>();
    if (type == "move") return Action::move(block, j.at("dst").get<std::uint32_t>());
    if (type == "polish") return Action::polish(block);
    if (type == "unpolish") return Action::unpolish(block);
    throw Error(ErrorKind::InvalidArgument, "unknown action type '" + type + "'");
  });
}

/// {"model":"extended", n, k, init, goal, length, steps:[{type, block, dst?}]}
inline json plan_to_json(std::size_t n, std::size_t k, StateRank init, StateRank goal, const Plan& plan) {
  json steps = json::array();
  for (const auto& a : plan) steps.push_back(to_json(a));
  return {{"model", "extended"}, {"n", n},           {"k", k},
          {"init", init},        {"goal", goal},     {"length", plan.size()},
          {"steps", steps}};
}

inline Plan plan_from_json(const json& j) {
  return parse_guard([&] {
    Plan plan;
    for (const auto& s : j.at("steps")) plan.push_back(action_from_json(s));
    return plan;
  });
}

inline json to_json(const GroundedPlan& plan) {
  return {{"model", "grounded"}, {"length", plan.steps.size()}, {"steps", plan.steps}};
}

inline GroundedPlan grounded_plan_from_json(const json& j) {
  return parse_guard([&] { return GroundedPlan{j.at("steps").get<std::vector<std::string>>()}; });
}

// ---------------------------------------------------------------------------

inline json to_json(const BlockCatalog& c) {
  json palette = json::array();
  for (const auto& color : c.palette()) {
    palette.push_back({{"name", color.name}, {"rgb", {color.rgb.r, color.rgb.g, color.rgb.b}}});
  }
  json blocks = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& b = c.block(i);
    blocks.push_back({{"colorIndex", b.color_index},
                      {"color", c.color_name(i)},
                      {"shape", std::string(to_string(b.shape))},
                      {"size", std::string(to_string(b.size))},
                      {"side", c.side(i)}});
  }
  return {{"palette", palette}, {"blocks", blocks}};
}

inline BlockCatalog catalog_from_json(const json& j) {
  return parse_guard([&] {
    std::vector<NamedColor> palette;
    for (const auto& p : j.at("palette")) {
      const auto rgb = p.at("rgb").get<std::vector<int>>();
      if (rgb.size() != 3) throw Error(ErrorKind::InvalidCatalog, "rgb needs three components");
      palette.push_back({p.at("name").get<std::string>(),
                         {std::uint8_t(rgb[0]), std::uint8_t(rgb[1]), std::uint8_t(rgb[2])}});
    }
    std::vector<BlockSpec> blocks;
    for (const auto& b : j.at("blocks")) {
      const std::string shape = b.at("shape").get<std::string>();
      const std::string size = b.at("size").get<std::string>();
      if ((shape != "cube" && shape != "cylinder") || (size != "large" && size != "small")) {
        throw Error(ErrorKind::InvalidCatalog, "unknown shape or size");
      }
      blocks.push_back({b.at("colorIndex").get<std::size_t>(), shape == "cube" ? Shape::Cube : Shape::Cylinder,
                        size == "large" ? SizeClass::Large : SizeClass::Small});
    }
    return BlockCatalog(std::move(blocks), std::move(palette));
  });
}

}  // namespace bwgen
