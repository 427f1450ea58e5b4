#include "facmech/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <stdexcept>
#include <utility>
#include <vector>

namespace facmech {

namespace {

using Json = nlohmann::ordered_json;

std::string agent_context(std::size_t index) { return "agent " + std::to_string(index); }

void require_keys(const Json& object, const std::vector<std::string>& keys,
                  const std::string& what) {
  for (const std::string& key : keys) {
    if (!object.contains(key)) {
      throw std::invalid_argument(what + ": missing field \"" + key + "\"");
    }
  }
  for (const auto& item : object.items()) {
    bool known = false;
    for (const std::string& key : keys) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(what + ": unknown field \"" + item.key() + "\"");
    }
  }
}

int require_int(const Json& object, const std::string& key, const std::string& what) {
  const Json& value = object.at(key);
  if (!value.is_number_integer()) {
    throw std::invalid_argument(what + ": field \"" + key + "\" must be an integer");
  }
  return value.get<int>();
}

Json outcome_to_json(const Outcome& outcome) {
  Json list = Json::array();
  for (const Placement& p : outcome.placements()) {
    Json entry;
    entry["facility"] = p.facility;
    entry["location"] = to_fraction_string(p.location);
    list.push_back(std::move(entry));
  }
  return list;
}

Json instance_to_json_object(const Instance& instance) {
  Json j;
  j["m"] = instance.m;
  j["k"] = instance.k;
  j["utility_class"] = to_string(instance.utility_class);
  Json agents = Json::array();
  for (const Agent& a : instance.agents) {
    Json entry;
    entry["x"] = to_fraction_string(a.x);
    entry["approve"] = a.approve.ids();
    agents.push_back(std::move(entry));
  }
  j["agents"] = std::move(agents);
  return j;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_string(UtilityClass utility_class) {
  switch (utility_class) {
    case UtilityClass::Sum:
      return "sum";
    case UtilityClass::MinDist:
      return "min";
    case UtilityClass::MaxDist:
      return "max";
  }
  throw std::logic_error("to_string: unknown utility class");
}

std::optional<UtilityClass> utility_class_from_string(const std::string& name) {
  if (name == "sum") return UtilityClass::Sum;
  if (name == "min") return UtilityClass::MinDist;
  if (name == "max") return UtilityClass::MaxDist;
  return std::nullopt;
}

std::string to_string(InformationSetting setting) {
  switch (setting) {
    case InformationSetting::General:
      return "general";
    case InformationSetting::KnownPreferences:
      return "known-preferences";
    case InformationSetting::KnownPositions:
      return "known-positions";
  }
  throw std::logic_error("to_string: unknown information setting");
}

std::optional<InformationSetting> setting_from_string(const std::string& name) {
  if (name == "general") return InformationSetting::General;
  if (name == "known-preferences") return InformationSetting::KnownPreferences;
  if (name == "known-positions") return InformationSetting::KnownPositions;
  return std::nullopt;
}

std::string instance_to_json(const Instance& instance) {
  return dump_report(instance_to_json_object(instance));
}

Instance instance_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("instance json: ") + e.what());
  }
  if (!j.is_object()) {
    throw std::invalid_argument("instance json: top level must be an object");
  }
  require_keys(j, {"m", "k", "utility_class", "agents"}, "instance json");
  int m = require_int(j, "m", "instance json");
  int k = require_int(j, "k", "instance json");
  const Json& uc_value = j.at("utility_class");
  if (!uc_value.is_string()) {
    throw std::invalid_argument("instance json: field \"utility_class\" must be a string");
  }
  std::optional<UtilityClass> uc = utility_class_from_string(uc_value.get<std::string>());
  if (!uc) {
    throw std::invalid_argument("instance json: utility_class must be \"sum\", \"min\" or \"max\"");
  }
  const Json& agents_value = j.at("agents");
  if (!agents_value.is_array() || agents_value.empty()) {
    throw std::invalid_argument("instance json: \"agents\" must be a non-empty array");
  }
  std::vector<Agent> agents;
  agents.reserve(agents_value.size());
  for (std::size_t i = 0; i < agents_value.size(); ++i) {
    const std::string context = "instance json, " + agent_context(i);
    const Json& entry = agents_value[i];
    if (!entry.is_object()) {
      throw std::invalid_argument(context + ": must be an object");
    }
    require_keys(entry, {"x", "approve"}, context);
    const Json& x_value = entry.at("x");
    if (!x_value.is_string()) {
      throw std::invalid_argument(context + ": field \"x\" must be a rational string");
    }
    std::optional<Rat> x = parse_rational(x_value.get<std::string>());
    if (!x) {
      throw std::invalid_argument(context + ": cannot parse position \"" +
                                  x_value.get<std::string>() + "\"");
    }
    const Json& approve_value = entry.at("approve");
    if (!approve_value.is_array()) {
      throw std::invalid_argument(context + ": field \"approve\" must be an array");
    }
    std::vector<int> ids;
    for (const Json& id : approve_value) {
      if (!id.is_number_integer()) {
        throw std::invalid_argument(context + ": approvals must be integers");
      }
      ids.push_back(id.get<int>());
    }
    try {
      agents.push_back(Agent{std::move(*x), Preference::from_ids(ids)});
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(context + ": " + e.what());
    }
  }
  try {
    return Instance::create(std::move(agents), m, k, *uc);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("instance json: ") + e.what());
  }
}

std::string instance_digest(const Instance& instance) {
  std::uint64_t hash = fnv1a64(instance_to_json(instance));
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

std::string eval_report_to_json(const std::string& mechanism, const std::string& instance_id,
                                const Instance& instance, const Lottery& lottery) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "eval";
  j["mechanism"] = mechanism;
  j["instance_id"] = instance_id;
  Json support = Json::array();
  for (const Lottery::Entry& entry : lottery.entries()) {
    Json item;
    item["probability"] = to_fraction_string(entry.probability);
    item["outcome"] = outcome_to_json(entry.outcome);
    support.push_back(std::move(item));
  }
  j["lottery"] = std::move(support);
  j["expected_welfare"] = to_fraction_string(expected_welfare(instance, lottery));
  return dump_report(j);
}

std::string opt_report_to_json(const std::string& instance_id, const Instance& instance,
                               const OptimalResult& result) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = "opt";
  j["instance_id"] = instance_id;
  j["utility_class"] = to_string(instance.utility_class);
  j["outcome"] = outcome_to_json(result.outcome);
  j["welfare"] = to_fraction_string(result.welfare);
  return dump_report(j);
}

}  // namespace facmech
