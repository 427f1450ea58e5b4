#pragma once

#include "facmech/model.hpp"

#include <optional>
#include <string>

namespace facmech {

std::string to_string(UtilityClass utility_class);
std::optional<UtilityClass> utility_class_from_string(const std::string& name);

std::string to_string(InformationSetting setting);
std::optional<InformationSetting> setting_from_string(const std::string& name);

// Canonical form: ordered keys m, k, utility_class, agents; every position
// serialized "num/den"; 2-space indent; trailing newline. Two equal instances
// always produce byte-identical text, which also backs instance_digest.
std::string instance_to_json(const Instance& instance);

// Strict parser: rejects unknown keys, missing fields, and non-string
// positions. Positions accept "num/den", integer, or exact decimal strings.
// Throws std::invalid_argument with field context on any problem.
Instance instance_from_json(const std::string& text);

// 16 lowercase hex digits, FNV-1a 64 over the canonical JSON text.
std::string instance_digest(const Instance& instance);

std::string eval_report_to_json(const std::string& mechanism, const std::string& instance_id,
                                const Instance& instance, const Lottery& lottery);
std::string opt_report_to_json(const std::string& instance_id, const Instance& instance,
                               const OptimalResult& result);

}  // namespace facmech
