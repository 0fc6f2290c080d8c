#pragma once

#include <filesystem>
#include <string>

#include "fairmdp/mdp.hpp"
#include "fairmdp/offline.hpp"
#include "fairmdp/tables.hpp"

namespace fairmdp {

/// JSON document with dimensions, flattened arrays, and seed provenance.
std::string mdp_to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const std::string& text);

std::string policy_to_json(const PolicyTable& policy);
PolicyTable policy_from_json(const std::string& text);

std::string occupancy_q_to_json(const OccupancyQ& q);
std::string occupancy_z_to_json(const OccupancyZ& z);

/// One episode per line: {"steps":[{"s":..,"a":..,"r":[..]},...]}.
void save_dataset_jsonl(const Dataset& data, const std::filesystem::path& path);
Dataset load_dataset_jsonl(const std::filesystem::path& path);

}  // namespace fairmdp
