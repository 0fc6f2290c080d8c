#include "fairmdp/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace fairmdp {

using nlohmann::json;

std::string mdp_to_json(const TabularMdp& mdp) {
    json j;
    j["num_agents"] = mdp.num_agents;
    j["num_states"] = mdp.num_states;
    j["num_actions"] = mdp.num_actions;
    j["horizon"] = mdp.horizon;
    j["epsilon_floor"] = mdp.epsilon_floor;
    j["noise_half_width"] = mdp.noise_half_width;
    j["initial_distribution"] = mdp.initial_distribution;
    j["transition"] = mdp.transition.probs;
    j["reward"] = mdp.reward.values;
    j["provenance"] = mdp.provenance;
    return j.dump();
}

TabularMdp mdp_from_json(const std::string& text) {
    json j = json::parse(text);
    TabularMdp mdp;
    mdp.num_agents = j.at("num_agents").get<int>();
    mdp.num_states = j.at("num_states").get<int>();
    mdp.num_actions = j.at("num_actions").get<int>();
    mdp.horizon = j.at("horizon").get<int>();
    mdp.epsilon_floor = j.at("epsilon_floor").get<double>();
    mdp.noise_half_width = j.at("noise_half_width").get<double>();
    mdp.initial_distribution = j.at("initial_distribution").get<std::vector<double>>();
    mdp.transition = TransitionKernel(mdp.horizon - 1, mdp.num_states, mdp.num_actions);
    mdp.transition.probs = j.at("transition").get<std::vector<double>>();
    mdp.reward = RewardTable(mdp.horizon, mdp.num_agents, mdp.num_states, mdp.num_actions);
    mdp.reward.values = j.at("reward").get<std::vector<double>>();
    if (j.contains("provenance")) mdp.provenance = j.at("provenance").get<std::string>();
    if (mdp.transition.probs.size() != static_cast<std::size_t>(mdp.horizon - 1) *
                                           mdp.num_states * mdp.num_actions * mdp.num_states ||
        mdp.reward.values.size() != static_cast<std::size_t>(mdp.horizon) * mdp.num_agents *
                                        mdp.num_states * mdp.num_actions)
        throw std::invalid_argument("mdp_from_json: array size mismatch");
    mdp.validate();
    return mdp;
}

std::string policy_to_json(const PolicyTable& policy) {
    json j;
    j["horizon"] = policy.horizon;
    j["num_states"] = policy.num_states;
    j["num_actions"] = policy.num_actions;
    j["probs"] = policy.probs;
    return j.dump();
}

PolicyTable policy_from_json(const std::string& text) {
    json j = json::parse(text);
    PolicyTable policy(j.at("horizon").get<int>(), j.at("num_states").get<int>(),
                       j.at("num_actions").get<int>());
    std::vector<double> probs = j.at("probs").get<std::vector<double>>();
    if (probs.size() != policy.probs.size())
        throw std::invalid_argument("policy_from_json: array size mismatch");
    policy.probs = std::move(probs);
    return policy;
}

std::string occupancy_q_to_json(const OccupancyQ& q) {
    json j;
    j["horizon"] = q.horizon;
    j["num_states"] = q.num_states;
    j["num_actions"] = q.num_actions;
    j["mass"] = q.mass;
    return j.dump();
}

std::string occupancy_z_to_json(const OccupancyZ& z) {
    json j;
    j["horizon"] = z.horizon;
    j["num_states"] = z.num_states;
    j["num_actions"] = z.num_actions;
    j["mass"] = z.mass;
    return j.dump();
}

void save_dataset_jsonl(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const Trajectory& t : data.episodes) {
        json steps = json::array();
        for (const TrajectoryStep& step : t.steps)
            steps.push_back({{"s", step.state}, {"a", step.action}, {"r", step.rewards}});
        out << json{{"steps", steps}}.dump() << "\n";
    }
}

Dataset load_dataset_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Dataset data;
    data.provenance.behavior_policy = "file:" + path.string();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        Trajectory t;
        for (const json& step : j.at("steps")) {
            TrajectoryStep ts;
            ts.state = step.at("s").get<int>();
            ts.action = step.at("a").get<int>();
            ts.rewards = step.at("r").get<std::vector<double>>();
            t.steps.push_back(std::move(ts));
        }
        data.episodes.push_back(std::move(t));
    }
    return data;
}

}  // namespace fairmdp
