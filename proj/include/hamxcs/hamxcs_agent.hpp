#pragma once

#include <optional>
#include <vector>

#include "hamxcs/agents.hpp"
#include "hamxcs/classifier.hpp"
#include "hamxcs/eligibility.hpp"
#include "hamxcs/engine.hpp"
#include "hamxcs/opponent_model.hpp"
#include "hamxcs/params.hpp"

namespace hamxcs {

struct HamxcsOptions {
    SelectionMode selection_mode = SelectionMode::epsilon_greedy_single;
    std::vector<double> heuristic_weights;  // empty = unit weights
    bool use_heuristics = true;
    bool use_traces = true;
    int model_hidden_units = 100;
    double model_learning_rate = 0.0001;
    double model_entropy_weight = 0.001;
    int model_passes = 10;
};

// The complete decision-and-learning cycle: match-set formation with
// covering, EPH or Pareto action selection against the opponent model,
// reinforcement of the previous action set, GA with subsumption, and the
// trace-driven retroactive updates. Reinforcement for step t runs when the
// match set for step t+1 exists (or immediately on termination), so the
// bootstrap always reads the fresh match set.
class HamxcsAgent final : public Agent {
  public:
    HamxcsAgent(int situation_width, int action_count, int opp_action_count, int heuristic_count,
                const EngineParams& params, const HamxcsOptions& options, Rng& init_rng);

    int choose(const DecisionContext& ctx, Rng& rng) override;
    void observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                 const DecisionContext& next, bool terminal, Rng& rng) override;
    void end_episode(Rng& rng) override;

    std::optional<PopulationCensus> population_census() const override;
    void write_population(std::ostream& out, const std::vector<std::string>& action_labels) const override;

    const Population& population() const { return pop_; }
    const OpponentModel& opponent_model() const { return model_; }
    const TraceSet& traces() const { return traces_; }
    const EngineParams& params() const { return params_; }

  private:
    struct Transition {
        Situation situation;
        MatchSet match;
        std::vector<double> tau;
        int action = 0;
        int opp_action = 0;
        double reward = 0.0;
        std::vector<std::optional<int>> advice;
    };

    void learn(const Transition& t, double target, Rng& rng);

    int width_;
    int action_count_;
    int opp_action_count_;
    int heuristic_count_;
    EngineParams params_;
    HamxcsOptions options_;
    Population pop_;
    OpponentModel model_;
    TraceSet traces_;
    EpisodeBuffer buffer_;
    std::optional<Transition> current_;
    std::optional<Transition> pending_;
};

}  // namespace hamxcs
