#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "hamxcs/agents.hpp"
#include "hamxcs/qtable.hpp"

namespace hamxcs {

// Minimax-Q with an optional replacing eligibility trace; exploratory
// moves cut the trace history (Watkins-style).
class MinimaxQAgent final : public Agent {
  public:
    MinimaxQAgent(int action_count, int opp_action_count, const BaselineParams& params, bool use_traces = false);

    int choose(const DecisionContext& ctx, Rng& rng) override;
    void observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                 const DecisionContext& next, bool terminal, Rng& rng) override;
    void end_episode(Rng&) override;

    const JointQTable& table() const { return table_; }
    double learning_rate() const { return alpha_; }

  private:
    JointQTable table_;
    BaselineParams params_;
    bool use_traces_ = false;
    TableTraces traces_;
    double alpha_ = 1.0;
    bool last_was_exploratory_ = false;
};

// On-policy Minimax-SARSA; updates lag one step so the realized next joint
// action supplies the bootstrap. Optional replacing trace.
class MinimaxSarsaAgent final : public Agent {
  public:
    MinimaxSarsaAgent(int action_count, int opp_action_count, const BaselineParams& params, bool use_traces = false);

    int choose(const DecisionContext& ctx, Rng& rng) override;
    void observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                 const DecisionContext& next, bool terminal, Rng& rng) override;
    void end_episode(Rng&) override;

    const JointQTable& table() const { return table_; }

  private:
    struct Pending {
        std::uint64_t s;
        int a;
        int o;
        double r;
        std::uint64_t s_next;
    };

    void flush(const Pending& p, std::optional<std::pair<int, int>> next_joint, bool terminal);

    JointQTable table_;
    BaselineParams params_;
    bool use_traces_ = false;
    TableTraces traces_;
    double alpha_ = 1.0;
    std::optional<Pending> pending_;
};

// Heuristically accelerated Minimax-Q: a per-visit heuristic bonus table
// steers greedy selection toward the advised action.
class HammqAgent final : public Agent {
  public:
    HammqAgent(int action_count, int opp_action_count, const BaselineParams& params);

    int choose(const DecisionContext& ctx, Rng& rng) override;
    void observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                 const DecisionContext& next, bool terminal, Rng& rng) override;

    const JointQTable& table() const { return table_; }
    double heuristic_bonus(std::uint64_t state, int action) const;

  private:
    JointQTable table_;
    BaselineParams params_;
    double alpha_ = 1.0;
    std::unordered_map<std::uint64_t, std::vector<double>> bonus_;
};

// Best response against empirical opponent action frequencies.
class NscpAgent final : public Agent {
  public:
    NscpAgent(int action_count, int opp_action_count, const BaselineParams& params);

    int choose(const DecisionContext& ctx, Rng& rng) override;
    void observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                 const DecisionContext& next, bool terminal, Rng& rng) override;

    const JointQTable& table() const { return table_; }
    std::vector<double> opponent_distribution(std::uint64_t state) const;

  private:
    double best_response_value(std::uint64_t state) const;
    int best_response_action(std::uint64_t state) const;

    JointQTable table_;
    BaselineParams params_;
    double alpha_ = 1.0;
    std::unordered_map<std::uint64_t, std::vector<long>> counts_;
};

}  // namespace hamxcs
