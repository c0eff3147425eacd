#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamxcs/rng.hpp"
#include "hamxcs/ternary.hpp"

namespace hamxcs {

enum class Perspective { agent, opponent };

struct StepResult {
    double agent_reward = 0.0;
    double opponent_reward = 0.0;
    bool terminal = false;
};

// Two-player simultaneous-move grid game. One instance belongs to one
// learning session; all stochasticity flows through the injected rng.
class Game {
  public:
    virtual ~Game() = default;

    virtual void reset(Rng& rng) = 0;
    virtual StepResult step(int agent_action, int opp_action, Rng& rng) = 0;
    virtual bool terminal() const = 0;

    virtual Situation encode(Perspective p) const = 0;
    virtual int situation_width() const = 0;
    virtual int action_count() const = 0;
    virtual const std::vector<std::string>& action_names() const = 0;
    virtual int step_limit() const = 0;

    // Advice of each bundled heuristic policy for the given side, absent
    // where a policy has nothing to say in the current state.
    virtual std::vector<std::optional<int>> heuristic_advice(Perspective p) const = 0;
    virtual int heuristic_count(Perspective p) const = 0;
};

}  // namespace hamxcs
