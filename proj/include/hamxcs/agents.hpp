#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "hamxcs/game.hpp"
#include "hamxcs/rng.hpp"
#include "hamxcs/ternary.hpp"

namespace hamxcs {

// Everything a learner sees when asked to act: its own-perspective
// situation and the advice of each bundled heuristic policy.
struct DecisionContext {
    Situation situation;
    std::vector<std::optional<int>> advice;
};

struct PopulationCensus {
    std::size_t macroclassifiers = 0;
    std::size_t used = 0;  // experience > 0
    long numerosity = 0;
};

// One side of a two-player learning session. `observe` is called once per
// environment step with the context the action was chosen in.
class Agent {
  public:
    virtual ~Agent() = default;

    virtual int choose(const DecisionContext& ctx, Rng& rng) = 0;
    virtual void observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                         const DecisionContext& next, bool terminal, Rng& rng) = 0;
    virtual void end_episode(Rng&) {}

    virtual std::optional<PopulationCensus> population_census() const { return std::nullopt; }
    virtual void write_population(std::ostream&, const std::vector<std::string>&) const {}
};

// Always plays one fixed action.
class FixedActionAgent final : public Agent {
  public:
    explicit FixedActionAgent(int action) : action_(action) {}
    int choose(const DecisionContext&, Rng&) override { return action_; }
    void observe(const DecisionContext&, int, int, double, const DecisionContext&, bool, Rng&) override {}

  private:
    int action_ = 0;
};

// Uniform random over the action set.
class RandomAgent final : public Agent {
  public:
    explicit RandomAgent(int action_count) : action_count_(action_count) {}
    int choose(const DecisionContext&, Rng& rng) override { return uniform_int(rng, 0, action_count_ - 1); }
    void observe(const DecisionContext&, int, int, double, const DecisionContext&, bool, Rng&) override {}

  private:
    int action_count_ = 0;
};

// Follows the first heuristic that offers advice, falling back to the
// given action otherwise.
class AdviceFollowingAgent final : public Agent {
  public:
    explicit AdviceFollowingAgent(int fallback_action) : fallback_(fallback_action) {}
    int choose(const DecisionContext& ctx, Rng&) override {
        for (const auto& a : ctx.advice)
            if (a.has_value()) return *a;
        return fallback_;
    }
    void observe(const DecisionContext&, int, int, double, const DecisionContext&, bool, Rng&) override {}

  private:
    int fallback_ = 0;
};

}  // namespace hamxcs
