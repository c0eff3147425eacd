#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hamxcs/classifier.hpp"
#include "hamxcs/params.hpp"
#include "hamxcs/rng.hpp"
#include "hamxcs/ternary.hpp"

namespace hamxcs {

// All population classifiers whose condition matches one situation.
struct MatchSet {
    Situation situation;
    std::vector<ClassifierPtr> members;

    std::vector<int> covered_actions() const;
    bool covers(int action) const;
};

// The subset of a match set advocating one action.
struct ActionSet {
    int action = 0;
    std::vector<ClassifierPtr> members;

    long total_numerosity() const;
    bool contains(const Classifier* cl) const;
};

enum class SelectionMode {
    epsilon_greedy_single,  // greedy on the (weighted-sum) heuristic score
    pareto,                 // uniform choice from the Pareto-optimal action set
};

// Forms the match set for `s`, covering missing actions until at least
// theta_mna distinct actions are represented. Covering inserts into the
// population and runs deletion when capacity is exceeded.
MatchSet build_match_set(Population& pop, const Situation& s, const EngineParams& params, int action_count,
                         int opp_action_count, int heuristic_count, Rng& rng);

ActionSet action_set_of(const MatchSet& m, int action);

// Fitness-weighted average prediction vector for one action. Weights are
// fitness times numerosity, so the macroclassifier value equals the
// fitness-weighted value over the expanded microclassifier multiset.
std::vector<double> fw_prediction(const MatchSet& m, int action);

// Fitness-weighted average heuristic vector (FAH) for one action.
std::vector<double> fw_heuristic(const MatchSet& m, int action, int heuristic_index);

// Expected action prediction (EAP): payoff expectation for `action` under
// the modeled opponent distribution `tau`.
double expected_action_prediction(const MatchSet& m, int action, std::span<const double> tau);

// Max EAP over the actions covered by `m`; ties break to the lowest index.
double max_expected_action_prediction(const MatchSet& m, std::span<const double> tau);

// Expected prediction with heuristics (EPH) for one action and one
// heuristic: kappa * FAH[o_hat] + EAP.
double eph(const MatchSet& m, int action, int heuristic_index, std::span<const double> tau, int opp_action_hat,
           double kappa);

// Target prediction: reward plus the discounted max EAP of the current
// match set. A null match set marks episode termination (no bootstrap).
double target_prediction(double reward_prev, const MatchSet* current, std::span<const double> tau, double discount);

// Indices (into `scores`' rows) of actions not Pareto-dominated across the
// per-heuristic score columns. scores[i] holds one action's values.
std::vector<std::size_t> pareto_optimal_indices(const std::vector<std::vector<double>>& scores);

// Epsilon-greedy action choice over the covered actions. In single mode
// the score is the heuristic-weighted EPH (multiple heuristics summed with
// the given weights); in pareto mode a Pareto-optimal action is drawn
// uniformly. With no heuristics both modes reduce to greedy EAP.
int select_action(const MatchSet& m, std::span<const double> tau, const EngineParams& params, SelectionMode mode,
                  std::span<const double> heuristic_weights, Rng& rng);

// Classifier accuracy from its current error.
double classifier_accuracy(double error, const EngineParams& params);

// Applies the full reinforcement pass to the previous step's action set:
// prediction component for the opponent's executed action, error against
// the expected classifier prediction, relative-accuracy fitness, heuristic
// components per advised action, then experience / action-set-size
// bookkeeping. `prev_match` is the match set the action set was drawn
// from; heuristic values derive from its fitness-weighted predictions.
void reinforce_action_set(ActionSet& aset, const MatchSet& prev_match, double target, int opp_action,
                          std::span<const double> tau_prev, const std::vector<std::optional<int>>& heuristic_advice,
                          const EngineParams& params);

// Two-point crossover between equal-length conditions.
std::pair<Condition, Condition> ga_crossover(const Condition& a, const Condition& b, Rng& rng);

// Niche mutation: each position toggles between '#' and the situation's
// bit with probability mu.
Condition ga_mutate(const Condition& c, const Situation& s, double mu, Rng& rng);

// GA subsumption test; on success the candidate's numerosity is absorbed
// into the subsumer.
bool try_subsume(Classifier& subsumer, const Classifier& candidate, const EngineParams& params);

// Roulette deletion until total numerosity fits the population capacity.
void delete_from_population(Population& pop, const EngineParams& params, Rng& rng);

// Runs the niche GA on an action set if its mean time stamp lags the
// population clock by more than theta_GA.
void run_ga(ActionSet& aset, Population& pop, const Situation& s, const EngineParams& params, Rng& rng);

}  // namespace hamxcs
