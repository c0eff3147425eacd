#include "hamxcs/hamxcs_agent.hpp"

#include <stdexcept>

namespace hamxcs {

HamxcsAgent::HamxcsAgent(int situation_width, int action_count, int opp_action_count, int heuristic_count,
                         const EngineParams& params, const HamxcsOptions& options, Rng& init_rng)
    : width_(situation_width),
      action_count_(action_count),
      opp_action_count_(opp_action_count),
      heuristic_count_(options.use_heuristics ? heuristic_count : 0),
      params_(params),
      options_(options),
      pop_(params.population_limit),
      model_(situation_width, options.model_hidden_units, opp_action_count, options.model_learning_rate,
             options.model_entropy_weight, init_rng) {
    if (options.use_heuristics && !options.heuristic_weights.empty() &&
        static_cast<int>(options.heuristic_weights.size()) != heuristic_count)
        throw std::invalid_argument("heuristic weight count does not match heuristic count");
}

int HamxcsAgent::choose(const DecisionContext& ctx, Rng& rng) {
    if (ctx.situation.width() != width_) throw std::invalid_argument("situation width does not match agent");

    const std::vector<double> tau = model_.predict(ctx.situation);
    MatchSet match = build_match_set(pop_, ctx.situation, params_, action_count_, opp_action_count_,
                                     heuristic_count_, rng);

    if (pending_.has_value()) {
        const double target = target_prediction(pending_->reward, &match, tau, params_.discount);
        learn(*pending_, target, rng);
        pending_.reset();
    }

    const int action = select_action(match, tau, params_, options_.selection_mode, options_.heuristic_weights, rng);

    Transition t;
    t.situation = ctx.situation;
    t.match = std::move(match);
    t.tau = tau;
    t.action = action;
    if (options_.use_heuristics) t.advice = ctx.advice;
    current_ = std::move(t);
    return action;
}

void HamxcsAgent::observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                          const DecisionContext&, bool terminal, Rng& rng) {
    if (!current_.has_value() || current_->action != own_action || !(current_->situation == ctx.situation))
        throw std::logic_error("observe does not follow the matching choose call");

    buffer_.record(ctx.situation, other_action);
    if (options_.use_traces) traces_.record(ctx.situation, own_action, other_action);

    current_->opp_action = other_action;
    current_->reward = reward;
    pending_ = std::move(current_);
    current_.reset();

    if (terminal) {
        learn(*pending_, pending_->reward, rng);
        pending_.reset();
    }
}

void HamxcsAgent::learn(const Transition& t, double target, Rng& rng) {
    pop_.advance_clock();

    const double phi_prev = max_expected_action_prediction(t.match, t.tau);
    ActionSet aset = action_set_of(t.match, t.action);
    if (!aset.members.empty())
        reinforce_action_set(aset, t.match, target, t.opp_action, t.tau, t.advice, params_);
    run_ga(aset, pop_, t.situation, params_, rng);

    if (options_.use_traces) {
        apply_trace_updates(traces_, pop_, target, phi_prev, aset, params_);
        traces_.decay(params_.trace_decay, params_.discount, params_.trace_threshold);
    }
}

void HamxcsAgent::end_episode(Rng&) {
    if (!buffer_.empty()) {
        model_.train_episode(buffer_, options_.model_passes);
        buffer_.clear();
    }
    traces_.clear();
    current_.reset();
    pending_.reset();
}

std::optional<PopulationCensus> HamxcsAgent::population_census() const {
    PopulationCensus census;
    census.macroclassifiers = pop_.macro_count();
    census.used = pop_.used_count();
    census.numerosity = pop_.total_numerosity();
    return census;
}

void HamxcsAgent::write_population(std::ostream& out, const std::vector<std::string>& action_labels) const {
    write_population_snapshot(pop_, action_labels, out);
}

}  // namespace hamxcs
