#include "hamxcs/baseline_agents.hpp"

#include <limits>

namespace hamxcs {

namespace {

int argmax_lowest(const std::vector<double>& values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    return best;
}

}  // namespace

MinimaxQAgent::MinimaxQAgent(int action_count, int opp_action_count, const BaselineParams& params, bool use_traces)
    : table_(action_count, opp_action_count), params_(params), use_traces_(use_traces), alpha_(params.learning_rate) {}

int MinimaxQAgent::choose(const DecisionContext& ctx, Rng& rng) {
    if (uniform01(rng) < params_.explore_rate) {
        last_was_exploratory_ = true;
        return uniform_int(rng, 0, table_.action_count() - 1);
    }
    last_was_exploratory_ = false;
    return table_.greedy_action(ctx.situation.raw());
}

void MinimaxQAgent::observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                            const DecisionContext& next, bool terminal, Rng&) {
    const std::uint64_t s = ctx.situation.raw();
    const std::uint64_t s_next = next.situation.raw();
    if (use_traces_) {
        const double bootstrap = terminal ? 0.0 : table_.value(s_next);
        const double td = reward + params_.discount * bootstrap - table_.q(s, own_action, other_action);
        traces_.record(s, own_action, other_action);
        traces_.apply(table_, alpha_, td);
        if (last_was_exploratory_ || terminal)
            traces_.clear();
        else
            traces_.decay(params_.trace_decay, params_.discount, params_.trace_threshold);
    } else {
        minimax_q_update(table_, s, own_action, other_action, reward, s_next, terminal, alpha_, params_.discount);
    }
    alpha_ *= params_.learning_rate_decay;
}

void MinimaxQAgent::end_episode(Rng&) { traces_.clear(); }

MinimaxSarsaAgent::MinimaxSarsaAgent(int action_count, int opp_action_count, const BaselineParams& params,
                                     bool use_traces)
    : table_(action_count, opp_action_count), params_(params), use_traces_(use_traces), alpha_(params.learning_rate) {}

int MinimaxSarsaAgent::choose(const DecisionContext& ctx, Rng& rng) {
    if (uniform01(rng) < params_.explore_rate) return uniform_int(rng, 0, table_.action_count() - 1);
    return table_.greedy_action(ctx.situation.raw());
}

void MinimaxSarsaAgent::flush(const Pending& p, std::optional<std::pair<int, int>> next_joint, bool terminal) {
    double bootstrap = 0.0;
    if (!terminal && next_joint.has_value()) bootstrap = table_.q(p.s_next, next_joint->first, next_joint->second);
    if (use_traces_) {
        const double td = p.r + params_.discount * bootstrap - table_.q(p.s, p.a, p.o);
        traces_.record(p.s, p.a, p.o);
        traces_.apply(table_, alpha_, td);
        traces_.decay(params_.trace_decay, params_.discount, params_.trace_threshold);
    } else {
        minimax_sarsa_update(table_, p.s, p.a, p.o, p.r, p.s_next, next_joint ? next_joint->first : 0,
                             next_joint ? next_joint->second : 0, terminal || !next_joint.has_value(), alpha_,
                             params_.discount);
    }
    alpha_ *= params_.learning_rate_decay;
}

void MinimaxSarsaAgent::observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                                const DecisionContext& next, bool terminal, Rng&) {
    if (pending_.has_value()) flush(*pending_, std::make_pair(own_action, other_action), false);
    pending_ = Pending{ctx.situation.raw(), own_action, other_action, reward, next.situation.raw()};
    if (terminal) {
        flush(*pending_, std::nullopt, true);
        pending_.reset();
    }
}

void MinimaxSarsaAgent::end_episode(Rng&) {
    pending_.reset();
    traces_.clear();
}

HammqAgent::HammqAgent(int action_count, int opp_action_count, const BaselineParams& params)
    : table_(action_count, opp_action_count), params_(params), alpha_(params.learning_rate) {}

double HammqAgent::heuristic_bonus(std::uint64_t state, int action) const {
    auto it = bonus_.find(state);
    if (it == bonus_.end()) return 0.0;
    return it->second.at(static_cast<std::size_t>(action));
}

int HammqAgent::choose(const DecisionContext& ctx, Rng& rng) {
    const std::uint64_t s = ctx.situation.raw();
    const int actions = table_.action_count();

    // Refresh the heuristic bonus for this visit: the advised action gets
    // just enough to overtake the current greedy value, everything else 0.
    std::optional<int> advised;
    for (const auto& a : ctx.advice)
        if (a.has_value()) { advised = a; break; }
    auto& h = bonus_[s];
    h.assign(static_cast<std::size_t>(actions), 0.0);
    if (advised.has_value()) {
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < actions; ++a) {
            double worst = std::numeric_limits<double>::infinity();
            for (int o = 0; o < table_.opp_action_count(); ++o) worst = std::min(worst, table_.q(s, a, o));
            best = std::max(best, worst);
        }
        double advised_worst = std::numeric_limits<double>::infinity();
        for (int o = 0; o < table_.opp_action_count(); ++o)
            advised_worst = std::min(advised_worst, table_.q(s, *advised, o));
        h[static_cast<std::size_t>(*advised)] = best - advised_worst + params_.hammq_magnitude;
    }

    if (uniform01(rng) < params_.explore_rate) return uniform_int(rng, 0, actions - 1);

    std::vector<double> scores(static_cast<std::size_t>(actions));
    for (int a = 0; a < actions; ++a) {
        double worst = std::numeric_limits<double>::infinity();
        for (int o = 0; o < table_.opp_action_count(); ++o) worst = std::min(worst, table_.q(s, a, o));
        scores[static_cast<std::size_t>(a)] = worst + params_.hammq_weight * h[static_cast<std::size_t>(a)];
    }
    return argmax_lowest(scores);
}

void HammqAgent::observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                         const DecisionContext& next, bool terminal, Rng&) {
    minimax_q_update(table_, ctx.situation.raw(), own_action, other_action, reward, next.situation.raw(), terminal,
                     alpha_, params_.discount);
    alpha_ *= params_.learning_rate_decay;
}

NscpAgent::NscpAgent(int action_count, int opp_action_count, const BaselineParams& params)
    : table_(action_count, opp_action_count), params_(params), alpha_(params.learning_rate) {}

std::vector<double> NscpAgent::opponent_distribution(std::uint64_t state) const {
    const int opp_actions = table_.opp_action_count();
    std::vector<double> dist(static_cast<std::size_t>(opp_actions), 1.0 / opp_actions);
    auto it = counts_.find(state);
    if (it == counts_.end()) return dist;
    long total = 0;
    for (long c : it->second) total += c;
    if (total == 0) return dist;
    for (int o = 0; o < opp_actions; ++o)
        dist[static_cast<std::size_t>(o)] = static_cast<double>(it->second[static_cast<std::size_t>(o)]) / total;
    return dist;
}

int NscpAgent::best_response_action(std::uint64_t state) const {
    const auto dist = opponent_distribution(state);
    std::vector<double> scores(static_cast<std::size_t>(table_.action_count()));
    for (int a = 0; a < table_.action_count(); ++a) {
        double v = 0.0;
        for (int o = 0; o < table_.opp_action_count(); ++o) v += dist[static_cast<std::size_t>(o)] * table_.q(state, a, o);
        scores[static_cast<std::size_t>(a)] = v;
    }
    return argmax_lowest(scores);
}

double NscpAgent::best_response_value(std::uint64_t state) const {
    const auto dist = opponent_distribution(state);
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < table_.action_count(); ++a) {
        double v = 0.0;
        for (int o = 0; o < table_.opp_action_count(); ++o) v += dist[static_cast<std::size_t>(o)] * table_.q(state, a, o);
        best = std::max(best, v);
    }
    return best;
}

int NscpAgent::choose(const DecisionContext& ctx, Rng& rng) {
    if (uniform01(rng) < params_.explore_rate) return uniform_int(rng, 0, table_.action_count() - 1);
    return best_response_action(ctx.situation.raw());
}

void NscpAgent::observe(const DecisionContext& ctx, int own_action, int other_action, double reward,
                        const DecisionContext& next, bool terminal, Rng&) {
    const std::uint64_t s = ctx.situation.raw();
    auto& row = counts_[s];
    if (row.empty()) row.assign(static_cast<std::size_t>(table_.opp_action_count()), 0);
    row[static_cast<std::size_t>(other_action)] += 1;

    const double bootstrap = terminal ? 0.0 : best_response_value(next.situation.raw());
    table_.add_q(s, own_action, other_action,
                 alpha_ * (reward + params_.discount * bootstrap - table_.q(s, own_action, other_action)));
    alpha_ *= params_.learning_rate_decay;
}

}  // namespace hamxcs
