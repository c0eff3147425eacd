#include "hamxcs/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hamxcs {

namespace {

std::vector<ClassifierPtr> alive(const std::vector<ClassifierPtr>& members) {
    std::vector<ClassifierPtr> out;
    out.reserve(members.size());
    for (const auto& cl : members)
        if (cl->numerosity >= 1) out.push_back(cl);
    return out;
}

int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[i] > values[static_cast<std::size_t>(best)]) best = i;
    return best;
}

void check_tau(std::span<const double> tau) {
    if (tau.empty()) throw std::invalid_argument("opponent distribution is empty");
}

}  // namespace

std::vector<int> MatchSet::covered_actions() const {
    std::vector<int> actions;
    for (const auto& cl : members)
        if (std::find(actions.begin(), actions.end(), cl->action) == actions.end()) actions.push_back(cl->action);
    std::sort(actions.begin(), actions.end());
    return actions;
}

bool MatchSet::covers(int action) const {
    return std::any_of(members.begin(), members.end(),
                       [action](const ClassifierPtr& cl) { return cl->action == action; });
}

long ActionSet::total_numerosity() const {
    long total = 0;
    for (const auto& cl : members) total += cl->numerosity;
    return total;
}

bool ActionSet::contains(const Classifier* cl) const {
    return std::any_of(members.begin(), members.end(), [cl](const ClassifierPtr& p) { return p.get() == cl; });
}

MatchSet build_match_set(Population& pop, const Situation& s, const EngineParams& params, int action_count,
                         int opp_action_count, int heuristic_count, Rng& rng) {
    if (action_count <= 0 || opp_action_count <= 0) throw std::invalid_argument("action counts must be positive");
    const int theta_mna = std::min(params.effective_min_actions(action_count), action_count);
    if (params.population_limit < theta_mna)
        throw std::invalid_argument("population capacity below the required action coverage");

    MatchSet m;
    m.situation = s;
    for (;;) {
        m.members.clear();
        for (const auto& cl : pop.members())
            if (matches(cl->condition, s)) m.members.push_back(cl);

        auto covered = m.covered_actions();
        if (static_cast<int>(covered.size()) >= theta_mna) break;

        std::vector<int> missing;
        for (int a = 0; a < action_count; ++a)
            if (std::find(covered.begin(), covered.end(), a) == covered.end()) missing.push_back(a);

        Classifier cov;
        cov.condition = covering_condition(s, params.wildcard_prob, rng);
        cov.action = missing[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(missing.size()) - 1))];
        cov.prediction.assign(static_cast<std::size_t>(opp_action_count), params.init_prediction);
        cov.heuristics.assign(static_cast<std::size_t>(heuristic_count),
                              std::vector<double>(static_cast<std::size_t>(opp_action_count), params.init_heuristic));
        cov.error = params.init_error;
        cov.fitness = params.init_fitness;
        cov.numerosity = 1;
        cov.experience = 0;
        cov.time_stamp = pop.clock();
        cov.action_set_size = 1.0;
        pop.insert(std::move(cov));
        delete_from_population(pop, params, rng);
    }
    return m;
}

ActionSet action_set_of(const MatchSet& m, int action) {
    ActionSet aset;
    aset.action = action;
    for (const auto& cl : m.members)
        if (cl->action == action) aset.members.push_back(cl);
    return aset;
}

std::vector<double> fw_prediction(const MatchSet& m, int action) {
    std::vector<double> sum;
    double weight_sum = 0.0;
    for (const auto& cl : m.members) {
        if (cl->action != action || cl->numerosity < 1) continue;
        const double w = cl->fitness * cl->numerosity;
        if (sum.empty()) sum.assign(cl->prediction.size(), 0.0);
        for (std::size_t o = 0; o < cl->prediction.size(); ++o) sum[o] += cl->prediction[o] * w;
        weight_sum += w;
    }
    if (weight_sum <= 0.0 || sum.empty()) throw std::invalid_argument("no advocate for the requested action");
    for (double& v : sum) v /= weight_sum;
    return sum;
}

std::vector<double> fw_heuristic(const MatchSet& m, int action, int heuristic_index) {
    std::vector<double> sum;
    double weight_sum = 0.0;
    for (const auto& cl : m.members) {
        if (cl->action != action || cl->numerosity < 1) continue;
        if (heuristic_index < 0 || static_cast<std::size_t>(heuristic_index) >= cl->heuristics.size())
            throw std::invalid_argument("heuristic index out of range");
        const auto& h = cl->heuristics[static_cast<std::size_t>(heuristic_index)];
        const double w = cl->fitness * cl->numerosity;
        if (sum.empty()) sum.assign(h.size(), 0.0);
        for (std::size_t o = 0; o < h.size(); ++o) sum[o] += h[o] * w;
        weight_sum += w;
    }
    if (weight_sum <= 0.0 || sum.empty()) throw std::invalid_argument("no advocate for the requested action");
    for (double& v : sum) v /= weight_sum;
    return sum;
}

double expected_action_prediction(const MatchSet& m, int action, std::span<const double> tau) {
    check_tau(tau);
    const auto p = fw_prediction(m, action);
    if (p.size() != tau.size()) throw std::invalid_argument("distribution size does not match prediction vector");
    double value = 0.0;
    for (std::size_t o = 0; o < p.size(); ++o) value += tau[o] * p[o];
    return value;
}

double max_expected_action_prediction(const MatchSet& m, std::span<const double> tau) {
    const auto actions = m.covered_actions();
    if (actions.empty()) throw std::invalid_argument("empty match set");
    double best = -std::numeric_limits<double>::infinity();
    for (int a : actions) best = std::max(best, expected_action_prediction(m, a, tau));
    return best;
}

double eph(const MatchSet& m, int action, int heuristic_index, std::span<const double> tau, int opp_action_hat,
           double kappa) {
    check_tau(tau);
    if (opp_action_hat < 0 || static_cast<std::size_t>(opp_action_hat) >= tau.size())
        throw std::invalid_argument("predicted opponent action out of range");
    const auto h = fw_heuristic(m, action, heuristic_index);
    return kappa * h[static_cast<std::size_t>(opp_action_hat)] + expected_action_prediction(m, action, tau);
}

double target_prediction(double reward_prev, const MatchSet* current, std::span<const double> tau, double discount) {
    if (current == nullptr) return reward_prev;
    return reward_prev + discount * max_expected_action_prediction(*current, tau);
}

std::vector<std::size_t> pareto_optimal_indices(const std::vector<std::vector<double>>& scores) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < scores.size() && !dominated; ++k) {
            if (k == i) continue;
            bool all_geq = true;
            bool any_gt = false;
            for (std::size_t j = 0; j < scores[i].size(); ++j) {
                if (scores[k][j] < scores[i][j]) { all_geq = false; break; }
                if (scores[k][j] > scores[i][j]) any_gt = true;
            }
            dominated = all_geq && any_gt;
        }
        if (!dominated) front.push_back(i);
    }
    return front;
}

int select_action(const MatchSet& m, std::span<const double> tau, const EngineParams& params, SelectionMode mode,
                  std::span<const double> heuristic_weights, Rng& rng) {
    const auto actions = m.covered_actions();
    if (actions.empty()) throw std::invalid_argument("empty match set");
    check_tau(tau);

    if (uniform01(rng) < params.explore_rate)
        return actions[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(actions.size()) - 1))];

    const int heuristic_count = static_cast<int>(m.members.front()->heuristics.size());
    const int o_hat = argmax_lowest(tau);

    if (heuristic_count == 0) {
        std::vector<double> eaps;
        eaps.reserve(actions.size());
        for (int a : actions) eaps.push_back(expected_action_prediction(m, a, tau));
        return actions[static_cast<std::size_t>(argmax_lowest(eaps))];
    }

    std::vector<double> weights(heuristic_weights.begin(), heuristic_weights.end());
    if (weights.empty()) weights.assign(static_cast<std::size_t>(heuristic_count), 1.0);
    if (static_cast<int>(weights.size()) != heuristic_count)
        throw std::invalid_argument("heuristic weight count does not match heuristic count");

    if (mode == SelectionMode::epsilon_greedy_single) {
        std::vector<double> scores;
        scores.reserve(actions.size());
        for (int a : actions) {
            double h_sum = 0.0;
            for (int j = 0; j < heuristic_count; ++j)
                h_sum += weights[static_cast<std::size_t>(j)] * fw_heuristic(m, a, j)[static_cast<std::size_t>(o_hat)];
            scores.push_back(params.heuristic_weight * h_sum + expected_action_prediction(m, a, tau));
        }
        return actions[static_cast<std::size_t>(argmax_lowest(scores))];
    }

    std::vector<std::vector<double>> matrix;
    matrix.reserve(actions.size());
    for (int a : actions) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(heuristic_count));
        for (int j = 0; j < heuristic_count; ++j) row.push_back(eph(m, a, j, tau, o_hat, params.heuristic_weight));
        matrix.push_back(std::move(row));
    }
    const auto front = pareto_optimal_indices(matrix);
    const std::size_t pick = front[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(front.size()) - 1))];
    return actions[pick];
}

double classifier_accuracy(double error, const EngineParams& params) {
    if (error < params.error_threshold) return 1.0;
    return params.accuracy_coeff * std::pow(error / params.error_threshold, -params.accuracy_power);
}

void reinforce_action_set(ActionSet& aset, const MatchSet& prev_match, double target, int opp_action,
                          std::span<const double> tau_prev, const std::vector<std::optional<int>>& heuristic_advice,
                          const EngineParams& params) {
    if (aset.members.empty()) throw std::invalid_argument("empty action set");
    check_tau(tau_prev);
    auto members = alive(aset.members);
    if (members.empty()) return;
    const std::size_t o_prev = static_cast<std::size_t>(opp_action);

    // Payoff prediction and error.
    for (const auto& cl : members) {
        if (o_prev >= cl->prediction.size()) throw std::invalid_argument("opponent action out of range");
        cl->prediction[o_prev] += params.beta_prediction * (target - cl->prediction[o_prev]);
        double expected = 0.0;
        for (std::size_t o = 0; o < cl->prediction.size(); ++o) expected += tau_prev[o] * cl->prediction[o];
        cl->error += params.beta_error * (std::abs(target - expected) - cl->error);
    }

    // Relative-accuracy fitness.
    double accuracy_sum = 0.0;
    std::vector<double> accuracy(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        accuracy[i] = classifier_accuracy(members[i]->error, params);
        accuracy_sum += accuracy[i] * members[i]->numerosity;
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
        const double share = accuracy[i] * members[i]->numerosity / accuracy_sum;
        members[i]->fitness += params.beta_fitness * (share - members[i]->fitness);
    }

    // Heuristic components: one shared value per advised heuristic, derived
    // from the fitness-weighted predictions of the previous match set.
    for (std::size_t j = 0; j < heuristic_advice.size(); ++j) {
        if (!heuristic_advice[j].has_value()) continue;
        const int advised = *heuristic_advice[j];
        if (!prev_match.covers(advised)) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (int a : prev_match.covered_actions()) best = std::max(best, fw_prediction(prev_match, a)[o_prev]);
        const double advised_value = fw_prediction(prev_match, advised)[o_prev];
        const double h_value = best - advised_value + params.heuristic_magnitude;
        for (const auto& cl : members) {
            if (j >= cl->heuristics.size()) throw std::invalid_argument("heuristic advice count exceeds classifier heuristics");
            cl->heuristics[j][o_prev] = h_value;
        }
    }

    // Bookkeeping.
    long set_numerosity = 0;
    for (const auto& cl : members) set_numerosity += cl->numerosity;
    for (const auto& cl : members) {
        cl->experience += 1;
        cl->action_set_size += params.beta_fitness * (static_cast<double>(set_numerosity) - cl->action_set_size);
    }
}

std::pair<Condition, Condition> ga_crossover(const Condition& a, const Condition& b, Rng& rng) {
    if (a.width() != b.width()) throw std::invalid_argument("condition width mismatch");
    const int width = a.width();
    int lo = uniform_int(rng, 0, width);
    int hi = uniform_int(rng, 0, width);
    if (lo > hi) std::swap(lo, hi);
    std::uint64_t segment = 0;
    for (int i = lo; i < hi; ++i) segment |= (1ULL << i);
    const std::uint64_t care_a = (a.care_mask() & ~segment) | (b.care_mask() & segment);
    const std::uint64_t value_a = (a.value_mask() & ~segment) | (b.value_mask() & segment);
    const std::uint64_t care_b = (b.care_mask() & ~segment) | (a.care_mask() & segment);
    const std::uint64_t value_b = (b.value_mask() & ~segment) | (a.value_mask() & segment);
    return {Condition(width, care_a, value_a), Condition(width, care_b, value_b)};
}

Condition ga_mutate(const Condition& c, const Situation& s, double mu, Rng& rng) {
    if (c.width() != s.width()) throw std::invalid_argument("condition/situation width mismatch");
    Condition out = c;
    for (int i = 0; i < c.width(); ++i) {
        if (uniform01(rng) >= mu) continue;
        if (out.is_wildcard(i)) out.set_fixed(i, s.bit(i));
        else out.set_wildcard(i);
    }
    return out;
}

bool try_subsume(Classifier& subsumer, const Classifier& candidate, const EngineParams& params) {
    if (subsumer.action != candidate.action) return false;
    if (subsumer.error >= params.error_threshold) return false;
    if (subsumer.experience <= params.subsumption_threshold) return false;
    if (!is_more_general(subsumer.condition, candidate.condition)) return false;
    subsumer.numerosity += candidate.numerosity;
    return true;
}

void delete_from_population(Population& pop, const EngineParams& params, Rng& rng) {
    while (pop.total_numerosity() > pop.capacity()) {
        const auto& members = pop.members();
        double fitness_sum = 0.0;
        long numerosity_sum = 0;
        for (const auto& cl : members) {
            fitness_sum += cl->fitness;
            numerosity_sum += cl->numerosity;
        }
        const double mean_fitness = fitness_sum / static_cast<double>(numerosity_sum);

        std::vector<double> votes(members.size());
        double vote_sum = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            const auto& cl = members[i];
            double vote = cl->action_set_size * cl->numerosity;
            const double micro_fitness = cl->fitness / cl->numerosity;
            if (cl->experience > params.deletion_threshold && micro_fitness < params.fitness_fraction * mean_fitness)
                vote *= mean_fitness / micro_fitness;
            votes[i] = vote;
            vote_sum += vote;
        }

        const double draw = uniform01(rng) * vote_sum;
        double acc = 0.0;
        std::size_t chosen = members.size() - 1;
        for (std::size_t i = 0; i < members.size(); ++i) {
            acc += votes[i];
            if (draw < acc) { chosen = i; break; }
        }

        ClassifierPtr victim = members[chosen];
        victim->numerosity -= 1;
        if (victim->numerosity == 0) pop.remove(victim);
    }
}

namespace {

ClassifierPtr roulette_by_fitness(const std::vector<ClassifierPtr>& members, Rng& rng) {
    double total = 0.0;
    for (const auto& cl : members) total += cl->fitness;
    const double draw = uniform01(rng) * total;
    double acc = 0.0;
    for (const auto& cl : members) {
        acc += cl->fitness;
        if (draw < acc) return cl;
    }
    return members.back();
}

std::vector<double> mean_vector(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    return out;
}

}  // namespace

void run_ga(ActionSet& aset, Population& pop, const Situation& s, const EngineParams& params, Rng& rng) {
    auto members = alive(aset.members);
    if (members.empty()) return;

    double ts_weighted = 0.0;
    long numerosity_sum = 0;
    for (const auto& cl : members) {
        ts_weighted += static_cast<double>(cl->time_stamp) * cl->numerosity;
        numerosity_sum += cl->numerosity;
    }
    const double mean_ts = ts_weighted / static_cast<double>(numerosity_sum);
    if (static_cast<double>(pop.clock()) - mean_ts <= static_cast<double>(params.ga_threshold)) return;

    for (const auto& cl : members) cl->time_stamp = pop.clock();

    ClassifierPtr parent1 = roulette_by_fitness(members, rng);
    ClassifierPtr parent2 = roulette_by_fitness(members, rng);

    Condition cond1 = parent1->condition;
    Condition cond2 = parent2->condition;
    if (uniform01(rng) < params.crossover_prob) {
        auto crossed = ga_crossover(cond1, cond2, rng);
        cond1 = crossed.first;
        cond2 = crossed.second;
    }
    cond1 = ga_mutate(cond1, s, params.mutation_prob, rng);
    cond2 = ga_mutate(cond2, s, params.mutation_prob, rng);

    const double mean_fitness = 0.5 * (parent1->fitness + parent2->fitness);
    const double mean_error = 0.5 * (parent1->error + parent2->error);
    const double mean_as = 0.5 * (parent1->action_set_size + parent2->action_set_size);
    const auto mean_prediction = mean_vector(parent1->prediction, parent2->prediction);
    std::vector<std::vector<double>> mean_heuristics(parent1->heuristics.size());
    for (std::size_t j = 0; j < mean_heuristics.size(); ++j)
        mean_heuristics[j] = mean_vector(parent1->heuristics[j], parent2->heuristics[j]);

    for (const Condition& cond : {cond1, cond2}) {
        Classifier child;
        child.condition = cond;
        child.action = aset.action;
        child.prediction = mean_prediction;
        child.heuristics = mean_heuristics;
        child.error = mean_error;
        child.fitness = 0.1 * mean_fitness;
        child.numerosity = 1;
        child.experience = 0;
        child.time_stamp = pop.clock();
        child.action_set_size = mean_as;

        if (try_subsume(*parent1, child, params)) continue;
        if (parent2 != parent1 && try_subsume(*parent2, child, params)) continue;
        pop.insert(std::move(child));
    }
    delete_from_population(pop, params, rng);
}

}  // namespace hamxcs
