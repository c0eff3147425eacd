#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "hamxcs/rng.hpp"
#include "hamxcs/ternary.hpp"

namespace hamxcs {

// Parameters shared by the tabular agents.
struct BaselineParams {
    double learning_rate = 1.0;       // initial alpha
    double learning_rate_decay = 0.9999954;  // per update
    double explore_rate = 0.2;
    double discount = 0.9;
    double trace_decay = 0.0;        // lambda; 0 disables traces
    double trace_threshold = 0.001;  // prune bound for table traces
    double hammq_weight = 1.0;       // xi
    double hammq_magnitude = 1.0;    // eta_H
};

// Joint-action value table over (state, agent action, opponent action)
// with a cached state value kept consistent with the deterministic minimax
// operator after every update pass. Unvisited entries read zero.
class JointQTable {
  public:
    JointQTable(int action_count, int opp_action_count)
        : actions_(action_count), opp_actions_(opp_action_count) {}

    int action_count() const { return actions_; }
    int opp_action_count() const { return opp_actions_; }

    double q(std::uint64_t state, int a, int o) const;
    void set_q(std::uint64_t state, int a, int o, double value);
    void add_q(std::uint64_t state, int a, int o, double delta);

    // max over agent actions of min over opponent actions.
    double minimax_value(std::uint64_t state) const;
    // Cached V(s); refreshed by refresh_value after each update pass.
    double value(std::uint64_t state) const;
    void refresh_value(std::uint64_t state);

    // Greedy minimax action; ties break to the lowest index.
    int greedy_action(std::uint64_t state) const;

    std::size_t visited_states() const { return q_.size(); }

    // Sorted "state-bits action opponent-action q-value" lines.
    void dump(std::ostream& out, int situation_width) const;

  private:
    const std::vector<double>* row(std::uint64_t state) const;
    std::vector<double>& row_mut(std::uint64_t state);

    int actions_ = 0;
    int opp_actions_ = 0;
    std::unordered_map<std::uint64_t, std::vector<double>> q_;
    std::unordered_map<std::uint64_t, double> v_;
};

// One-step updates. Terminal transitions bootstrap from zero.
void minimax_q_update(JointQTable& table, std::uint64_t s, int a, int o, double r, std::uint64_t s_next,
                      bool terminal, double alpha, double discount);
void minimax_sarsa_update(JointQTable& table, std::uint64_t s, int a, int o, double r, std::uint64_t s_next,
                          int a_next, int o_next, bool terminal, double alpha, double discount);

// Replacing eligibility traces over table keys.
class TableTraces {
  public:
    void record(std::uint64_t s, int a, int o);
    void decay(double lambda, double discount, double threshold);
    void clear() { entries_.clear(); }
    std::size_t size() const { return entries_.size(); }

    // Applies alpha * td_error * e to every traced tuple.
    void apply(JointQTable& table, double alpha, double td_error) const;

    double value_of(std::uint64_t s, int a, int o) const;

  private:
    struct Key {
        std::uint64_t s;
        int a;
        int o;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return static_cast<std::size_t>(
                split_mix64(k.s ^ (static_cast<std::uint64_t>(static_cast<unsigned>(k.a)) << 40) ^
                            (static_cast<std::uint64_t>(static_cast<unsigned>(k.o)) << 52)));
        }
    };
    std::unordered_map<Key, double, KeyHash> entries_;
};

}  // namespace hamxcs
