#include "hamxcs/qtable.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hamxcs {

const std::vector<double>* JointQTable::row(std::uint64_t state) const {
    auto it = q_.find(state);
    return it == q_.end() ? nullptr : &it->second;
}

std::vector<double>& JointQTable::row_mut(std::uint64_t state) {
    auto it = q_.find(state);
    if (it == q_.end())
        it = q_.emplace(state, std::vector<double>(static_cast<std::size_t>(actions_) * opp_actions_, 0.0)).first;
    return it->second;
}

double JointQTable::q(std::uint64_t state, int a, int o) const {
    if (a < 0 || a >= actions_ || o < 0 || o >= opp_actions_) throw std::out_of_range("joint action out of range");
    const auto* r = row(state);
    return r ? (*r)[static_cast<std::size_t>(a) * opp_actions_ + o] : 0.0;
}

void JointQTable::set_q(std::uint64_t state, int a, int o, double value) {
    if (a < 0 || a >= actions_ || o < 0 || o >= opp_actions_) throw std::out_of_range("joint action out of range");
    row_mut(state)[static_cast<std::size_t>(a) * opp_actions_ + o] = value;
}

void JointQTable::add_q(std::uint64_t state, int a, int o, double delta) {
    if (a < 0 || a >= actions_ || o < 0 || o >= opp_actions_) throw std::out_of_range("joint action out of range");
    row_mut(state)[static_cast<std::size_t>(a) * opp_actions_ + o] += delta;
}

double JointQTable::minimax_value(std::uint64_t state) const {
    const auto* r = row(state);
    if (!r) return 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < actions_; ++a) {
        double worst = std::numeric_limits<double>::infinity();
        for (int o = 0; o < opp_actions_; ++o)
            worst = std::min(worst, (*r)[static_cast<std::size_t>(a) * opp_actions_ + o]);
        best = std::max(best, worst);
    }
    return best;
}

double JointQTable::value(std::uint64_t state) const {
    auto it = v_.find(state);
    return it == v_.end() ? 0.0 : it->second;
}

void JointQTable::refresh_value(std::uint64_t state) { v_[state] = minimax_value(state); }

int JointQTable::greedy_action(std::uint64_t state) const {
    int best_action = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < actions_; ++a) {
        double worst = std::numeric_limits<double>::infinity();
        for (int o = 0; o < opp_actions_; ++o) worst = std::min(worst, q(state, a, o));
        if (worst > best) {
            best = worst;
            best_action = a;
        }
    }
    return best_action;
}

void JointQTable::dump(std::ostream& out, int situation_width) const {
    std::vector<std::uint64_t> keys;
    keys.reserve(q_.size());
    for (const auto& [state, _] : q_) keys.push_back(state);
    std::sort(keys.begin(), keys.end());
    char buf[64];
    for (std::uint64_t state : keys) {
        const Situation s(situation_width, state);
        for (int a = 0; a < actions_; ++a)
            for (int o = 0; o < opp_actions_; ++o) {
                std::snprintf(buf, sizeof(buf), "%s %d %d %.6f", s.to_string().c_str(), a, o, q(state, a, o));
                out << buf << '\n';
            }
    }
}

void minimax_q_update(JointQTable& table, std::uint64_t s, int a, int o, double r, std::uint64_t s_next,
                      bool terminal, double alpha, double discount) {
    const double bootstrap = terminal ? 0.0 : table.value(s_next);
    table.add_q(s, a, o, alpha * (r + discount * bootstrap - table.q(s, a, o)));
    table.refresh_value(s);
}

void minimax_sarsa_update(JointQTable& table, std::uint64_t s, int a, int o, double r, std::uint64_t s_next,
                          int a_next, int o_next, bool terminal, double alpha, double discount) {
    const double bootstrap = terminal ? 0.0 : table.q(s_next, a_next, o_next);
    table.add_q(s, a, o, alpha * (r + discount * bootstrap - table.q(s, a, o)));
    table.refresh_value(s);
}

void TableTraces::record(std::uint64_t s, int a, int o) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->first.s == s)
            it = entries_.erase(it);
        else
            ++it;
    }
    entries_[Key{s, a, o}] = 1.0;
}

void TableTraces::decay(double lambda, double discount, double threshold) {
    const double factor = lambda * discount;
    for (auto it = entries_.begin(); it != entries_.end();) {
        it->second *= factor;
        if (it->second < threshold)
            it = entries_.erase(it);
        else
            ++it;
    }
}

void TableTraces::apply(JointQTable& table, double alpha, double td_error) const {
    for (const auto& [key, e] : entries_) {
        table.add_q(key.s, key.a, key.o, alpha * td_error * e);
        table.refresh_value(key.s);
    }
}

double TableTraces::value_of(std::uint64_t s, int a, int o) const {
    auto it = entries_.find(Key{s, a, o});
    return it == entries_.end() ? 0.0 : it->second;
}

}  // namespace hamxcs
