#include "hamxcs/eligibility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hamxcs {

void TraceSet::record(const Situation& s, int action, int opp_action) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->first.situation_bits == s.raw() && it->first.width == s.width())
            it = entries_.erase(it);
        else
            ++it;
    }
    entries_[TraceKey{s.raw(), s.width(), action, opp_action}] = 1.0;
}

void TraceSet::decay(double lambda, double gamma, double threshold) {
    if (lambda <= 0.0 || lambda >= 1.0) throw std::invalid_argument("trace decay must lie in (0, 1)");
    if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("discount must lie in [0, 1)");
    const double factor = lambda * gamma;
    for (auto it = entries_.begin(); it != entries_.end();) {
        it->second *= factor;
        if (it->second < threshold)
            it = entries_.erase(it);
        else
            ++it;
    }
}

double TraceSet::value_of(const Situation& s, int action, int opp_action) const {
    auto it = entries_.find(TraceKey{s.raw(), s.width(), action, opp_action});
    return it == entries_.end() ? 0.0 : it->second;
}

std::vector<TraceEntry> TraceSet::ordered_entries() const {
    std::vector<TraceEntry> out;
    out.reserve(entries_.size());
    for (const auto& [key, e] : entries_) out.push_back(TraceEntry{key, e});
    std::sort(out.begin(), out.end(), [](const TraceEntry& a, const TraceEntry& b) {
        if (a.eligibility != b.eligibility) return a.eligibility > b.eligibility;
        if (a.key.situation_bits != b.key.situation_bits) return a.key.situation_bits < b.key.situation_bits;
        if (a.key.action != b.key.action) return a.key.action < b.key.action;
        return a.key.opp_action < b.key.opp_action;
    });
    return out;
}

void apply_trace_updates(const TraceSet& traces, Population& pop, double target, double phi_prev,
                         const ActionSet& exclude, const EngineParams& params) {
    const double td = target - phi_prev;
    const double abs_td = std::abs(td);

    for (const TraceEntry& entry : traces.ordered_entries()) {
        const Situation s(entry.key.width, entry.key.situation_bits);
        std::vector<ClassifierPtr> set;
        for (const auto& cl : pop.members()) {
            if (cl->action != entry.key.action) continue;
            if (!matches(cl->condition, s)) continue;
            if (exclude.contains(cl.get())) continue;
            set.push_back(cl);
        }
        if (set.empty()) continue;

        double fitness_sum = 0.0;
        for (const auto& cl : set) fitness_sum += cl->fitness;

        const std::size_t o = static_cast<std::size_t>(entry.key.opp_action);
        for (const auto& cl : set) {
            if (o >= cl->prediction.size()) throw std::invalid_argument("trace opponent action out of range");
            const double share = cl->fitness / fitness_sum * entry.eligibility;
            cl->prediction[o] += params.beta_trace_prediction * td * share;
            cl->error += params.beta_trace_error * (abs_td - cl->error) * share;
        }
    }
}

void dump_traces(const TraceSet& traces, const std::vector<std::string>& agent_labels,
                 const std::vector<std::string>& opp_labels, std::ostream& out) {
    char buf[32];
    for (const TraceEntry& entry : traces.ordered_entries()) {
        const Situation s(entry.key.width, entry.key.situation_bits);
        out << s.to_string() << ' ';
        if (static_cast<std::size_t>(entry.key.action) < agent_labels.size())
            out << agent_labels[static_cast<std::size_t>(entry.key.action)];
        else
            out << entry.key.action;
        out << ' ';
        if (static_cast<std::size_t>(entry.key.opp_action) < opp_labels.size())
            out << opp_labels[static_cast<std::size_t>(entry.key.opp_action)];
        else
            out << entry.key.opp_action;
        std::snprintf(buf, sizeof(buf), " %.6f", entry.eligibility);
        out << buf << '\n';
    }
}

}  // namespace hamxcs
