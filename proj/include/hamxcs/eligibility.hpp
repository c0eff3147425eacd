#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "hamxcs/classifier.hpp"
#include "hamxcs/engine.hpp"
#include "hamxcs/params.hpp"
#include "hamxcs/ternary.hpp"

namespace hamxcs {

struct TraceKey {
    std::uint64_t situation_bits = 0;
    int width = 0;
    int action = 0;
    int opp_action = 0;

    bool operator==(const TraceKey&) const = default;
};

struct TraceKeyHash {
    std::size_t operator()(const TraceKey& k) const {
        std::uint64_t h = k.situation_bits;
        h = split_mix64(h ^ (static_cast<std::uint64_t>(k.width) << 32));
        h = split_mix64(h ^ (static_cast<std::uint64_t>(static_cast<unsigned>(k.action)) << 16) ^
                        static_cast<std::uint64_t>(static_cast<unsigned>(k.opp_action)));
        return static_cast<std::size_t>(h);
    }
};

struct TraceEntry {
    TraceKey key;
    double eligibility = 0.0;
};

// Pruned map from (situation, agent action, opponent action) tuples to
// eligibility values; only values at or above the pruning threshold are
// kept once decay has run.
class TraceSet {
  public:
    // Sets the executed tuple's eligibility to 1 and drops every other
    // entry stored for the same situation.
    void record(const Situation& s, int action, int opp_action);

    // Multiplies every eligibility by lambda * gamma and prunes entries
    // falling below `threshold`.
    void decay(double lambda, double gamma, double threshold);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    void clear() { entries_.clear(); }
    double value_of(const Situation& s, int action, int opp_action) const;  // 0 when absent

    // Entries ordered by descending eligibility; ties break on the key so
    // iteration order is reproducible.
    std::vector<TraceEntry> ordered_entries() const;

  private:
    std::unordered_map<TraceKey, double, TraceKeyHash> entries_;
};

// Retroactive reinforcement of classifiers matching the stored traces:
// for each trace tuple, every population classifier matching (s, a) and
// not in `exclude` has its prediction component p[o] and error nudged by
// the trace-weighted, fitness-shared TD error against phi_prev. Fitness,
// experience, numerosity, and action-set size are never touched.
void apply_trace_updates(const TraceSet& traces, Population& pop, double target, double phi_prev,
                         const ActionSet& exclude, const EngineParams& params);

// One line per entry: situation bits, action labels, eligibility at six
// decimal places.
void dump_traces(const TraceSet& traces, const std::vector<std::string>& agent_labels,
                 const std::vector<std::string>& opp_labels, std::ostream& out);

}  // namespace hamxcs
