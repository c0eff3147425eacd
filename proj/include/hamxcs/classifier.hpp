#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "hamxcs/ternary.hpp"

namespace hamxcs {

// One macroclassifier: a ternary condition and an agent action mapped to a
// per-opponent-action payoff prediction vector, one heuristic vector per
// provided heuristic policy, plus the usual accuracy bookkeeping.
struct Classifier {
    Condition condition;
    int action = 0;
    std::vector<double> prediction;               // indexed by opponent action
    std::vector<std::vector<double>> heuristics;  // [heuristic][opponent action]
    double error = 0.0;
    double fitness = 1.0;
    int numerosity = 1;
    long experience = 0;
    long time_stamp = 0;
    double action_set_size = 1.0;
};

using ClassifierPtr = std::shared_ptr<Classifier>;

// Fixed-capacity multiset of macroclassifiers. Capacity bounds the total
// numerosity, not the macroclassifier count; identical (condition, action)
// pairs are always merged on insertion.
class Population {
  public:
    explicit Population(int capacity) : capacity_(capacity) {}

    const std::vector<ClassifierPtr>& members() const { return members_; }
    int capacity() const { return capacity_; }
    long clock() const { return clock_; }
    void advance_clock() { ++clock_; }

    long total_numerosity() const;
    std::size_t macro_count() const { return members_.size(); }
    std::size_t used_count() const;  // macroclassifiers with experience > 0

    // Merges into an existing member with identical (condition, action) if
    // one exists, otherwise appends. Returns the surviving classifier.
    ClassifierPtr insert(Classifier cl);

    void remove(const ClassifierPtr& cl);
    void clear() { members_.clear(); }

    bool contains_duplicates() const;

  private:
    std::vector<ClassifierPtr> members_;
    int capacity_ = 0;
    long clock_ = 0;
};

// One classifier per line: condition, action label, prediction vector,
// heuristic vectors, error (2 d.p.), fitness (2 d.p.), numerosity,
// experience. Vector components are printed at one decimal place.
void write_population_snapshot(const Population& pop, const std::vector<std::string>& action_labels,
                               std::ostream& out);

}  // namespace hamxcs
