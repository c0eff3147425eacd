#include "hamxcs/classifier.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

namespace hamxcs {

long Population::total_numerosity() const {
    long total = 0;
    for (const auto& cl : members_) total += cl->numerosity;
    return total;
}

std::size_t Population::used_count() const {
    return static_cast<std::size_t>(
        std::count_if(members_.begin(), members_.end(), [](const ClassifierPtr& cl) { return cl->experience > 0; }));
}

ClassifierPtr Population::insert(Classifier cl) {
    for (const auto& existing : members_) {
        if (existing->action == cl.action && existing->condition == cl.condition) {
            existing->numerosity += cl.numerosity;
            return existing;
        }
    }
    members_.push_back(std::make_shared<Classifier>(std::move(cl)));
    return members_.back();
}

void Population::remove(const ClassifierPtr& cl) {
    auto it = std::find(members_.begin(), members_.end(), cl);
    if (it == members_.end()) throw std::invalid_argument("classifier not in population");
    members_.erase(it);
}

bool Population::contains_duplicates() const {
    std::unordered_set<std::string> seen;
    for (const auto& cl : members_) {
        std::string key = cl->condition.to_string() + ":" + std::to_string(cl->action);
        if (!seen.insert(std::move(key)).second) return true;
    }
    return false;
}

namespace {

void write_vector(std::ostream& out, const std::vector<double>& values) {
    out << '[';
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.1f", values[i]);
        if (i > 0) out << ' ';
        out << buf;
    }
    out << ']';
}

}  // namespace

void write_population_snapshot(const Population& pop, const std::vector<std::string>& action_labels,
                               std::ostream& out) {
    char buf[32];
    for (const auto& cl : pop.members()) {
        out << cl->condition.to_string() << ' ';
        if (cl->action >= 0 && static_cast<std::size_t>(cl->action) < action_labels.size())
            out << action_labels[static_cast<std::size_t>(cl->action)];
        else
            out << cl->action;
        out << ' ';
        write_vector(out, cl->prediction);
        for (const auto& h : cl->heuristics) {
            out << ' ';
            write_vector(out, h);
        }
        std::snprintf(buf, sizeof(buf), " %.2f %.2f ", cl->error, cl->fitness);
        out << buf << cl->numerosity << ' ' << cl->experience << '\n';
    }
}

}  // namespace hamxcs
