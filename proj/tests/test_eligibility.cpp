#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "hamxcs/eligibility.hpp"

using namespace hamxcs;

namespace {

ClassifierPtr insert_cl(Population& pop, const std::string& cond, int action, std::vector<double> p, double fitness,
                        double error = 0.0) {
    Classifier cl;
    cl.condition = Condition::from_string(cond);
    cl.action = action;
    cl.prediction = std::move(p);
    cl.fitness = fitness;
    cl.error = error;
    return pop.insert(std::move(cl));
}

}  // namespace

TEST_CASE("recording keeps one tuple per situation") {
    TraceSet traces;
    const Situation s = Situation::from_string("1100");
    const Situation other = Situation::from_string("0011");

    traces.record(s, 0, 1);
    CHECK(traces.size() == 1);
    CHECK(traces.value_of(s, 0, 1) == 1.0);

    traces.record(other, 2, 2);
    traces.record(s, 1, 0);  // same situation: previous tuple dropped
    CHECK(traces.size() == 2);
    CHECK(traces.value_of(s, 0, 1) == 0.0);
    CHECK(traces.value_of(s, 1, 0) == 1.0);
    CHECK(traces.value_of(other, 2, 2) == 1.0);
}

TEST_CASE("the published decay chain prunes on the third pass") {
    TraceSet traces;
    const Situation s = Situation::from_string("1010");
    traces.record(s, 0, 0);

    traces.decay(0.05, 0.71, 0.001);
    CHECK(traces.value_of(s, 0, 0) == doctest::Approx(0.0355).epsilon(1e-12));
    traces.decay(0.05, 0.71, 0.001);
    CHECK(traces.value_of(s, 0, 0) == doctest::Approx(0.00126025).epsilon(1e-12));
    traces.decay(0.05, 0.71, 0.001);
    CHECK(traces.empty());  // 4.47e-5 falls below the threshold
}

TEST_CASE("decay on an empty set is a no-op") {
    TraceSet traces;
    traces.decay(0.05, 0.71, 0.001);
    CHECK(traces.empty());
}

TEST_CASE("every stored value stays at or above the pruning threshold") {
    Rng rng(1);
    TraceSet traces;
    for (int step = 0; step < 500; ++step) {
        const Situation s(8, static_cast<std::uint64_t>(uniform_int(rng, 0, 255)));
        traces.record(s, uniform_int(rng, 0, 3), uniform_int(rng, 0, 3));
        if (step % 2 == 0) traces.decay(0.5, 0.9, 0.01);
        for (const auto& entry : traces.ordered_entries()) {
            CHECK(entry.eligibility >= 0.01);
            CHECK(entry.eligibility <= 1.0);
        }
    }
}

TEST_CASE("trace updates equal a straight-line recomputation") {
    EngineParams params;
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        Population pop(1000);
        std::vector<ClassifierPtr> classifiers;
        for (int i = 0; i < 20; ++i) {
            const Situation seed(6, static_cast<std::uint64_t>(uniform_int(rng, 0, 63)));
            Classifier cl;
            cl.condition = covering_condition(seed, 0.5, rng);
            cl.action = uniform_int(rng, 0, 2);
            cl.prediction = {uniform01(rng) * 10, uniform01(rng) * 10, uniform01(rng) * 10};
            cl.fitness = 0.05 + uniform01(rng);
            cl.error = uniform01(rng);
            classifiers.push_back(pop.insert(std::move(cl)));
        }

        TraceSet traces;
        const Situation s1(6, static_cast<std::uint64_t>(uniform_int(rng, 0, 63)));
        const Situation s2(6, static_cast<std::uint64_t>(uniform_int(rng, 0, 63)));
        traces.record(s1, uniform_int(rng, 0, 2), uniform_int(rng, 0, 2));
        traces.decay(0.5, 0.9, 0.001);
        traces.record(s2, uniform_int(rng, 0, 2), uniform_int(rng, 0, 2));

        ActionSet exclude;
        exclude.action = 0;
        for (const auto& cl : pop.members())
            if (uniform01(rng) < 0.2) exclude.members.push_back(cl);

        const double target = uniform01(rng) * 100;
        const double phi = uniform01(rng) * 100;

        // Straight-line oracle over value copies, processed in the same
        // descending-eligibility order.
        std::map<const Classifier*, std::pair<std::vector<double>, double>> expected;
        for (const auto& cl : pop.members()) expected[cl.get()] = {cl->prediction, cl->error};
        for (const auto& entry : traces.ordered_entries()) {
            const Situation s(entry.key.width, entry.key.situation_bits);
            std::vector<const Classifier*> set;
            double f_sum = 0;
            for (const auto& cl : pop.members()) {
                if (cl->action != entry.key.action) continue;
                const std::string cond = cl->condition.to_string();
                const std::string bits = s.to_string();
                bool ok = true;
                for (std::size_t i = 0; i < cond.size(); ++i)
                    if (cond[i] != '#' && cond[i] != bits[i]) ok = false;
                if (!ok) continue;
                if (exclude.contains(cl.get())) continue;
                set.push_back(cl.get());
                f_sum += cl->fitness;
            }
            for (const Classifier* cl : set) {
                auto& [p, err] = expected[cl];
                const double share = cl->fitness / f_sum * entry.eligibility;
                p[static_cast<std::size_t>(entry.key.opp_action)] += params.beta_trace_prediction * (target - phi) * share;
                err += params.beta_trace_error * (std::abs(target - phi) - err) * share;
            }
        }

        apply_trace_updates(traces, pop, target, phi, exclude, params);

        for (const auto& cl : pop.members()) {
            const auto& [p, err] = expected[cl.get()];
            for (std::size_t o = 0; o < 3; ++o) CHECK(cl->prediction[o] == doctest::Approx(p[o]).epsilon(1e-12));
            CHECK(cl->error == doctest::Approx(err).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero TD error leaves predictions untouched and shrinks error") {
    EngineParams params;
    Population pop(100);
    auto cl = insert_cl(pop, "####", 1, {3.0, 4.0}, 0.8, 0.5);
    TraceSet traces;
    traces.record(Situation::from_string("1011"), 1, 0);

    ActionSet exclude;
    exclude.action = 1;
    apply_trace_updates(traces, pop, 42.0, 42.0, exclude, params);
    CHECK(cl->prediction[0] == 3.0);
    CHECK(cl->prediction[1] == 4.0);
    CHECK(cl->error < 0.5);
}

TEST_CASE("a single matching classifier takes the full-weight update") {
    EngineParams params;
    Population pop(100);
    auto cl = insert_cl(pop, "1###", 0, {0.0, 0.0}, 0.4, 0.0);
    TraceSet traces;
    traces.record(Situation::from_string("1111"), 0, 1);

    ActionSet exclude;
    apply_trace_updates(traces, pop, 10.0, 4.0, exclude, params);
    CHECK(cl->prediction[1] == doctest::Approx(params.beta_trace_prediction * 6.0));
    CHECK(cl->error == doctest::Approx(params.beta_trace_error * 6.0));
}

TEST_CASE("excluded members are never touched twice") {
    EngineParams params;
    Population pop(100);
    auto reinforced = insert_cl(pop, "####", 0, {1.0, 1.0}, 0.5, 0.2);
    auto fresh = insert_cl(pop, "1###", 0, {1.0, 1.0}, 0.5, 0.2);

    TraceSet traces;
    traces.record(Situation::from_string("1100"), 0, 0);

    ActionSet exclude;
    exclude.action = 0;
    exclude.members.push_back(reinforced);

    apply_trace_updates(traces, pop, 5.0, 1.0, exclude, params);
    CHECK(reinforced->prediction[0] == 1.0);
    CHECK(fresh->prediction[0] != 1.0);
}

TEST_CASE("only predictions and errors change") {
    EngineParams params;
    Population pop(100);
    auto cl = insert_cl(pop, "##", 2, {0.0, 5.0}, 0.33, 0.1);
    cl->experience = 7;
    cl->numerosity = 3;
    cl->action_set_size = 2.5;
    TraceSet traces;
    traces.record(Situation::from_string("01"), 2, 1);

    ActionSet exclude;
    apply_trace_updates(traces, pop, 20.0, 3.0, exclude, params);
    CHECK(cl->fitness == 0.33);
    CHECK(cl->experience == 7);
    CHECK(cl->numerosity == 3);
    CHECK(cl->action_set_size == 2.5);
    CHECK(cl->prediction[1] != 5.0);
}

TEST_CASE("trace dump format") {
    TraceSet traces;
    traces.record(Situation::from_string("1100"), 0, 1);
    std::ostringstream out;
    dump_traces(traces, {"Up", "Down"}, {"Left", "Right"}, out);
    CHECK(out.str() == "1100 Up Right 1.000000\n");
}
