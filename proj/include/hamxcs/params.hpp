#pragma once

namespace hamxcs {

// Learning-cycle parameters. Defaults follow the standard initialization
// used throughout the experiments; anything here can be overridden per run.
struct EngineParams {
    int population_limit = 500;  // N, max total numerosity

    // Widrow-Hoff learning rates: prediction, error, fitness, and the two
    // trace-driven updates.
    double beta_prediction = 0.15;
    double beta_error = 0.15;
    double beta_fitness = 0.15;
    double beta_trace_prediction = 0.15;
    double beta_trace_error = 0.15;

    double accuracy_coeff = 0.1;    // alpha in the accuracy falloff
    double error_threshold = 0.01;  // epsilon_0
    double accuracy_power = 5.0;    // nu
    double discount = 0.71;         // gamma

    long ga_threshold = 35;          // theta_GA
    long deletion_threshold = 20;    // theta_del
    long subsumption_threshold = 20; // theta_sub
    int min_actions = 0;             // theta_mna; 0 means "all actions"

    double fitness_fraction = 0.1;  // delta, deletion-vote fitness cutoff
    double crossover_prob = 0.75;   // chi
    double mutation_prob = 0.03;    // mu
    double wildcard_prob = 0.33;    // P#

    double heuristic_weight = 1.0;     // kappa
    double heuristic_magnitude = 10.0; // rho
    double explore_rate = 0.2;

    double init_prediction = 0.00001;
    double init_heuristic = 0.00001;
    double init_error = 0.00001;
    double init_fitness = 0.00001;

    double trace_decay = 0.05;      // lambda
    double trace_threshold = 0.001; // theta_et

    int effective_min_actions(int action_count) const {
        return min_actions > 0 ? min_actions : action_count;
    }
};

}  // namespace hamxcs
