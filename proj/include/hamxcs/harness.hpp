#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hamxcs/agents.hpp"
#include "hamxcs/game.hpp"
#include "hamxcs/params.hpp"
#include "hamxcs/qtable.hpp"

namespace hamxcs {

struct ExperimentConfig {
    std::string environment = "thief_hunter";  // thief_hunter | hexcer
    std::string agent = "hamxcs";
    std::string opponent = "minimax_q";
    std::string selection_mode = "pareto";  // single | summed | pareto
    int sessions = 5;
    int matches = 500;
    int games = 10;
    int step_limit = 50;
    std::uint64_t seed = 1;
    std::string out_dir = "results";
    std::string board_file;  // optional board/map override

    bool use_heuristics = true;
    bool use_traces = true;
    int model_hidden_units = 100;
    int model_passes = 10;
    double model_learning_rate = 0.0001;

    EngineParams engine;
    BaselineParams baseline;

    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json_text() const;
    void validate() const;
};

struct MatchRecord {
    int session = 0;
    int match = 0;
    int agent_wins = 0;
    int opponent_wins = 0;
    int draws = 0;
    long steps = 0;
    int net_wins = 0;

    bool operator==(const MatchRecord&) const = default;
};

struct CurvePoint {
    int match = 0;
    double mean_net_wins = 0.0;
    double std_net_wins = 0.0;
    double mean_accumulated = 0.0;
};

struct ExperimentResult {
    std::vector<MatchRecord> records;
    std::vector<std::optional<PopulationCensus>> agent_census;  // one per session
    std::string final_population_snapshot;                      // last session's agent
    double wall_seconds = 0.0;
};

std::unique_ptr<Game> make_game(const ExperimentConfig& cfg);
std::unique_ptr<Agent> make_agent(const std::string& spec, Perspective side, const Game& env,
                                  const ExperimentConfig& cfg, Rng& init_rng);

// Plays matches x games with both learners updating each step.
// Deterministic given (config, session_seed).
std::vector<MatchRecord> run_session(const ExperimentConfig& cfg, int session_index, std::uint64_t session_seed,
                                     std::optional<PopulationCensus>* census_out = nullptr,
                                     std::string* population_out = nullptr);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Per-match-index mean and sample standard deviation of net wins plus the
// cumulative mean curve. Sessions must hold equal match counts.
std::vector<CurvePoint> aggregate(const std::vector<MatchRecord>& records);

// Accumulated net wins per session at the final match.
std::vector<double> per_session_accumulated(const std::vector<MatchRecord>& records);

void emit_results(const ExperimentResult& result, const std::vector<CurvePoint>& curves, const std::string& out_dir);

std::vector<MatchRecord> parse_matches_csv(const std::string& path);
std::vector<double> csv_column(const std::string& path, const std::string& column);

}  // namespace hamxcs
