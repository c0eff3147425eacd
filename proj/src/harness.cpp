#include "hamxcs/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hamxcs/baseline_agents.hpp"
#include "hamxcs/hamxcs_agent.hpp"
#include "hamxcs/hexcer.hpp"
#include "hamxcs/stats.hpp"
#include "hamxcs/thief_hunter.hpp"

namespace hamxcs {

using nlohmann::json;

namespace {

SelectionMode parse_selection_mode(const std::string& mode) {
    if (mode == "pareto") return SelectionMode::pareto;
    if (mode == "single" || mode == "summed") return SelectionMode::epsilon_greedy_single;
    throw std::invalid_argument("unknown selection mode '" + mode + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("environment", cfg.environment);
    get("agent", cfg.agent);
    get("opponent", cfg.opponent);
    get("selection_mode", cfg.selection_mode);
    get("sessions", cfg.sessions);
    get("matches", cfg.matches);
    get("games", cfg.games);
    get("step_limit", cfg.step_limit);
    get("seed", cfg.seed);
    get("out", cfg.out_dir);
    get("board_file", cfg.board_file);
    get("use_heuristics", cfg.use_heuristics);
    get("use_traces", cfg.use_traces);
    get("model_hidden_units", cfg.model_hidden_units);
    get("model_passes", cfg.model_passes);
    get("model_learning_rate", cfg.model_learning_rate);
    get("population_size", cfg.engine.population_limit);
    get("explore_rate", cfg.engine.explore_rate);
    get("kappa", cfg.engine.heuristic_weight);
    get("rho", cfg.engine.heuristic_magnitude);
    get("discount", cfg.engine.discount);
    get("trace_lambda", cfg.engine.trace_decay);
    get("baseline_explore_rate", cfg.baseline.explore_rate);
    get("baseline_discount", cfg.baseline.discount);
    get("baseline_trace_decay", cfg.baseline.trace_decay);
    get("hammq_weight", cfg.baseline.hammq_weight);
    get("hammq_magnitude", cfg.baseline.hammq_magnitude);
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["environment"] = environment;
    j["agent"] = agent;
    j["opponent"] = opponent;
    j["selection_mode"] = selection_mode;
    j["sessions"] = sessions;
    j["matches"] = matches;
    j["games"] = games;
    j["step_limit"] = step_limit;
    j["seed"] = seed;
    j["out"] = out_dir;
    j["board_file"] = board_file;
    j["use_heuristics"] = use_heuristics;
    j["use_traces"] = use_traces;
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    if (environment != "thief_hunter" && environment != "hexcer")
        throw std::invalid_argument("unknown environment '" + environment + "'");
    if (sessions < 1) throw std::invalid_argument("sessions must be >= 1");
    if (matches < 1) throw std::invalid_argument("matches must be >= 1");
    if (games < 1) throw std::invalid_argument("games per match must be >= 1");
    if (step_limit < 1) throw std::invalid_argument("step limit must be >= 1");
    parse_selection_mode(selection_mode);
}

std::unique_ptr<Game> make_game(const ExperimentConfig& cfg) {
    if (cfg.environment == "hexcer") {
        const HexBoard board = cfg.board_file.empty() ? HexBoard::default_board() : HexBoard::load_file(cfg.board_file);
        return std::make_unique<HexcerGame>(board, cfg.step_limit);
    }
    const GridMap map = cfg.board_file.empty() ? GridMap::default_map() : GridMap::load_file(cfg.board_file);
    return std::make_unique<ThiefHunterGame>(map, cfg.step_limit);
}

std::unique_ptr<Agent> make_agent(const std::string& spec, Perspective side, const Game& env,
                                  const ExperimentConfig& cfg, Rng& init_rng) {
    const int actions = env.action_count();
    if (spec == "hamxcs" || spec == "xcs") {
        HamxcsOptions options;
        options.selection_mode = parse_selection_mode(cfg.selection_mode);
        options.use_heuristics = cfg.use_heuristics && spec == "hamxcs";
        options.use_traces = cfg.use_traces && spec == "hamxcs";
        options.model_hidden_units = cfg.model_hidden_units;
        options.model_learning_rate = cfg.model_learning_rate;
        options.model_passes = cfg.model_passes;
        return std::make_unique<HamxcsAgent>(env.situation_width(), actions, actions, env.heuristic_count(side),
                                             cfg.engine, options, init_rng);
    }
    if (spec == "minimax_q") return std::make_unique<MinimaxQAgent>(actions, actions, cfg.baseline, false);
    if (spec == "minimax_q_lambda") return std::make_unique<MinimaxQAgent>(actions, actions, cfg.baseline, true);
    if (spec == "minimax_sarsa") return std::make_unique<MinimaxSarsaAgent>(actions, actions, cfg.baseline, false);
    if (spec == "minimax_sarsa_lambda") return std::make_unique<MinimaxSarsaAgent>(actions, actions, cfg.baseline, true);
    if (spec == "hammq") return std::make_unique<HammqAgent>(actions, actions, cfg.baseline);
    if (spec == "nscp") return std::make_unique<NscpAgent>(actions, actions, cfg.baseline);
    if (spec == "random") return std::make_unique<RandomAgent>(actions);
    if (spec == "standby") return std::make_unique<FixedActionAgent>(actions - 1);
    if (spec == "heuristic") return std::make_unique<AdviceFollowingAgent>(actions - 1);
    if (spec.rfind("fixed:", 0) == 0) {
        const int a = std::stoi(spec.substr(6));
        if (a < 0 || a >= actions) throw std::invalid_argument("fixed action out of range in '" + spec + "'");
        return std::make_unique<FixedActionAgent>(a);
    }
    throw std::invalid_argument("unknown agent spec '" + spec + "'");
}

std::vector<MatchRecord> run_session(const ExperimentConfig& cfg, int session_index, std::uint64_t session_seed,
                                     std::optional<PopulationCensus>* census_out, std::string* population_out) {
    cfg.validate();
    Rng env_rng = make_rng(session_seed, 0);
    Rng agent_rng = make_rng(session_seed, 1);
    Rng opp_rng = make_rng(session_seed, 2);
    Rng init_rng = make_rng(session_seed, 3);

    auto env = make_game(cfg);
    auto agent = make_agent(cfg.agent, Perspective::agent, *env, cfg, init_rng);
    auto opponent = make_agent(cfg.opponent, Perspective::opponent, *env, cfg, init_rng);

    std::vector<MatchRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.matches));

    for (int match = 0; match < cfg.matches; ++match) {
        MatchRecord rec;
        rec.session = session_index;
        rec.match = match;
        for (int game = 0; game < cfg.games; ++game) {
            env->reset(env_rng);
            while (!env->terminal()) {
                DecisionContext ctx_a{env->encode(Perspective::agent), env->heuristic_advice(Perspective::agent)};
                DecisionContext ctx_o{env->encode(Perspective::opponent), env->heuristic_advice(Perspective::opponent)};
                const int a = agent->choose(ctx_a, agent_rng);
                const int o = opponent->choose(ctx_o, opp_rng);
                const StepResult res = env->step(a, o, env_rng);
                DecisionContext next_a{env->encode(Perspective::agent), env->heuristic_advice(Perspective::agent)};
                DecisionContext next_o{env->encode(Perspective::opponent), env->heuristic_advice(Perspective::opponent)};
                agent->observe(ctx_a, a, o, res.agent_reward, next_a, res.terminal, agent_rng);
                opponent->observe(ctx_o, o, a, res.opponent_reward, next_o, res.terminal, opp_rng);
                rec.steps += 1;
                if (res.terminal) {
                    if (res.agent_reward > 0.0) rec.agent_wins += 1;
                    else if (res.opponent_reward > 0.0) rec.opponent_wins += 1;
                    else rec.draws += 1;
                }
            }
            agent->end_episode(agent_rng);
            opponent->end_episode(opp_rng);
        }
        rec.net_wins = rec.agent_wins - rec.opponent_wins;
        records.push_back(rec);
    }

    if (census_out) *census_out = agent->population_census();
    if (population_out) {
        std::ostringstream snapshot;
        agent->write_population(snapshot, env->action_names());
        *population_out = snapshot.str();
    }
    return records;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    for (int session = 0; session < cfg.sessions; ++session) {
        std::optional<PopulationCensus> census;
        std::string snapshot;
        auto records = run_session(cfg, session, derive_seed(cfg.seed, static_cast<std::uint64_t>(session)), &census,
                                   &snapshot);
        result.records.insert(result.records.end(), records.begin(), records.end());
        result.agent_census.push_back(census);
        if (session == cfg.sessions - 1) result.final_population_snapshot = std::move(snapshot);
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<CurvePoint> aggregate(const std::vector<MatchRecord>& records) {
    if (records.empty()) return {};
    int max_match = 0;
    int max_session = 0;
    for (const auto& r : records) {
        max_match = std::max(max_match, r.match);
        max_session = std::max(max_session, r.session);
    }
    const int matches = max_match + 1;
    const int sessions = max_session + 1;
    if (records.size() != static_cast<std::size_t>(matches) * sessions)
        throw std::invalid_argument("ragged records: sessions hold unequal match counts");

    std::vector<std::vector<double>> by_match(static_cast<std::size_t>(matches));
    for (const auto& r : records) by_match[static_cast<std::size_t>(r.match)].push_back(static_cast<double>(r.net_wins));

    std::vector<CurvePoint> curve(static_cast<std::size_t>(matches));
    double accumulated = 0.0;
    for (int m = 0; m < matches; ++m) {
        const auto& xs = by_match[static_cast<std::size_t>(m)];
        if (static_cast<int>(xs.size()) != sessions)
            throw std::invalid_argument("ragged records: sessions hold unequal match counts");
        CurvePoint& pt = curve[static_cast<std::size_t>(m)];
        pt.match = m;
        pt.mean_net_wins = sample_mean(xs);
        pt.std_net_wins = xs.size() > 1 ? sample_stddev(xs) : 0.0;
        accumulated += pt.mean_net_wins;
        pt.mean_accumulated = accumulated;
    }
    return curve;
}

std::vector<double> per_session_accumulated(const std::vector<MatchRecord>& records) {
    int max_session = 0;
    for (const auto& r : records) max_session = std::max(max_session, r.session);
    std::vector<double> totals(static_cast<std::size_t>(max_session + 1), 0.0);
    for (const auto& r : records) totals[static_cast<std::size_t>(r.session)] += static_cast<double>(r.net_wins);
    return totals;
}

void emit_results(const ExperimentResult& result, const std::vector<CurvePoint>& curves, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + out_dir + "': " + ec.message());

    const std::string matches_path = (fs::path(out_dir) / "matches.csv").string();
    {
        std::ofstream out(matches_path);
        if (!out) throw std::runtime_error("cannot write '" + matches_path + "'");
        out << "session,match,agent_wins,opponent_wins,draws,steps,net_wins\n";
        for (const auto& r : result.records)
            out << r.session << ',' << r.match << ',' << r.agent_wins << ',' << r.opponent_wins << ',' << r.draws
                << ',' << r.steps << ',' << r.net_wins << '\n';
    }

    const std::string curves_path = (fs::path(out_dir) / "curves.csv").string();
    {
        std::ofstream out(curves_path);
        if (!out) throw std::runtime_error("cannot write '" + curves_path + "'");
        out << "match,mean_net_wins,std_net_wins,mean_accumulated\n";
        char buf[128];
        for (const auto& pt : curves) {
            std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f", pt.match, pt.mean_net_wins, pt.std_net_wins,
                          pt.mean_accumulated);
            out << buf << '\n';
        }
    }

    const std::string summary_path = (fs::path(out_dir) / "summary.json").string();
    {
        json totals;
        long agent_wins = 0, opponent_wins = 0, draws = 0, steps = 0, net = 0;
        for (const auto& r : result.records) {
            agent_wins += r.agent_wins;
            opponent_wins += r.opponent_wins;
            draws += r.draws;
            steps += r.steps;
            net += r.net_wins;
        }
        totals["agent_wins"] = agent_wins;
        totals["opponent_wins"] = opponent_wins;
        totals["draws"] = draws;
        totals["steps"] = steps;
        totals["net_wins"] = net;

        json j;
        j["totals"] = totals;
        json census_list = json::array();
        for (const auto& census : result.agent_census) {
            if (census.has_value())
                census_list.push_back({{"macroclassifiers", census->macroclassifiers},
                                       {"used", census->used},
                                       {"numerosity", census->numerosity}});
            else
                census_list.push_back(nullptr);
        }
        j["macroclassifiers_per_session"] = census_list;
        j["wall_clock_seconds"] = result.wall_seconds;

        std::ofstream out(summary_path);
        if (!out) throw std::runtime_error("cannot write '" + summary_path + "'");
        out << j.dump(2) << '\n';
    }

    if (!result.final_population_snapshot.empty()) {
        const std::string pop_path = (fs::path(out_dir) / "population_final.txt").string();
        std::ofstream out(pop_path);
        if (!out) throw std::runtime_error("cannot write '" + pop_path + "'");
        out << result.final_population_snapshot;
    }
}

std::vector<MatchRecord> parse_matches_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv '" + path + "'");
    if (line != "session,match,agent_wins,opponent_wins,draws,steps,net_wins")
        throw std::runtime_error("unexpected matches.csv header in '" + path + "'");
    std::vector<MatchRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        MatchRecord r;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream fields(line);
        if (!(fields >> r.session >> r.match >> r.agent_wins >> r.opponent_wins >> r.draws >> r.steps >> r.net_wins))
            throw std::runtime_error("malformed row in '" + path + "': " + line);
        records.push_back(r);
    }
    return records;
}

std::vector<double> csv_column(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv '" + path + "'");

    std::vector<std::string> headers;
    {
        std::istringstream hs(line);
        std::string field;
        while (std::getline(hs, field, ',')) headers.push_back(field);
    }
    int index = -1;
    for (std::size_t i = 0; i < headers.size(); ++i)
        if (headers[i] == column) index = static_cast<int>(i);
    if (index < 0) throw std::runtime_error("column '" + column + "' not found in '" + path + "'");

    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        int i = 0;
        while (std::getline(ls, field, ',')) {
            if (i == index) values.push_back(std::stod(field));
            ++i;
        }
    }
    return values;
}

}  // namespace hamxcs
