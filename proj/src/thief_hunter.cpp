#include "hamxcs/thief_hunter.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hamxcs {

namespace {

const char* default_map_text = R"(grid 7 7
row . . . X | . . .
row . . . X | . . G
row . . . X | . . .
row A . . . | . . O
row . . . X | . . .
row . . . X | . . G
row . . . X | . . .
)";

const std::vector<std::string> grid_action_names = {"Up", "Down", "Left", "Right", "Standby"};

GridPos offset(const GridPos& p, int action) {
    switch (action) {
        case grid_up: return {p.row - 1, p.col};
        case grid_down: return {p.row + 1, p.col};
        case grid_left: return {p.row, p.col - 1};
        case grid_right: return {p.row, p.col + 1};
        case grid_standby: return p;
        default: throw std::invalid_argument("invalid grid action");
    }
}

}  // namespace

GridMap GridMap::parse(std::istream& in) {
    GridMap map;
    std::string line;
    bool saw_header = false;
    int parsed_rows = 0;

    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "grid") {
            if (!(ls >> map.rows_ >> map.cols_) || map.rows_ <= 0 || map.cols_ <= 0)
                throw std::runtime_error("bad grid header");
            map.obstacle_.assign(static_cast<std::size_t>(map.rows_) * map.cols_, 0);
            saw_header = true;
        } else if (tag == "row") {
            if (!saw_header) throw std::runtime_error("row before header");
            const int row = parsed_rows++;
            if (row >= map.rows_) throw std::runtime_error("too many rows");
            int col = 0;
            char ch;
            while (ls >> ch) {
                if (ch == '|') {
                    if (map.midline_col_ >= 0 && map.midline_col_ != col)
                        throw std::runtime_error("inconsistent midline position");
                    map.midline_col_ = col;
                    continue;
                }
                if (col >= map.cols_) throw std::runtime_error("row wider than declared");
                const GridPos pos{row, col};
                switch (ch) {
                    case '.': break;
                    case 'X': map.obstacle_[static_cast<std::size_t>(row) * map.cols_ + col] = 1; break;
                    case 'G': map.goals_.push_back(pos); break;
                    case 'A':
                        if (map.agent_start_.row >= 0) throw std::runtime_error("duplicate agent start");
                        map.agent_start_ = pos;
                        break;
                    case 'O':
                        if (map.opponent_start_.row >= 0) throw std::runtime_error("duplicate opponent start");
                        map.opponent_start_ = pos;
                        break;
                    default: throw std::runtime_error(std::string("invalid map character '") + ch + "'");
                }
                ++col;
            }
            if (col != map.cols_) throw std::runtime_error("row narrower than declared");
        } else {
            throw std::runtime_error("unknown map directive '" + tag + "'");
        }
    }

    if (!saw_header) throw std::runtime_error("missing grid header");
    if (parsed_rows != map.rows_) throw std::runtime_error("row count does not match header");
    if (map.agent_start_.row < 0 || map.opponent_start_.row < 0) throw std::runtime_error("missing initial positions");
    if (map.goals_.empty()) throw std::runtime_error("map declares no goal cells");
    if (map.midline_col_ < 0) throw std::runtime_error("map declares no midline");
    if (map.opponent_start_.col < map.midline_col_) throw std::runtime_error("hunter must start in the right half");
    return map;
}

GridMap GridMap::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

GridMap GridMap::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file '" + path + "'");
    return parse(in);
}

const GridMap& GridMap::default_map() {
    static const GridMap map = parse_string(default_map_text);
    return map;
}

bool GridMap::in_bounds(const GridPos& p) const {
    return p.row >= 0 && p.row < rows_ && p.col >= 0 && p.col < cols_;
}

bool GridMap::obstacle(const GridPos& p) const {
    return obstacle_[static_cast<std::size_t>(p.row) * cols_ + p.col] != 0;
}

bool GridMap::goal(const GridPos& p) const {
    for (const auto& g : goals_)
        if (g == p) return true;
    return false;
}

ThiefHunterGame::ThiefHunterGame(const GridMap& map, int step_limit) : map_(map), step_limit_(step_limit) {
    if (step_limit <= 0) throw std::invalid_argument("step limit must be positive");
}

void ThiefHunterGame::reset(Rng&) {
    state_.agent = map_.agent_start();
    state_.opponent = map_.opponent_start();
    steps_ = 0;
    terminal_ = false;
}

void ThiefHunterGame::set_state(const ThiefHunterState& s) {
    if (!map_.in_bounds(s.agent) || !map_.in_bounds(s.opponent)) throw std::invalid_argument("position off the grid");
    if (map_.obstacle(s.agent) || map_.obstacle(s.opponent)) throw std::invalid_argument("position inside an obstacle");
    if (s.opponent.col < map_.midline_col()) throw std::invalid_argument("hunter must stay in the right half");
    state_ = s;
    steps_ = 0;
    terminal_ = false;
}

GridPos ThiefHunterGame::move_target(const GridPos& from, int action, bool hunter) const {
    const GridPos to = offset(from, action);
    if (!map_.in_bounds(to) || map_.obstacle(to)) return from;
    if (hunter && to.col < map_.midline_col()) return from;
    return to;
}

bool ThiefHunterGame::legal_agent_move(const GridPos& from, int action) const {
    const GridPos to = offset(from, action);
    return map_.in_bounds(to) && !map_.obstacle(to);
}

StepResult ThiefHunterGame::step(int agent_action, int opp_action, Rng&) {
    if (terminal_) throw std::logic_error("step called on a finished game");
    if (agent_action < 0 || agent_action >= grid_action_count || opp_action < 0 || opp_action >= grid_action_count)
        throw std::invalid_argument("invalid grid action index");
    ++steps_;

    const GridPos agent_from = state_.agent;
    const GridPos opp_from = state_.opponent;
    const GridPos agent_to = move_target(agent_from, agent_action, false);
    const GridPos opp_to = move_target(opp_from, opp_action, true);

    const bool caught = agent_to == opp_to || (agent_to == opp_from && opp_to == agent_from);
    state_.agent = agent_to;
    state_.opponent = opp_to;

    if (caught) {
        terminal_ = true;
        return {-100.0, 100.0, true};
    }
    if (map_.goal(state_.agent)) {
        terminal_ = true;
        return {100.0, 0.0, true};
    }

    StepResult result;
    if (state_.agent.col < map_.midline_col()) result.agent_reward = -10.0;
    if (steps_ >= step_limit_) {
        terminal_ = true;
        result.terminal = true;
    }
    return result;
}

Situation encode_thief_hunter(const ThiefHunterState& state, Perspective p) {
    const GridPos& first = p == Perspective::agent ? state.agent : state.opponent;
    const GridPos& second = p == Perspective::agent ? state.opponent : state.agent;
    if (first.row >= 8 || first.col >= 8 || second.row >= 8 || second.col >= 8)
        throw std::invalid_argument("coordinate does not fit in three bits");
    Situation s(12, 0);
    s.encode_unsigned(0, static_cast<std::uint64_t>(first.row), 3);
    s.encode_unsigned(3, static_cast<std::uint64_t>(first.col), 3);
    s.encode_unsigned(6, static_cast<std::uint64_t>(second.row), 3);
    s.encode_unsigned(9, static_cast<std::uint64_t>(second.col), 3);
    return s;
}

ThiefHunterState decode_thief_hunter(const Situation& s) {
    if (s.width() != 12) throw std::invalid_argument("thief-and-hunter situations are 12 bits wide");
    ThiefHunterState state;
    state.agent.row = static_cast<int>(s.decode_unsigned(0, 3));
    state.agent.col = static_cast<int>(s.decode_unsigned(3, 3));
    state.opponent.row = static_cast<int>(s.decode_unsigned(6, 3));
    state.opponent.col = static_cast<int>(s.decode_unsigned(9, 3));
    return state;
}

Situation ThiefHunterGame::encode(Perspective p) const { return encode_thief_hunter(state_, p); }

const std::vector<std::string>& ThiefHunterGame::action_names() const { return grid_action_names; }

int manhattan(const GridPos& a, const GridPos& b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

std::pair<std::optional<int>, std::optional<int>> th_heuristics(const GridMap& map, const ThiefHunterState& state) {
    auto legal = [&map](const GridPos& from, int action) {
        const GridPos to = offset(from, action);
        return map.in_bounds(to) && !map.obstacle(to);
    };
    auto goal_distance = [&map](const GridPos& p) {
        int best = std::numeric_limits<int>::max();
        for (const auto& g : map.goals()) best = std::min(best, manhattan(p, g));
        return best;
    };

    std::optional<int> approach_goal;
    const int d0 = goal_distance(state.agent);
    for (int a = 0; a < grid_action_count; ++a) {
        if (!legal(state.agent, a)) continue;
        if (goal_distance(offset(state.agent, a)) < d0) { approach_goal = a; break; }
    }

    std::optional<int> avoid_opponent;
    if (state.agent.col >= map.midline_col()) {
        const int d0_opp = manhattan(state.agent, state.opponent);
        for (int a = 0; a < grid_action_count; ++a) {
            if (!legal(state.agent, a)) continue;
            if (manhattan(offset(state.agent, a), state.opponent) > d0_opp) { avoid_opponent = a; break; }
        }
    }
    return {approach_goal, avoid_opponent};
}

std::vector<std::optional<int>> ThiefHunterGame::heuristic_advice(Perspective p) const {
    if (p == Perspective::agent) {
        auto [approach, avoid] = th_heuristics(map_, state_);
        return {approach, avoid};
    }
    // Hunter side: close the Manhattan distance to the thief while staying
    // in the right half.
    std::optional<int> chase;
    const int d0 = manhattan(state_.opponent, state_.agent);
    for (int a = 0; a < grid_action_count; ++a) {
        const GridPos to = move_target(state_.opponent, a, true);
        if (to == state_.opponent && a != grid_standby) continue;
        if (manhattan(to, state_.agent) < d0) { chase = a; break; }
    }
    return {chase};
}

}  // namespace hamxcs
