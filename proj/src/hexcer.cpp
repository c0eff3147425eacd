#include "hamxcs/hexcer.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hamxcs {

namespace {

const char* default_board_text = R"(hexcer 7
row . . . . . . . .
row  . . . . . . .
row . . . . . . . .
row  A . . . . . O
row . . . . . . . .
row  . . . . . . .
row . . . . . . . .
goal left 3 0
goal right 3 6
ball random
)";

const std::vector<std::string> hex_action_names = {"UpperLeft", "UpperRight", "Right",   "LowerRight",
                                                   "LowerLeft", "Left",       "Standby"};

}  // namespace

HexBoard HexBoard::parse(std::istream& in) {
    HexBoard board;
    std::string line;
    bool saw_header = false;
    int declared_rows = 0;
    int left_goal_row = -1, left_goal_pos = -1, right_goal_row = -1, right_goal_pos = -1;

    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "hexcer") {
            if (!(ls >> declared_rows) || declared_rows <= 0) throw std::runtime_error("bad hexcer header");
            saw_header = true;
        } else if (tag == "row") {
            if (!saw_header) throw std::runtime_error("row before header");
            std::string cells;
            char ch;
            while (ls >> ch) {
                if (ch == ' ' || ch == '\t') continue;
                cells.push_back(ch);
            }
            if (cells.empty()) throw std::runtime_error("empty board row");
            const int row = static_cast<int>(board.row_widths_.size());
            board.row_start_.push_back(board.cell_count_);
            board.row_widths_.push_back(static_cast<int>(cells.size()));
            for (int pos = 0; pos < static_cast<int>(cells.size()); ++pos) {
                const int cell = board.cell_count_++;
                switch (cells[static_cast<std::size_t>(pos)]) {
                    case '.': break;
                    case 'A':
                        if (board.agent_start_ >= 0) throw std::runtime_error("duplicate agent start");
                        board.agent_start_ = cell;
                        break;
                    case 'O':
                        if (board.opponent_start_ >= 0) throw std::runtime_error("duplicate opponent start");
                        board.opponent_start_ = cell;
                        break;
                    case 'G':
                        if (pos == 0) { left_goal_row = row; left_goal_pos = pos; }
                        else if (pos == static_cast<int>(cells.size()) - 1) { right_goal_row = row; right_goal_pos = pos; }
                        else throw std::runtime_error("hexcer goal cells must sit at a row edge");
                        break;
                    default:
                        throw std::runtime_error(std::string("invalid hexcer cell character '") +
                                                 cells[static_cast<std::size_t>(pos)] + "'");
                }
            }
        } else if (tag == "goal") {
            std::string side;
            int row = 0, pos = 0;
            if (!(ls >> side >> row >> pos)) throw std::runtime_error("bad goal line");
            if (side == "left") { left_goal_row = row; left_goal_pos = pos; }
            else if (side == "right") { right_goal_row = row; right_goal_pos = pos; }
            else throw std::runtime_error("goal side must be left or right");
        } else if (tag == "ball") {
            std::string owner;
            if (!(ls >> owner)) throw std::runtime_error("bad ball line");
            if (owner == "random") board.ball_init_ = BallInit::random;
            else if (owner == "agent") board.ball_init_ = BallInit::agent;
            else if (owner == "opponent") board.ball_init_ = BallInit::opponent;
            else throw std::runtime_error("ball owner must be random, agent, or opponent");
        } else {
            throw std::runtime_error("unknown board directive '" + tag + "'");
        }
    }

    if (!saw_header) throw std::runtime_error("missing hexcer header");
    if (static_cast<int>(board.row_widths_.size()) != declared_rows)
        throw std::runtime_error("row count does not match header");
    if (board.agent_start_ < 0 || board.opponent_start_ < 0) throw std::runtime_error("missing initial positions");
    if (left_goal_row < 0 || right_goal_row < 0) throw std::runtime_error("missing goal definitions");
    board.left_goal_cell_ = board.cell_index(left_goal_row, left_goal_pos);
    board.right_goal_cell_ = board.cell_index(right_goal_row, right_goal_pos);
    return board;
}

HexBoard HexBoard::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

HexBoard HexBoard::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open board file '" + path + "'");
    return parse(in);
}

const HexBoard& HexBoard::default_board() {
    static const HexBoard board = parse_string(default_board_text);
    return board;
}

int HexBoard::cell_index(int row, int pos) const {
    if (row < 0 || row >= rows() || pos < 0 || pos >= row_width(row))
        throw std::out_of_range("cell coordinates off the board");
    return row_start_[static_cast<std::size_t>(row)] + pos;
}

std::pair<int, int> HexBoard::row_pos(int cell) const {
    if (cell < 0 || cell >= cell_count_) throw std::out_of_range("cell index off the board");
    int row = rows() - 1;
    while (row_start_[static_cast<std::size_t>(row)] > cell) --row;
    return {row, cell - row_start_[static_cast<std::size_t>(row)]};
}

std::optional<int> HexBoard::neighbor(int cell, int direction) const {
    const auto [row, pos] = row_pos(cell);
    // Odd rows are shifted half a cell right of even rows, so diagonal
    // offsets depend on row parity.
    const bool odd = (row % 2) != 0;
    int nrow = row, npos = pos;
    switch (direction) {
        case hex_upper_left:  nrow = row - 1; npos = odd ? pos : pos - 1; break;
        case hex_upper_right: nrow = row - 1; npos = odd ? pos + 1 : pos; break;
        case hex_right:       npos = pos + 1; break;
        case hex_lower_right: nrow = row + 1; npos = odd ? pos + 1 : pos; break;
        case hex_lower_left:  nrow = row + 1; npos = odd ? pos : pos - 1; break;
        case hex_left:        npos = pos - 1; break;
        case hex_standby:     return cell;
        default: throw std::invalid_argument("invalid hexcer action");
    }
    if (nrow < 0 || nrow >= rows() || npos < 0 || npos >= row_width(nrow)) return std::nullopt;
    return cell_index(nrow, npos);
}

HexcerGame::HexcerGame(const HexBoard& board, int step_limit) : board_(board), step_limit_(step_limit) {
    if (step_limit <= 0) throw std::invalid_argument("step limit must be positive");
}

void HexcerGame::reset(Rng& rng) {
    state_.agent_cell = board_.agent_start();
    state_.opponent_cell = board_.opponent_start();
    switch (board_.ball_init()) {
        case BallInit::agent: state_.ball = BallOwner::agent; break;
        case BallInit::opponent: state_.ball = BallOwner::opponent; break;
        case BallInit::random: state_.ball = uniform01(rng) < 0.5 ? BallOwner::agent : BallOwner::opponent; break;
    }
    steps_ = 0;
    terminal_ = false;
}

void HexcerGame::set_state(const HexcerState& s) {
    if (s.agent_cell < 0 || s.agent_cell >= board_.cell_count() || s.opponent_cell < 0 ||
        s.opponent_cell >= board_.cell_count())
        throw std::invalid_argument("cell index off the board");
    if (s.agent_cell == s.opponent_cell) throw std::invalid_argument("players must occupy distinct cells");
    state_ = s;
    steps_ = 0;
    terminal_ = false;
}

int HexcerGame::move_target(int cell, int action) const {
    const auto n = board_.neighbor(cell, action);
    return n.value_or(cell);  // off-board moves are ignored
}

bool HexcerGame::scoring_move(int cell, int action, Perspective side) const {
    if (side == Perspective::agent) return cell == board_.right_goal_cell() && action == hex_right;
    return cell == board_.left_goal_cell() && action == hex_left;
}

StepResult HexcerGame::step(int agent_action, int opp_action, Rng& rng) {
    if (terminal_) throw std::logic_error("step called on a finished game");
    if (agent_action < 0 || agent_action >= hex_action_count || opp_action < 0 || opp_action >= hex_action_count)
        throw std::invalid_argument("invalid hexcer action index");
    ++steps_;

    const bool agent_has_ball = state_.ball == BallOwner::agent;
    if (agent_has_ball && scoring_move(state_.agent_cell, agent_action, Perspective::agent)) {
        terminal_ = true;
        return {100.0, -100.0, true};
    }
    if (!agent_has_ball && scoring_move(state_.opponent_cell, opp_action, Perspective::opponent)) {
        terminal_ = true;
        return {-100.0, 100.0, true};
    }

    const int agent_target = move_target(state_.agent_cell, agent_action);
    const int opp_target = move_target(state_.opponent_cell, opp_action);
    if (agent_target == opp_target) {
        // Collision: both moves fail and the ball changes hands at random.
        state_.ball = uniform01(rng) < 0.5 ? BallOwner::agent : BallOwner::opponent;
    } else {
        state_.agent_cell = agent_target;
        state_.opponent_cell = opp_target;
    }

    if (steps_ >= step_limit_) {
        terminal_ = true;
        return {0.0, 0.0, true};
    }
    return {0.0, 0.0, false};
}

Situation encode_hexcer(const HexcerState& state, Perspective p) {
    if (state.agent_cell >= 64 || state.opponent_cell >= 64)
        throw std::invalid_argument("cell index does not fit in six bits");
    Situation s(12, 0);
    const int first = p == Perspective::agent ? state.agent_cell : state.opponent_cell;
    const int second = p == Perspective::agent ? state.opponent_cell : state.agent_cell;
    s.encode_unsigned(0, static_cast<std::uint64_t>(first), 6);
    s.encode_unsigned(6, static_cast<std::uint64_t>(second), 6);
    return s;
}

HexcerState decode_hexcer(const Situation& s, BallOwner ball) {
    if (s.width() != 12) throw std::invalid_argument("hexcer situations are 12 bits wide");
    HexcerState state;
    state.agent_cell = static_cast<int>(s.decode_unsigned(0, 6));
    state.opponent_cell = static_cast<int>(s.decode_unsigned(6, 6));
    state.ball = ball;
    return state;
}

Situation HexcerGame::encode(Perspective p) const { return encode_hexcer(state_, p); }

const std::vector<std::string>& HexcerGame::action_names() const { return hex_action_names; }

std::optional<int> HexcerGame::rightward_advice(int cell, bool has_ball, Perspective side) const {
    const int toward_goal = side == Perspective::agent ? hex_right : hex_left;
    if (board_.neighbor(cell, toward_goal).has_value()) return toward_goal;
    if (has_ball && scoring_move(cell, toward_goal, side)) return toward_goal;
    return std::nullopt;
}

std::vector<std::optional<int>> HexcerGame::heuristic_advice(Perspective p) const {
    const int cell = p == Perspective::agent ? state_.agent_cell : state_.opponent_cell;
    const bool has_ball = (state_.ball == BallOwner::agent) == (p == Perspective::agent);
    return {rightward_advice(cell, has_ball, p)};
}

}  // namespace hamxcs
