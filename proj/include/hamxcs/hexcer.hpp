#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hamxcs/game.hpp"

namespace hamxcs {

// Hexcer move indices, pointy-top hexes in horizontal rows.
enum HexAction : int {
    hex_upper_left = 0,
    hex_upper_right = 1,
    hex_right = 2,
    hex_lower_right = 3,
    hex_lower_left = 4,
    hex_left = 5,
    hex_standby = 6,
};
inline constexpr int hex_action_count = 7;

enum class BallOwner { agent, opponent };
enum class BallInit { random, agent, opponent };

struct HexcerState {
    int agent_cell = 0;
    int opponent_cell = 0;
    BallOwner ball = BallOwner::agent;
};

// Hexagonal board made of horizontal rows; odd rows sit half a cell to the
// right of even rows. Cells are indexed in reading order. Each side owns a
// goal mouth: exiting the board through the mouth cell in the mouth's
// direction while carrying the ball scores.
class HexBoard {
  public:
    static HexBoard parse(std::istream& in);
    static HexBoard parse_string(const std::string& text);
    static HexBoard load_file(const std::string& path);
    static const HexBoard& default_board();

    int cell_count() const { return cell_count_; }
    int rows() const { return static_cast<int>(row_widths_.size()); }
    int row_width(int row) const { return row_widths_.at(static_cast<std::size_t>(row)); }
    int cell_index(int row, int pos) const;
    std::pair<int, int> row_pos(int cell) const;

    // Neighbouring cell for a move direction, absent when off the board.
    std::optional<int> neighbor(int cell, int direction) const;

    int agent_start() const { return agent_start_; }
    int opponent_start() const { return opponent_start_; }
    // Mouth cells: exiting left_goal_cell leftward scores into the left
    // goal, exiting right_goal_cell rightward into the right goal.
    int left_goal_cell() const { return left_goal_cell_; }
    int right_goal_cell() const { return right_goal_cell_; }
    BallInit ball_init() const { return ball_init_; }

  private:
    std::vector<int> row_widths_;
    std::vector<int> row_start_;  // index of each row's first cell
    int cell_count_ = 0;
    int agent_start_ = -1;
    int opponent_start_ = -1;
    int left_goal_cell_ = -1;
    int right_goal_cell_ = -1;
    BallInit ball_init_ = BallInit::random;
};

// Hex-grid soccer: both players move simultaneously; colliding moves fail
// and reassign the ball at random; carrying the ball through the opposing
// goal mouth scores 100 (zero-sum). The agent attacks the right goal.
class HexcerGame final : public Game {
  public:
    explicit HexcerGame(const HexBoard& board = HexBoard::default_board(), int step_limit = 50);

    void reset(Rng& rng) override;
    StepResult step(int agent_action, int opp_action, Rng& rng) override;
    bool terminal() const override { return terminal_; }

    Situation encode(Perspective p) const override;
    int situation_width() const override { return 12; }
    int action_count() const override { return hex_action_count; }
    const std::vector<std::string>& action_names() const override;
    int step_limit() const override { return step_limit_; }

    std::vector<std::optional<int>> heuristic_advice(Perspective p) const override;
    int heuristic_count(Perspective) const override { return 1; }

    const HexBoard& board() const { return board_; }
    const HexcerState& state() const { return state_; }
    void set_state(const HexcerState& s);
    int steps_taken() const { return steps_; }

  private:
    // The cell a player would occupy after `action`, ignoring the other
    // player; scoring exits are handled separately.
    int move_target(int cell, int action) const;
    bool scoring_move(int cell, int action, Perspective side) const;
    std::optional<int> rightward_advice(int cell, bool has_ball, Perspective side) const;

    HexBoard board_;
    HexcerState state_;
    int step_limit_ = 50;
    int steps_ = 0;
    bool terminal_ = true;
};

Situation encode_hexcer(const HexcerState& state, Perspective p = Perspective::agent);
HexcerState decode_hexcer(const Situation& s, BallOwner ball = BallOwner::agent);

}  // namespace hamxcs
