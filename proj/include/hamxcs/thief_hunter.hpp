#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamxcs/game.hpp"

namespace hamxcs {

enum GridAction : int {
    grid_up = 0,
    grid_down = 1,
    grid_left = 2,
    grid_right = 3,
    grid_standby = 4,
};
inline constexpr int grid_action_count = 5;

struct GridPos {
    int row = 0;
    int col = 0;
    bool operator==(const GridPos&) const = default;
};

struct ThiefHunterState {
    GridPos agent;
    GridPos opponent;
};

// Rectangular grid with obstacles, goal cells for the thief, and a midline
// the hunter may not cross.
class GridMap {
  public:
    static GridMap parse(std::istream& in);
    static GridMap parse_string(const std::string& text);
    static GridMap load_file(const std::string& path);
    static const GridMap& default_map();

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool in_bounds(const GridPos& p) const;
    bool obstacle(const GridPos& p) const;
    bool goal(const GridPos& p) const;
    const std::vector<GridPos>& goals() const { return goals_; }
    // First column of the right half; the left half is every column below.
    int midline_col() const { return midline_col_; }
    GridPos agent_start() const { return agent_start_; }
    GridPos opponent_start() const { return opponent_start_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::uint8_t> obstacle_;
    std::vector<GridPos> goals_;
    GridPos agent_start_{-1, -1};
    GridPos opponent_start_{-1, -1};
    int midline_col_ = -1;
};

// Thief-and-hunter: the agent crosses the obstacle wall and reaches a goal
// cell (+100) while the hunter tries to catch it (+100 to the hunter, -100
// to the agent); every non-scoring step spent in the left half costs the
// agent 10. The hunter never leaves the right half.
class ThiefHunterGame final : public Game {
  public:
    explicit ThiefHunterGame(const GridMap& map = GridMap::default_map(), int step_limit = 50);

    void reset(Rng& rng) override;
    StepResult step(int agent_action, int opp_action, Rng& rng) override;
    bool terminal() const override { return terminal_; }

    Situation encode(Perspective p) const override;
    int situation_width() const override { return 12; }
    int action_count() const override { return grid_action_count; }
    const std::vector<std::string>& action_names() const override;
    int step_limit() const override { return step_limit_; }

    // Agent heuristics: approach the nearest goal, and (in the right half)
    // retreat from the hunter. Hunter heuristic: approach the thief.
    std::vector<std::optional<int>> heuristic_advice(Perspective p) const override;
    int heuristic_count(Perspective p) const override { return p == Perspective::agent ? 2 : 1; }

    const GridMap& map() const { return map_; }
    const ThiefHunterState& state() const { return state_; }
    void set_state(const ThiefHunterState& s);
    int steps_taken() const { return steps_; }

  private:
    GridPos move_target(const GridPos& from, int action, bool hunter) const;
    bool legal_agent_move(const GridPos& from, int action) const;

    GridMap map_;
    ThiefHunterState state_;
    int step_limit_ = 50;
    int steps_ = 0;
    bool terminal_ = true;
};

Situation encode_thief_hunter(const ThiefHunterState& state, Perspective p = Perspective::agent);
ThiefHunterState decode_thief_hunter(const Situation& s);

int manhattan(const GridPos& a, const GridPos& b);

// Advice of the two thief heuristics for an arbitrary state.
std::pair<std::optional<int>, std::optional<int>> th_heuristics(const GridMap& map, const ThiefHunterState& state);

}  // namespace hamxcs
