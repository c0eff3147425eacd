#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hamxcs/rng.hpp"
#include "hamxcs/ternary.hpp"

namespace hamxcs {

// Observed (situation, opponent action) pairs for one episode, in order.
class EpisodeBuffer {
  public:
    void record(const Situation& s, int opp_action);
    void clear() { steps_.clear(); }
    bool empty() const { return steps_.empty(); }
    std::size_t size() const { return steps_.size(); }
    const std::pair<Situation, int>& at(std::size_t i) const { return steps_.at(i); }

  private:
    std::vector<std::pair<Situation, int>> steps_;
};

// One-hidden-layer softmax network approximating the opponent's policy
// tau(o|s). Trained per episode by stochastic gradient descent on the
// entropy-regularized negative log-likelihood of the observed actions.
class OpponentModel {
  public:
    OpponentModel(int input_width, int hidden_units, int action_count, double learning_rate, double entropy_weight,
                  Rng& init_rng);

    int input_width() const { return input_width_; }
    int hidden_units() const { return hidden_units_; }
    int action_count() const { return action_count_; }

    std::vector<double> predict(const Situation& s) const;

    // `passes` in-order sweeps of per-sample gradient steps over the buffer.
    void train_episode(const EpisodeBuffer& buf, int passes = 10);

    // Mean entropy-regularized NLL over the buffer.
    double loss(const EpisodeBuffer& buf) const;

    // Flat parameter view, layout: W1 (hidden x input, row-major), b1,
    // W2 (actions x hidden, row-major), b2.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);
    std::size_t parameter_count() const;

    // Analytic gradient of loss(buf) in the flat layout above.
    std::vector<double> loss_gradient(const EpisodeBuffer& buf) const;

    void zero_output_layer();

    void save(std::ostream& out) const;
    static OpponentModel load(std::istream& in);
    void save_file(const std::string& path) const;
    static OpponentModel load_file(const std::string& path);

  private:
    OpponentModel() = default;

    std::vector<double> forward_hidden(const Situation& s) const;
    std::vector<double> logits_from_hidden(const std::vector<double>& hidden) const;
    // Accumulates one sample's gradient (scaled by `scale`) into `grad`.
    void accumulate_gradient(const Situation& s, int observed, double scale, std::vector<double>& grad) const;
    void apply_gradient(std::span<const double> grad, double step);

    int input_width_ = 0;
    int hidden_units_ = 0;
    int action_count_ = 0;
    double learning_rate_ = 0.0001;
    double entropy_weight_ = 0.001;
    std::vector<double> w1_;  // hidden x input
    std::vector<double> b1_;
    std::vector<double> w2_;  // actions x hidden
    std::vector<double> b2_;
};

// softmax with the shifted log-sum-exp form.
std::vector<double> stable_softmax(std::span<const double> logits);

}  // namespace hamxcs
