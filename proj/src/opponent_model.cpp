#include "hamxcs/opponent_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hamxcs {

void EpisodeBuffer::record(const Situation& s, int opp_action) {
    if (opp_action < 0) throw std::invalid_argument("opponent action must be nonnegative");
    steps_.emplace_back(s, opp_action);
}

std::vector<double> stable_softmax(std::span<const double> logits) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - peak);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

OpponentModel::OpponentModel(int input_width, int hidden_units, int action_count, double learning_rate,
                             double entropy_weight, Rng& init_rng)
    : input_width_(input_width),
      hidden_units_(hidden_units),
      action_count_(action_count),
      learning_rate_(learning_rate),
      entropy_weight_(entropy_weight) {
    if (input_width <= 0 || hidden_units <= 0 || action_count <= 0)
        throw std::invalid_argument("model dimensions must be positive");
    const double s1 = 1.0 / std::sqrt(static_cast<double>(input_width));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_units));
    std::uniform_real_distribution<double> u1(-s1, s1);
    std::uniform_real_distribution<double> u2(-s2, s2);
    w1_.resize(static_cast<std::size_t>(hidden_units) * input_width);
    b1_.resize(static_cast<std::size_t>(hidden_units));
    w2_.resize(static_cast<std::size_t>(action_count) * hidden_units);
    b2_.assign(static_cast<std::size_t>(action_count), 0.0);
    for (double& w : w1_) w = u1(init_rng);
    for (double& b : b1_) b = u1(init_rng);
    for (double& w : w2_) w = u2(init_rng);
}

std::vector<double> OpponentModel::forward_hidden(const Situation& s) const {
    if (s.width() != input_width_) throw std::invalid_argument("situation width does not match model input");
    std::vector<double> hidden(static_cast<std::size_t>(hidden_units_));
    for (int h = 0; h < hidden_units_; ++h) {
        double z = b1_[static_cast<std::size_t>(h)];
        const double* row = &w1_[static_cast<std::size_t>(h) * input_width_];
        for (int i = 0; i < input_width_; ++i)
            if (s.bit(i)) z += row[i];
        hidden[static_cast<std::size_t>(h)] = z > 0.0 ? z : 0.0;
    }
    return hidden;
}

std::vector<double> OpponentModel::logits_from_hidden(const std::vector<double>& hidden) const {
    std::vector<double> logits(static_cast<std::size_t>(action_count_));
    for (int a = 0; a < action_count_; ++a) {
        double z = b2_[static_cast<std::size_t>(a)];
        const double* row = &w2_[static_cast<std::size_t>(a) * hidden_units_];
        for (int h = 0; h < hidden_units_; ++h) z += row[h] * hidden[static_cast<std::size_t>(h)];
        logits[static_cast<std::size_t>(a)] = z;
    }
    return logits;
}

std::vector<double> OpponentModel::predict(const Situation& s) const {
    return stable_softmax(logits_from_hidden(forward_hidden(s)));
}

double OpponentModel::loss(const EpisodeBuffer& buf) const {
    if (buf.empty()) throw std::invalid_argument("empty episode buffer");
    double total = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        const auto& [s, o] = buf.at(i);
        const auto q = predict(s);
        const double p = q.at(static_cast<std::size_t>(o));
        double entropy = 0.0;
        for (double v : q)
            if (v > 0.0) entropy -= v * std::log(v);
        total += -std::log(std::max(p, 1e-300)) - entropy_weight_ * entropy;
    }
    return total / static_cast<double>(buf.size());
}

void OpponentModel::accumulate_gradient(const Situation& s, int observed, double scale,
                                        std::vector<double>& grad) const {
    const auto hidden = forward_hidden(s);
    const auto logits = logits_from_hidden(hidden);
    const auto q = stable_softmax(logits);

    // d(-log q[o]) / dz = q - onehot(o)
    // d(-eta * H) / dz_j = eta * q_j * (log q_j + H)
    double entropy = 0.0;
    for (double v : q)
        if (v > 0.0) entropy -= v * std::log(v);
    std::vector<double> dz(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double logq = q[j] > 0.0 ? std::log(q[j]) : -700.0;
        dz[j] = q[j] - (static_cast<int>(j) == observed ? 1.0 : 0.0) + entropy_weight_ * q[j] * (logq + entropy);
    }

    const std::size_t w1n = w1_.size();
    const std::size_t b1n = b1_.size();
    const std::size_t w2n = w2_.size();
    double* gw1 = grad.data();
    double* gb1 = grad.data() + w1n;
    double* gw2 = grad.data() + w1n + b1n;
    double* gb2 = grad.data() + w1n + b1n + w2n;

    std::vector<double> dhidden(static_cast<std::size_t>(hidden_units_), 0.0);
    for (int a = 0; a < action_count_; ++a) {
        const double d = dz[static_cast<std::size_t>(a)] * scale;
        double* grow = gw2 + static_cast<std::size_t>(a) * hidden_units_;
        const double* wrow = &w2_[static_cast<std::size_t>(a) * hidden_units_];
        for (int h = 0; h < hidden_units_; ++h) {
            grow[h] += d * hidden[static_cast<std::size_t>(h)];
            dhidden[static_cast<std::size_t>(h)] += dz[static_cast<std::size_t>(a)] * wrow[h];
        }
        gb2[a] += d;
    }
    for (int h = 0; h < hidden_units_; ++h) {
        if (hidden[static_cast<std::size_t>(h)] <= 0.0) continue;  // ReLU gate
        const double d = dhidden[static_cast<std::size_t>(h)] * scale;
        double* grow = gw1 + static_cast<std::size_t>(h) * input_width_;
        for (int i = 0; i < input_width_; ++i)
            if (s.bit(i)) grow[i] += d;
        gb1[h] += d;
    }
}

void OpponentModel::apply_gradient(std::span<const double> grad, double step) {
    const std::size_t w1n = w1_.size();
    const std::size_t b1n = b1_.size();
    const std::size_t w2n = w2_.size();
    for (std::size_t i = 0; i < w1n; ++i) w1_[i] -= step * grad[i];
    for (std::size_t i = 0; i < b1n; ++i) b1_[i] -= step * grad[w1n + i];
    for (std::size_t i = 0; i < w2n; ++i) w2_[i] -= step * grad[w1n + b1n + i];
    for (std::size_t i = 0; i < b2_.size(); ++i) b2_[i] -= step * grad[w1n + b1n + w2n + i];
}

void OpponentModel::train_episode(const EpisodeBuffer& buf, int passes) {
    if (buf.empty()) throw std::invalid_argument("empty episode buffer");
    std::vector<double> grad(parameter_count());
    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t i = 0; i < buf.size(); ++i) {
            std::fill(grad.begin(), grad.end(), 0.0);
            const auto& [s, o] = buf.at(i);
            accumulate_gradient(s, o, 1.0, grad);
            apply_gradient(grad, learning_rate_);
        }
    }
}

std::size_t OpponentModel::parameter_count() const {
    return w1_.size() + b1_.size() + w2_.size() + b2_.size();
}

std::vector<double> OpponentModel::parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), w1_.begin(), w1_.end());
    flat.insert(flat.end(), b1_.begin(), b1_.end());
    flat.insert(flat.end(), w2_.begin(), w2_.end());
    flat.insert(flat.end(), b2_.begin(), b2_.end());
    return flat;
}

void OpponentModel::set_parameters(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw std::invalid_argument("parameter count mismatch");
    std::size_t pos = 0;
    for (double& w : w1_) w = flat[pos++];
    for (double& b : b1_) b = flat[pos++];
    for (double& w : w2_) w = flat[pos++];
    for (double& b : b2_) b = flat[pos++];
}

std::vector<double> OpponentModel::loss_gradient(const EpisodeBuffer& buf) const {
    if (buf.empty()) throw std::invalid_argument("empty episode buffer");
    std::vector<double> grad(parameter_count(), 0.0);
    const double scale = 1.0 / static_cast<double>(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        const auto& [s, o] = buf.at(i);
        accumulate_gradient(s, o, scale, grad);
    }
    return grad;
}

void OpponentModel::zero_output_layer() {
    std::fill(w2_.begin(), w2_.end(), 0.0);
    std::fill(b2_.begin(), b2_.end(), 0.0);
}

void OpponentModel::save(std::ostream& out) const {
    const std::int32_t header[3] = {static_cast<std::int32_t>(input_width_), static_cast<std::int32_t>(hidden_units_),
                                    static_cast<std::int32_t>(action_count_)};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(&learning_rate_), sizeof(double));
    out.write(reinterpret_cast<const char*>(&entropy_weight_), sizeof(double));
    const auto flat = parameters();
    out.write(reinterpret_cast<const char*>(flat.data()), static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!out) throw std::runtime_error("failed to write model snapshot");
}

OpponentModel OpponentModel::load(std::istream& in) {
    std::int32_t header[3];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    OpponentModel model;
    model.input_width_ = header[0];
    model.hidden_units_ = header[1];
    model.action_count_ = header[2];
    if (!in || model.input_width_ <= 0 || model.hidden_units_ <= 0 || model.action_count_ <= 0)
        throw std::runtime_error("malformed model snapshot header");
    in.read(reinterpret_cast<char*>(&model.learning_rate_), sizeof(double));
    in.read(reinterpret_cast<char*>(&model.entropy_weight_), sizeof(double));
    model.w1_.resize(static_cast<std::size_t>(model.hidden_units_) * model.input_width_);
    model.b1_.resize(static_cast<std::size_t>(model.hidden_units_));
    model.w2_.resize(static_cast<std::size_t>(model.action_count_) * model.hidden_units_);
    model.b2_.resize(static_cast<std::size_t>(model.action_count_));
    std::vector<double> flat(model.parameter_count());
    in.read(reinterpret_cast<char*>(flat.data()), static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated model snapshot");
    model.set_parameters(flat);
    return model;
}

void OpponentModel::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    save(out);
}

OpponentModel OpponentModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return load(in);
}

}  // namespace hamxcs
