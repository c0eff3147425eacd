#include "hamxcs/ternary.hpp"

#include <bit>
#include <stdexcept>

namespace hamxcs {

namespace {

void check_width(int width) {
    if (width < 0 || width > 64) throw std::invalid_argument("width must be in [0, 64]");
}

void check_pos(int pos, int width) {
    if (pos < 0 || pos >= width) throw std::out_of_range("position out of range");
}

}  // namespace

Situation::Situation(int width, std::uint64_t bits) : width_(width), bits_(bits) {
    check_width(width);
    if (width < 64 && (bits >> width) != 0) throw std::invalid_argument("situation bits exceed width");
}

Situation Situation::from_string(std::string_view text) {
    Situation s;
    for (char ch : text) {
        if (ch == ' ' || ch == '\t') continue;
        if (s.width_ >= 64) throw std::invalid_argument("situation wider than 64 bits");
        if (ch == '1') s.bits_ |= (1ULL << s.width_);
        else if (ch != '0') throw std::invalid_argument(std::string("invalid situation symbol '") + ch + "'");
        ++s.width_;
    }
    return s;
}

bool Situation::bit(int pos) const {
    check_pos(pos, width_);
    return (bits_ >> pos) & 1ULL;
}

void Situation::set_bit(int pos, bool value) {
    check_pos(pos, width_);
    if (value) bits_ |= (1ULL << pos);
    else bits_ &= ~(1ULL << pos);
}

void Situation::encode_unsigned(int offset, std::uint64_t value, int nbits) {
    if (nbits < 64 && (value >> nbits) != 0) throw std::invalid_argument("value does not fit in field");
    for (int i = 0; i < nbits; ++i) set_bit(offset + i, (value >> (nbits - 1 - i)) & 1ULL);
}

std::uint64_t Situation::decode_unsigned(int offset, int nbits) const {
    std::uint64_t value = 0;
    for (int i = 0; i < nbits; ++i) value = (value << 1) | (bit(offset + i) ? 1ULL : 0ULL);
    return value;
}

std::string Situation::to_string() const {
    std::string out(static_cast<std::size_t>(width_), '0');
    for (int i = 0; i < width_; ++i)
        if (bit(i)) out[static_cast<std::size_t>(i)] = '1';
    return out;
}

Condition::Condition(int width, std::uint64_t care, std::uint64_t value) : width_(width), care_(care), value_(value) {
    check_width(width);
    if (width < 64 && (care >> width) != 0) throw std::invalid_argument("care mask exceeds width");
    if ((value & ~care) != 0) throw std::invalid_argument("value bits outside care mask");
}

Condition Condition::from_string(std::string_view text) {
    Condition c;
    for (char ch : text) {
        if (ch == ' ' || ch == '\t') continue;
        if (c.width_ >= 64) throw std::invalid_argument("condition wider than 64 symbols");
        const std::uint64_t mask = 1ULL << c.width_;
        if (ch == '1') { c.care_ |= mask; c.value_ |= mask; }
        else if (ch == '0') { c.care_ |= mask; }
        else if (ch != '#') throw std::invalid_argument(std::string("invalid condition symbol '") + ch + "'");
        ++c.width_;
    }
    return c;
}

Condition Condition::all_wildcards(int width) {
    check_width(width);
    return Condition(width, 0, 0);
}

bool Condition::is_wildcard(int pos) const {
    check_pos(pos, width_);
    return ((care_ >> pos) & 1ULL) == 0;
}

bool Condition::fixed_bit(int pos) const {
    check_pos(pos, width_);
    return (value_ >> pos) & 1ULL;
}

void Condition::set_wildcard(int pos) {
    check_pos(pos, width_);
    care_ &= ~(1ULL << pos);
    value_ &= ~(1ULL << pos);
}

void Condition::set_fixed(int pos, bool value) {
    check_pos(pos, width_);
    care_ |= (1ULL << pos);
    if (value) value_ |= (1ULL << pos);
    else value_ &= ~(1ULL << pos);
}

int Condition::wildcard_count() const {
    return width_ - std::popcount(care_);
}

std::string Condition::to_string() const {
    std::string out(static_cast<std::size_t>(width_), '#');
    for (int i = 0; i < width_; ++i)
        if (!is_wildcard(i)) out[static_cast<std::size_t>(i)] = fixed_bit(i) ? '1' : '0';
    return out;
}

bool matches(const Condition& c, const Situation& s) {
    if (c.width() != s.width()) throw std::invalid_argument("condition/situation width mismatch");
    return (s.raw() & c.care_mask()) == c.value_mask();
}

bool is_more_general(const Condition& g, const Condition& sp) {
    if (g.width() != sp.width()) throw std::invalid_argument("condition width mismatch");
    // Every fixed position of g must be fixed in sp with the same symbol,
    // and g must carry strictly fewer fixed positions overall.
    if ((g.care_mask() & ~sp.care_mask()) != 0) return false;
    if (g.care_mask() == sp.care_mask()) return false;
    return (sp.value_mask() & g.care_mask()) == g.value_mask();
}

Condition covering_condition(const Situation& s, double wildcard_prob, Rng& rng) {
    if (wildcard_prob < 0.0 || wildcard_prob > 1.0) throw std::invalid_argument("wildcard probability outside [0, 1]");
    Condition c = Condition::all_wildcards(s.width());
    for (int i = 0; i < s.width(); ++i) {
        if (uniform01(rng) >= wildcard_prob) c.set_fixed(i, s.bit(i));
    }
    return c;
}

}  // namespace hamxcs
