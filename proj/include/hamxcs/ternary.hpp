#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "hamxcs/rng.hpp"

namespace hamxcs {

// A binary-coded situation of fixed width (at most 64 bits). Bit i holds
// the symbol at text position i, position 0 being the leftmost character.
class Situation {
  public:
    Situation() = default;
    Situation(int width, std::uint64_t bits);

    static Situation from_string(std::string_view text);

    int width() const { return width_; }
    bool bit(int pos) const;
    void set_bit(int pos, bool value);
    std::uint64_t raw() const { return bits_; }

    // Writes `value` big-endian into positions [offset, offset + nbits).
    void encode_unsigned(int offset, std::uint64_t value, int nbits);
    std::uint64_t decode_unsigned(int offset, int nbits) const;

    std::string to_string() const;

    bool operator==(const Situation&) const = default;

  private:
    int width_ = 0;
    std::uint64_t bits_ = 0;
};

// A ternary condition over {0,1,#}. Stored as two masks: care_ has bit i
// set when position i is a fixed symbol, value_ holds that symbol's bit.
// value_ is always a subset of care_.
class Condition {
  public:
    Condition() = default;
    Condition(int width, std::uint64_t care, std::uint64_t value);

    static Condition from_string(std::string_view text);
    static Condition all_wildcards(int width);

    int width() const { return width_; }
    std::uint64_t care_mask() const { return care_; }
    std::uint64_t value_mask() const { return value_; }

    bool is_wildcard(int pos) const;
    bool fixed_bit(int pos) const;  // only meaningful when !is_wildcard(pos)
    void set_wildcard(int pos);
    void set_fixed(int pos, bool value);

    int wildcard_count() const;
    std::string to_string() const;

    bool operator==(const Condition&) const = default;

  private:
    int width_ = 0;
    std::uint64_t care_ = 0;
    std::uint64_t value_ = 0;
};

// True iff every fixed symbol of `c` equals the corresponding bit of `s`.
bool matches(const Condition& c, const Situation& s);

// True iff `g` has strictly more wildcards than `sp` and agrees with `sp`
// on every fixed position of `g`.
bool is_more_general(const Condition& g, const Condition& sp);

// Condition matching `s` whose positions are '#' independently with
// probability `wildcard_prob`, otherwise fixed to the situation's bit.
Condition covering_condition(const Situation& s, double wildcard_prob, Rng& rng);

struct SituationHash {
    std::size_t operator()(const Situation& s) const {
        return std::hash<std::uint64_t>{}(s.raw() * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(s.width()));
    }
};

}  // namespace hamxcs
