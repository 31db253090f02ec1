#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stegkit {

// Prefix-free letter -> bit-string code. Letters are single bytes.
class HuffmanTable {
public:
    HuffmanTable() = default;

    // Throws InvalidTable if a code is empty, holds characters other than
    // '0'/'1', or is a prefix of another code.
    static HuffmanTable from_codes(std::map<char, std::string> codes);

    const std::map<char, std::string>& codes() const noexcept { return codes_; }

    // Letter counts the table was built from; empty for tables loaded from codes.
    const std::map<char, std::size_t>& frequencies() const noexcept { return frequencies_; }

    std::optional<std::string_view> code(char letter) const;

    // sum over letters of frequency * code length (needs frequencies)
    std::size_t weighted_length() const;

    // sum over codes of 2^-len; 1 for a full binary tree
    double kraft_sum() const;

    bool operator==(const HuffmanTable& other) const { return codes_ == other.codes_; }

private:
    friend HuffmanTable build_table(std::string_view message);

    std::map<char, std::string> codes_;
    std::map<char, std::size_t> frequencies_;
};

// Optimal prefix code over the non-space letters of message. Ties are broken
// by (weight, smallest contained letter) during merging and codes are then
// made canonical by (length, letter). Throws AlphabetTooSmall when fewer than
// two distinct letters are present.
HuffmanTable build_table(std::string_view message);

// "1" followed by the concatenated letter codes, read as a binary number.
// Throws UnknownLetter, or ValueOverflow past 64 bits.
std::uint64_t encode_word(std::string_view word, const HuffmanTable& table);

// Drops the leading 1 and parses the remaining bits greedily.
// Throws DanglingBits when bits are left over, InvalidArgument for value < 2.
std::string decode_value(std::uint64_t value, const HuffmanTable& table);

struct GraphKey {
    std::uint64_t alpha = 1;  // word separator
    std::uint64_t beta = 1;   // multiplier applied to every point
    HuffmanTable table;
};

// {"alpha": int, "beta": int, "table": {"<letter>": "<bits>"}}
std::string key_to_json(const GraphKey& key);
GraphKey key_from_json(std::string_view json);  // throws MalformedKey / InvalidTable

struct GraphPoint {
    std::uint64_t x = 0;
    std::uint64_t y = 0;

    bool operator==(const GraphPoint&) const = default;
};

struct GraphSeries {
    std::string title;
    std::vector<GraphPoint> points;

    bool operator==(const GraphSeries&) const = default;
};

// One point per word, with beta * alpha between consecutive words. Runs of
// spaces collapse. Throws UnknownLetter, ValueOverflow, or InvalidArgument
// when a word happens to encode to alpha.
GraphSeries encode_series(std::string_view message, const GraphKey& key, std::string title = {});

// Throws NotDivisible (wrong beta) or DanglingBits (wrong table).
std::string decode_series(const GraphSeries& series, const GraphKey& key);

// "# title: ..." (optional), then "x,y", then one "x,y" line per point.
std::string serialize_series(const GraphSeries& series);
GraphSeries parse_series(std::string_view text);  // throws MalformedCsv

}  // namespace stegkit
