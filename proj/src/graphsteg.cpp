#include "stegkit/graphsteg.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <queue>
#include <sstream>

#include "json.hpp"

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

struct MergeNode {
    std::size_t weight;
    char min_letter;
    std::vector<char> letters;
};

struct HeavierFirst {
    bool operator()(const MergeNode& a, const MergeNode& b) const {
        if (a.weight != b.weight) return a.weight > b.weight;
        return static_cast<unsigned char>(a.min_letter) > static_cast<unsigned char>(b.min_letter);
    }
};

std::string printable(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7F) return std::string("'") + c + "'";
    return "byte " + std::to_string(u);
}

std::vector<std::string_view> split_words(std::string_view message) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < message.size()) {
        while (i < message.size() && message[i] == ' ') ++i;
        const std::size_t start = i;
        while (i < message.size() && message[i] != ' ') ++i;
        if (i > start) words.push_back(message.substr(start, i - start));
    }
    return words;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw Error(ErrorCode::ValueOverflow, std::to_string(a) + " x " + std::to_string(b) + " overflows 64 bits");
    }
    return r;
}

}  // namespace

HuffmanTable HuffmanTable::from_codes(std::map<char, std::string> codes) {
    for (const auto& [letter, code] : codes) {
        if (code.empty() || code.find_first_not_of("01") != std::string::npos) {
            throw Error(ErrorCode::InvalidTable, "code for " + printable(letter) + " must be a non-empty bit string");
        }
    }
    // In lexicographic order a prefix sorts immediately before some string it prefixes.
    std::vector<std::string> sorted;
    for (const auto& [letter, code] : codes) sorted.push_back(code);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].starts_with(sorted[i - 1])) {
            throw Error(ErrorCode::InvalidTable, "code " + sorted[i - 1] + " is a prefix of " + sorted[i]);
        }
    }
    HuffmanTable table;
    table.codes_ = std::move(codes);
    return table;
}

std::optional<std::string_view> HuffmanTable::code(char letter) const {
    const auto it = codes_.find(letter);
    if (it == codes_.end()) return std::nullopt;
    return it->second;
}

std::size_t HuffmanTable::weighted_length() const {
    std::size_t total = 0;
    for (const auto& [letter, count] : frequencies_) {
        const auto it = codes_.find(letter);
        if (it != codes_.end()) total += count * it->second.size();
    }
    return total;
}

double HuffmanTable::kraft_sum() const {
    double sum = 0.0;
    for (const auto& [letter, code] : codes_) sum += std::ldexp(1.0, -static_cast<int>(code.size()));
    return sum;
}

HuffmanTable build_table(std::string_view message) {
    std::map<char, std::size_t> freq;
    for (char c : message) {
        if (c != ' ') ++freq[c];
    }
    if (freq.size() < 2) {
        throw Error(ErrorCode::AlphabetTooSmall,
                    "need at least two distinct letters, found " + std::to_string(freq.size()));
    }

    std::priority_queue<MergeNode, std::vector<MergeNode>, HeavierFirst> heap;
    for (const auto& [letter, count] : freq) heap.push({count, letter, {letter}});

    std::map<char, std::size_t> depth;
    while (heap.size() > 1) {
        MergeNode a = heap.top();
        heap.pop();
        MergeNode b = heap.top();
        heap.pop();
        for (char c : a.letters) ++depth[c];
        for (char c : b.letters) ++depth[c];
        MergeNode merged{a.weight + b.weight,
                         static_cast<unsigned char>(a.min_letter) < static_cast<unsigned char>(b.min_letter)
                             ? a.min_letter
                             : b.min_letter,
                         std::move(a.letters)};
        merged.letters.insert(merged.letters.end(), b.letters.begin(), b.letters.end());
        heap.push(std::move(merged));
    }

    std::vector<std::pair<std::size_t, char>> order;
    for (const auto& [letter, len] : depth) order.emplace_back(len, letter);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return static_cast<unsigned char>(a.second) < static_cast<unsigned char>(b.second);
    });

    // Canonical assignment; lengths are bounded by the alphabet size (< 256).
    HuffmanTable table;
    std::string code;  // code = (code + 1) << (len - prev_len), as a bit string
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto [len, letter] = order[i];
        if (i > 0) {
            std::size_t k = code.size();
            while (k > 0 && code[k - 1] == '1') code[--k] = '0';
            if (k > 0) code[k - 1] = '1';
        }
        code.resize(len, '0');
        table.codes_[letter] = code;
    }
    table.frequencies_ = std::move(freq);
    return table;
}

std::uint64_t encode_word(std::string_view word, const HuffmanTable& table) {
    std::string bits = "1";
    for (char c : word) {
        const auto code = table.code(c);
        if (!code) throw Error(ErrorCode::UnknownLetter, printable(c) + " is not in the code table");
        bits += *code;
    }
    if (bits.size() > 64) {
        throw Error(ErrorCode::ValueOverflow,
                    "word needs " + std::to_string(bits.size()) + " bits, more than a 64-bit value holds");
    }
    std::uint64_t value = 0;
    for (char b : bits) value = (value << 1) | static_cast<std::uint64_t>(b == '1');
    return value;
}

std::string decode_value(std::uint64_t value, const HuffmanTable& table) {
    if (value < 2) throw Error(ErrorCode::InvalidArgument, "word values are at least 2, got " + std::to_string(value));

    std::map<std::string, char, std::less<>> reverse;
    for (const auto& [letter, code] : table.codes()) reverse.emplace(code, letter);

    const int nbits = std::bit_width(value) - 1;  // bits after the leading 1
    std::string word;
    std::string pending;
    for (int i = nbits - 1; i >= 0; --i) {
        pending.push_back(((value >> i) & 1U) ? '1' : '0');
        const auto it = reverse.find(pending);
        if (it != reverse.end()) {
            word.push_back(it->second);
            pending.clear();
        }
    }
    if (!pending.empty()) {
        throw Error(ErrorCode::DanglingBits,
                    "bits '" + pending + "' left over decoding " + std::to_string(value) + " (wrong table?)");
    }
    return word;
}

std::string key_to_json(const GraphKey& key) {
    nlohmann::ordered_json j;
    j["alpha"] = key.alpha;
    j["beta"] = key.beta;
    nlohmann::ordered_json codes = nlohmann::ordered_json::object();
    for (const auto& [letter, code] : key.table.codes()) {
        // a lone byte >= 0x80 is not valid UTF-8, so JSON cannot carry it
        if (static_cast<unsigned char>(letter) >= 0x80) {
            throw Error(ErrorCode::InvalidArgument, "letter " + printable(letter) + " cannot be stored in a JSON key");
        }
        codes[std::string(1, letter)] = code;
    }
    j["table"] = codes;
    return j.dump(2) + "\n";
}

GraphKey key_from_json(std::string_view json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedKey, e.what());
    }
    if (!j.is_object() || !j.contains("alpha") || !j.contains("beta") || !j.contains("table")) {
        throw Error(ErrorCode::MalformedKey, "key must be an object with alpha, beta and table");
    }
    const auto& alpha = j["alpha"];
    const auto& beta = j["beta"];
    if (!alpha.is_number_unsigned() || !beta.is_number_unsigned() || alpha.get<std::uint64_t>() < 1 ||
        beta.get<std::uint64_t>() < 1) {
        throw Error(ErrorCode::MalformedKey, "alpha and beta must be positive integers");
    }
    if (!j["table"].is_object()) throw Error(ErrorCode::MalformedKey, "table must be an object");
    std::map<char, std::string> codes;
    for (const auto& [letter, code] : j["table"].items()) {
        if (letter.size() != 1 || !code.is_string()) {
            throw Error(ErrorCode::MalformedKey, "table entries must map one letter to a bit string");
        }
        codes[letter[0]] = code.get<std::string>();
    }
    return GraphKey{alpha.get<std::uint64_t>(), beta.get<std::uint64_t>(), HuffmanTable::from_codes(std::move(codes))};
}

GraphSeries encode_series(std::string_view message, const GraphKey& key, std::string title) {
    if (key.alpha < 1 || key.beta < 1) throw Error(ErrorCode::InvalidArgument, "alpha and beta must be positive");
    GraphSeries series;
    series.title = std::move(title);
    std::uint64_t x = 1;
    const auto words = split_words(message);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) series.points.push_back({x++, checked_mul(key.alpha, key.beta)});
        const std::uint64_t value = encode_word(words[i], key.table);
        if (value == key.alpha) {
            throw Error(ErrorCode::InvalidArgument,
                        "word '" + std::string(words[i]) + "' encodes to alpha " + std::to_string(key.alpha));
        }
        series.points.push_back({x++, checked_mul(value, key.beta)});
    }
    return series;
}

std::string decode_series(const GraphSeries& series, const GraphKey& key) {
    if (key.beta < 1) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
    std::string message;
    for (const auto& p : series.points) {
        if (p.y % key.beta != 0) {
            throw Error(ErrorCode::NotDivisible, "y = " + std::to_string(p.y) + " at x = " + std::to_string(p.x) +
                                                     " is not divisible by beta " + std::to_string(key.beta));
        }
        const std::uint64_t value = p.y / key.beta;
        if (value == key.alpha) {
            message.push_back(' ');
        } else {
            message += decode_value(value, key.table);
        }
    }
    return message;
}

std::string serialize_series(const GraphSeries& series) {
    if (series.title.find_first_of("\r\n") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "title must be a single line");
    }
    std::ostringstream out;
    if (!series.title.empty()) out << "# title: " << series.title << '\n';
    out << "x,y\n";
    for (const auto& p : series.points) out << p.x << ',' << p.y << '\n';
    return out.str();
}

GraphSeries parse_series(std::string_view text) {
    GraphSeries series;
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    std::size_t i = 0;
    constexpr std::string_view kTitle = "# title: ";
    if (i < lines.size() && lines[i].starts_with(kTitle)) {
        series.title = std::string(lines[i].substr(kTitle.size()));
        ++i;
    }
    if (i >= lines.size() || lines[i] != "x,y") throw Error(ErrorCode::MalformedCsv, "missing 'x,y' header line");
    ++i;

    auto parse_u64 = [](std::string_view field, std::size_t lineno) {
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            throw Error(ErrorCode::MalformedCsv,
                        "line " + std::to_string(lineno) + ": '" + std::string(field) + "' is not an unsigned integer");
        }
        return v;
    };
    for (; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(i + 1) + ": expected two fields");
        }
        series.points.push_back({parse_u64(line.substr(0, comma), i + 1), parse_u64(line.substr(comma + 1), i + 1)});
    }
    return series;
}

}  // namespace stegkit
