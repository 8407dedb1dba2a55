#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace txtrace {

// FNV-1a 64-bit. Used for content-derived cluster ids so exports are
// reproducible across platforms and insertion orders.
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline bool is_hex_string(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

std::vector<uint8_t> hex_decode(std::string_view hex);  // throws MalformedHex
std::string hex_encode(const std::vector<uint8_t>& bytes);

// Levenshtein distance, used by the tag alias merge.
std::size_t edit_distance(std::string_view a, std::string_view b);

// Lowercases and strips separator characters (space . _ - /) before
// alias comparison.
std::string normalize_label(std::string_view label);

std::vector<std::string> split(std::string_view s, char sep);

std::string read_file(const std::string& path);            // throws IoError
void write_file(const std::string& path, std::string_view content);

}  // namespace txtrace
