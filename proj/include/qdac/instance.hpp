// Copyright 2026 The qdac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "qdac/errors.hpp"

namespace qdac {

/// Unit sample: 1 at x = 0, else 0. Used as a bit selector.
constexpr int unit_sample(long long x) { return x == 0 ? 1 : 0; }

/// A conversion problem: m-bit pointers k, n-bit data words f(k), and the
/// full truth table of f.
struct DacInstance {
    int m = 0;  // pointer width
    int n = 0;  // data width
    std::vector<std::uint64_t> table;  // 2^m entries, each < 2^n

    std::uint64_t pointer_count() const { return std::uint64_t{1} << m; }

    std::uint64_t value(std::uint64_t k) const { return table.at(k); }

    /// Bit i of f(k).
    int bit(std::uint64_t k, int i) const { return static_cast<int>((table.at(k) >> i) & 1); }

    void validate() const {
        if (m < 1 || n < 1) throw DomainError("pointer and data widths must be at least 1");
        if (m > 30) throw DomainError("pointer width too large for an explicit table");
        if (n > 62) throw DomainError("data width too large");
        if (table.size() != pointer_count())
            throw DomainError("truth table must have exactly 2^m entries");
        for (std::uint64_t v : table)
            if (n < 64 && v >> n)
                throw DomainError("table entry " + std::to_string(v) + " does not fit in " +
                                  std::to_string(n) + " bits");
    }

    /// Square-wave test function: 0 on even pointers, 2^(n-1) on odd ones.
    static DacInstance clock(int m, int n) {
        DacInstance inst{m, n, {}};
        if (m < 1 || n < 1) throw DomainError("pointer and data widths must be at least 1");
        inst.table.resize(inst.pointer_count());
        for (std::uint64_t k = 0; k < inst.pointer_count(); ++k)
            inst.table[k] = (k & 1) ? (std::uint64_t{1} << (n - 1)) : 0;
        return inst;
    }

    static DacInstance from_stream(std::istream& in, const std::string& name = "<input>");
    static DacInstance from_file(const std::string& path);
};

// Truth-table file format: first significant line is "m n"; then 2^m lines,
// line k holding the n-character binary word f(k), most significant bit
// first. Blank lines and '#' comments are ignored.
inline DacInstance DacInstance::from_stream(std::istream& in, const std::string& name) {
    auto fail = [&name](int line, const std::string& what) -> ParseError {
        return ParseError(name + ":" + std::to_string(line) + ": " + what);
    };

    DacInstance inst;
    int line_no = 0;
    bool have_header = false;
    std::uint64_t rows_seen = 0;
    int last_line = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        if (!have_header) {
            long long m = 0, n = 0;
            if (!(ss >> m)) continue;  // blank or comment-only line
            if (!(ss >> n)) throw fail(line_no, "expected header \"m n\"");
            std::string extra;
            if (ss >> extra) throw fail(line_no, "unexpected token \"" + extra + "\" after header");
            if (m < 1 || n < 1) throw fail(line_no, "widths must be at least 1");
            if (m > 30) throw fail(line_no, "pointer width too large for an explicit table");
            inst.m = static_cast<int>(m);
            inst.n = static_cast<int>(n);
            inst.table.reserve(inst.pointer_count());
            have_header = true;
            continue;
        }
        std::string word;
        while (ss >> word) {
            if (rows_seen == inst.pointer_count())
                throw fail(line_no, "more than 2^m = " + std::to_string(inst.pointer_count()) +
                                        " table entries");
            if (word.size() != static_cast<std::size_t>(inst.n))
                throw fail(line_no, "entry \"" + word + "\" is not " + std::to_string(inst.n) +
                                        " binary digits");
            std::uint64_t value = 0;
            for (char c : word) {
                if (c != '0' && c != '1')
                    throw fail(line_no, "entry \"" + word + "\" contains a non-binary digit");
                value = (value << 1) | static_cast<std::uint64_t>(c - '0');
            }
            inst.table.push_back(value);
            ++rows_seen;
            last_line = line_no;
        }
    }
    if (!have_header) throw fail(line_no, "missing header \"m n\"");
    if (rows_seen != inst.pointer_count())
        throw fail(last_line ? last_line : line_no,
                   "expected 2^m = " + std::to_string(inst.pointer_count()) + " table entries, got " +
                       std::to_string(rows_seen) + " (entry for pointer " + std::to_string(rows_seen) +
                       " is missing)");
    inst.validate();
    return inst;
}

inline DacInstance DacInstance::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    return from_stream(in, path);
}

}  // namespace qdac
