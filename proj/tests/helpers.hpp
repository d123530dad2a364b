#pragma once

#include "jibisim/compiler.hpp"
#include "jibisim/parser.hpp"

#include <string>
#include <vector>

namespace jibisim::testing {

/// Compiles source text over a fixed {a, b} base alphabet so action ids
/// line up across fixtures.
inline Process proc(const std::string& text) {
    auto [term, defs] = parse_process(text);
    return compile(term, defs, Alphabet({"a", "b"}));
}

inline std::vector<Process> compiled_universe_terms(int max_size) {
    std::vector<Process> out;
    const Alphabet ab({"a", "b"});
    for (const ProcessTerm& t : enumerate_terms({"a", "b"}, max_size))
        out.push_back(compile(t, {}, ab));
    return out;
}

} // namespace jibisim::testing
