#pragma once

#include <vector>

#include "hypstruct/angles.hpp"
#include "hypstruct/triangulation.hpp"

namespace hyp {

// Continued fraction code [a_{n-1}, ..., a_1].
struct CFCode {
    std::vector<long> a;
};

// Exact value a_{n-1} + 1/(a_{n-2} + ... + 1/a_1) as num/den, den may be 0.
std::pair<long, long> cf_value(const std::vector<long>& a);

CFCode normalize_cf(const std::vector<long>& raw);

struct RLWord {
    // letters[k] labels the level S_{k+2}; 'R' or 'L'
    std::string letters;
    // layer indices i (tet between S_i and S_{i+1}) where the letter changes
    std::vector<int> hinges;
};

RLWord rl_word(const CFCode& cf);

struct TwoBridge {
    CFCode cf;
    int crossings = 0;
    RLWord word;
    // diagonal class flipped at S_1 .. S_{C-1}: 0 = {01|23}, 1 = {02|13}, 2 = {03|12}
    std::vector<int> flips;
    Triangulation tri;
    // per tet: layer i and copy (1 or 2)
    std::vector<int> layer, copy;
    // per tet: puncture -> vertex label
    std::vector<Perm> label;
    // per cusp: number of zigzag segments the meridian follows
    std::vector<int> meridian_segments;
};

TwoBridge build(const CFCode& cf);

// Interpolated diagonal angles z_1 .. z_{C-1} (index 0 is z_1).
std::vector<double> z_sequence(const RLWord& w, int crossings);

AnglePoint initial_angles(const CFCode& cf);
AnglePoint initial_angles(const TwoBridge& tb);

}  // namespace hyp
