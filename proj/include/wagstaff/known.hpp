#pragma once

#include <algorithm>
#include <array>

namespace wagstaff {

// The 36 known Wagstaff prime / probable-prime exponents (p = 3 excluded
// as the trivial case W_3 = 3). 29 proved, 7 probable.
inline constexpr std::array<unsigned long, 29> kProvedExponents{
    5,    7,    11,   13,    17,    19,    23,    31,    43,   61,
    79,   101,  127,  167,   191,   199,   313,   347,   701,  1709,
    2617, 3539, 5807, 10501, 10691, 11279, 12391, 14479, 42737};

inline constexpr std::array<unsigned long, 7> kProbableExponents{
    83339, 95369, 117239, 127031, 138937, 141079, 267017};

inline bool is_proved_exponent(unsigned long p) {
    return std::find(kProvedExponents.begin(), kProvedExponents.end(), p) !=
           kProvedExponents.end();
}

inline bool is_probable_exponent(unsigned long p) {
    return std::find(kProbableExponents.begin(), kProbableExponents.end(), p) !=
           kProbableExponents.end();
}

inline bool is_known_exponent(unsigned long p) {
    return is_proved_exponent(p) || is_probable_exponent(p);
}

}  // namespace wagstaff
