#pragma once

#include <string_view>

namespace fieldcensus::group_data {

/// Copies of the generator files under data/groups, compiled in so that the
/// library works without the data directory. A test checks they agree.
struct Entry {
  std::string_view name;
  int degree;
  std::string_view text;
};

inline constexpr Entry kEntries[] = {
    {"9T16", 9, "# 3^2:D8, affine on F_3^2 with the monomial point stabilizer\n# degree 9\n# order 72\n(1 4 7)(2 5 8)(3 6 9)\n(2 4)(3 7)(6 8)\n(4 7)(5 8)(6 9)\n"},
    {"AGL3_2", 8, "# AGL3(2) on F_2^3\n# degree 8\n# order 1344\n(1 5)(2 6)(3 7)(4 8)\n(3 7)(4 8)\n(2 5 3)(4 6 7)\n"},
    {"AGammaL1_8", 8, "# AGammaL1(8): x -> a x^(2^k) + b over F_8\n# degree 8\n# order 168\n(1 5)(2 6)(3 7)(4 8)\n(2 4 6 3 7 8 5)\n(2 4 3)(6 8 7)\n"},
    {"PGL2_5", 6, "# PGL2(5) on the projective line over F_5\n# degree 6\n# order 120\n(1 2 3 4 5)\n(2 3 5 4)\n(1 6)(2 5)\n"},
    {"PGL2_7", 8, "# PGL2(7) on the projective line over F_7\n# degree 8\n# order 336\n(1 2 3 4 5 6 7)\n(2 4 3 7 5 6)\n(1 8)(2 7)(3 4)(5 6)\n"},
    {"PGL2_9", 10, "# PGL2(9) on the projective line over F_9\n# degree 10\n# order 720\n(1 4 7)(2 5 8)(3 6 9)\n(2 8 4 5 3 6 7 9)\n(1 10)(4 7)(5 6)(8 9)\n"},
    {"PGammaL2_8", 9, "# PGammaL2(8) = PSL2(8).3 on the projective line over F_8\n# degree 9\n# order 1512\n(1 5)(2 6)(3 7)(4 8)\n(2 4 6 3 7 8 5)\n(1 9)(2 8)(3 6)(4 7)\n(2 4 3)(6 8 7)\n"},
    {"PGammaL2_9", 10, "# PGammaL2(9) = Aut(S6) on the projective line over F_9\n# degree 10\n# order 1440\n(1 4 7)(2 5 8)(3 6 9)\n(2 8 4 5 3 6 7 9)\n(1 10)(4 7)(5 6)(8 9)\n(2 3)(5 6)(8 9)\n"},
    {"PSL2_7", 8, "# PSL2(7) on the projective line over F_7\n# degree 8\n# order 168\n(1 2 3 4 5 6 7)\n(2 3 5)(4 7 6)\n(1 8)(2 7)(3 4)(5 6)\n"},
};

}  // namespace fieldcensus::group_data
