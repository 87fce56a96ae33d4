// Normalized level-r pairings of two torus curves approaching their limit.

#include <cstdio>

#include "qtrace/qtrace.hpp"

int main() {
    using namespace qtrace;
    const SkeinElementT x = parse_skein("(1,0)");
    const SkeinElementT y = parse_skein("(1,1) - (0,1)");

    std::printf("x = %s, y = %s\n", to_string(x).c_str(), to_string(y).c_str());
    std::printf("x * y = %s\n", to_string(fg_mul(x, y)).c_str());
    std::printf("limit <y,y> = %g\n", pair_limit_torus(y, y));
    for (int r : {5, 10, 20, 50, 100, 200}) {
        const Level level(r);
        std::printf("r=%3d  <x,x>/r = %.10f  <y,y>/r = %.10f\n", r, pair_level_torus(x, x, level).real() / r,
                    pair_level_torus(y, y, level).real() / r);
    }
}
