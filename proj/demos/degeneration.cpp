// A degenerating family of elliptic curves near the cusp: monodromy weight
// filtration, limit mixed Hodge structure, and Hodge norm growth.

#include "periods/hodge.hpp"
#include "periods/linfilt.hpp"

#include <cstdio>

using namespace periods;

int main() {
    auto d = elliptic_orbit();
    std::printf("N =\n%s\n", to_string(d.N).c_str());

    auto W = shift_filtration(weight_filtration(d.N), d.weight);
    std::printf("W(N) shifted by %d jumps at:", d.weight);
    for (int j : W.jumps()) std::printf(" %d", j);
    std::printf("\n");

    std::printf("\nlog(1/|t|)  limit MHS  fiber polarized\n");
    for (double L : {1.0, 5.0, 20.0, 100.0}) {
        auto rep = nilpotent_orbit_check_log(d, detail::ray_log(L, 0));
        std::printf("%10.1f  %9s  %s\n", L, rep.ok ? "ok" : "fails", rep.fiber.ok ? "yes" : "no");
    }

    std::vector<double> Ls;
    for (double L = 20; L < 1e6; L *= 2.5) Ls.push_back(L);
    auto low = hodge_norm_growth(d, {Rational(0), Rational(1)}, 0.125, Ls);
    auto high = hodge_norm_growth(d, {Rational(1), Rational(0)}, 0.125, Ls);
    std::printf("\nlog ||v||^2 against log log(1/|t|):\n");
    std::printf("  v in W_0:  slope %+.3f (expected %+d)\n", low.slope, low.expected);
    std::printf("  v in W_2:  slope %+.3f (expected %+d)\n", high.slope, high.expected);
}
