// Coefficients of the associator computed by transport along [t, 1-t],
// next to the shuffle-regularized zeta values they should equal.
//
//   associator [cutoff=4] [digits=20]

#include "periods/kz.hpp"

#include <cstdio>
#include <cstdlib>

using namespace periods;

int main(int argc, char** argv) {
    unsigned cutoff = argc > 1 ? std::atoi(argv[1]) : 4;
    unsigned digits = argc > 2 ? std::atoi(argv[2]) : 20;
    auto res = associator(cutoff, digits);
    auto ref = associator_from_zeta(cutoff, digits);
    std::printf("%-8s %-26s %-26s %s\n", "word", "transport (re)", "zeta (re)", "|diff|");
    for (const auto& w : all_words(cutoff)) {
        if (w.size() == 0) continue;
        auto a = res.phi.coefficient(w), b = ref.coefficient(w);
        std::printf("%-8s %-26s %-26s %s\n", w.str().c_str(), to_scientific(a.real(), 15).c_str(),
                    to_scientific(b.real(), 15).c_str(), to_scientific((a - b).abs(), 1).c_str());
    }
    std::printf("extrapolation error estimate %s\n", to_scientific(res.error_estimate, 2).c_str());
}
