// Multiple zeta values through a given weight, with the relations among
// them found numerically at each weight.
//
//   zeta_table [max_weight=5] [digits=40]

#include "periods/relations.hpp"

#include <cstdio>
#include <cstdlib>

using namespace periods;

int main(int argc, char** argv) {
    unsigned top = argc > 1 ? std::atoi(argv[1]) : 5;
    unsigned digits = argc > 2 ? std::atoi(argv[2]) : 40;
    ZetaEvaluator ev(digits);
    for (unsigned m = 2; m <= top; ++m) {
        std::printf("weight %u\n", m);
        for (const auto& idx : enumerate_admissible(m))
            std::printf("  %-16s %s\n", idx.str().c_str(), to_scientific(ev(idx).value, digits).c_str());
        auto e = mzn_span_experiment(m, std::max(digits, 80u));
        std::printf("  span: %zu (bound d_%u = %u)\n", e.dimension(), m, e.zagier_bound);
        for (const auto& r : e.relations) std::printf("    %s\n", r.str().c_str());
    }
}
