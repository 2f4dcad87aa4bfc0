// Eigenvalue clusters of the full dot-product incidence matrix on coprime
// pairs mod q: top value q, then a gap down to about sqrt(q).
//
//   spectrum_gap [q] [lambda]

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "zqlab/spectra.hpp"

int main(int argc, char** argv) {
    using namespace zqlab;
    const std::int64_t q = argc > 1 ? std::atoll(argv[1]) : 7;
    const Residue lambda = argc > 2 ? std::atoll(argv[2]) : 1;
    try {
        const Modulus mod(q);
        const auto m = build_full_matrix(IncidenceKind::dot, mod, lambda, {2, 0});
        const auto r = analyze_spectrum(m, 1e-6 * static_cast<double>(q));
        std::printf("q=%lld lambda=%lld size=%zu sqrt(q)=%.6f\n", static_cast<long long>(q), static_cast<long long>(lambda),
                    m.row_index.size(), std::sqrt(static_cast<double>(q)));
        for (const auto& c : r.clusters) std::printf("  %12.6f  x%zu\n", c.value, c.multiplicity);
        std::printf("second |value| %.6f, fourth moment %llu (float %.6f)\n", r.second_value,
                    static_cast<unsigned long long>(r.fourth_moment_exact), r.fourth_moment_float);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
