// Smallest partial-quotient bound M for which Z_M(q) meets the quadratic
// residues, for a few primes q.
//
//   zaremba_witness [q ...]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "zqlab/zaremba.hpp"

int main(int argc, char** argv) {
    using namespace zqlab;
    std::vector<std::int64_t> primes = {101, 1009, 10007};
    if (argc > 1) {
        primes.clear();
        for (int i = 1; i < argc; ++i) primes.push_back(std::atoll(argv[i]));
    }
    std::printf("%8s %4s %8s %10s %10s %16s\n", "q", "M", "witness", "|Z_M(q)|", "|Z cap QR|", "log q/loglog q");
    try {
        for (auto q : primes) {
            const auto qr = SubgroupSpec::quadratic_residues(q);
            for (std::int64_t m = 1; m <= q; ++m) {
                const auto r = find_in_subgroup(q, m, qr);
                if (!r.witness) continue;
                const double lq = std::log(static_cast<double>(q));
                std::printf("%8lld %4lld %8lld %10zu %10zu %16.3f\n", static_cast<long long>(q), static_cast<long long>(m),
                            static_cast<long long>(*r.witness), r.zaremba_size, r.intersection, lq / std::log(lq));
                break;
            }
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
