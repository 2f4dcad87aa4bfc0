// Random dot-product incidence instances and their slack against the bound.
//
//   dot_slack [q] [n] [trials] [seed]

#include <cstdio>
#include <cstdlib>

#include "zqlab/harness/random.hpp"
#include "zqlab/incidence.hpp"

int main(int argc, char** argv) {
    using namespace zqlab;
    const std::int64_t q = argc > 1 ? std::atoll(argv[1]) : 7;
    const auto n = static_cast<std::size_t>(argc > 2 ? std::atoll(argv[2]) : 2);
    const int trials = argc > 3 ? std::atoi(argv[3]) : 10;
    harness::Rng rng(argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 1);
    try {
        const Modulus mod(q);
        const auto dom = coprime_tuples(mod, n);
        std::printf("q=%lld n=%zu |domain|=%zu Theta=%s\n", static_cast<long long>(q), n, dom.size(),
                    to_string(theta(mod, static_cast<unsigned>(n))).c_str());
        std::printf("%6s %6s %6s %8s %14s %12s\n", "lambda", "|A|", "|B|", "count", "main", "slack");
        for (int t = 0; t < trials; ++t) {
            const auto lambda = harness::random_unit(rng, mod);
            const auto sa = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(dom.size())));
            const auto sb = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(dom.size())));
            auto a = harness::random_subset(rng, mod, n, dom, sa);
            auto b = harness::random_subset(rng, mod, n, dom, sb);
            const auto r = check_inequality(IncidenceInstance::dot(std::move(a), std::move(b), lambda));
            std::printf("%6lld %6zu %6zu %8llu %14.4f %12.4f\n", static_cast<long long>(lambda), sa, sb,
                        static_cast<unsigned long long>(r.count), to_double(r.main_term), r.slack);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
