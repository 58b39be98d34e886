#include "acceptance/criteria.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    int failures = solvdiff::accept::run_acceptance(only);
    if (failures > 0) {
        std::printf("ACCEPTANCE: %d check(s) failed\n", failures);
        return 1;
    }
    std::printf("ACCEPTANCE: all checks passed\n");
    return 0;
}
