/*
 * Acceptance gate: runs every verification suite at full scale and enforces
 * the stated time budgets.  Prints one pass/fail line per criterion and the
 * failure detail when something breaks.
 */
#include "equik/suites.hpp"

#include <cstdio>
#include <cstring>
#include <string>

int main(int argc, char** argv) {
    equik::SuiteOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
        if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) opt.threads = std::atoi(argv[++i]);
    }

    struct Criterion {
        const char* title;
        const char* suite;
        double budget;  // seconds; 0 = none
    };
    const Criterion criteria[] = {
        {"1 double-coset isomorphisms", "doublecoset", 120.0},
        {"2 frobenius reciprocity", "frobenius", 0},
        {"3 span coherence", "spans", 0},
        {"4 splitting at module level", "splitting", 0},
        {"5 phi/ev round trip and hom identification", "phi_ev", 0},
        {"6 burnside identifications", "burnside", 0},
        {"7 twisted group rings", "twisted", 0},
        {"8 extension of scalars", "extension", 0},
        {"9 geometry and chain-level transfer", "geometry", 10.0},
        {"10 twisted module comparison", "comparison", 0},
    };

    bool all = true;
    for (const Criterion& c : criteria) {
        equik::SuiteResult r = equik::run_suite(c.suite, opt);
        bool in_budget = c.budget <= 0 || r.seconds < c.budget;
        bool pass = r.pass && in_budget;
        all = all && pass;
        std::printf("[%s] criterion %s: %lld cases in %.2fs%s\n", pass ? "PASS" : "FAIL", c.title,
                    r.cases, r.seconds, in_budget ? "" : " (over budget)");
        for (const auto& f : r.failures) std::printf("        %s\n", f.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
