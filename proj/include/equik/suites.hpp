/*
 * The verification suites behind `equik verify` and the acceptance test
 * binary.  Each suite enumerates or samples its cases deterministically,
 * fans independent cases out to a worker pool, and reports pass/fail with
 * failure detail.  All checks are exact integer identities.
 */
#pragma once

#include <string>
#include <vector>

namespace equik {

struct SuiteOptions {
    int max_order = 12;      // cap on |G| for the group list
    bool quick = false;      // smaller samples, for smoke testing
    int threads = 0;         // 0 = hardware concurrency
    unsigned long long seed = 20240915ULL;
};

struct SuiteResult {
    std::string name;
    bool pass = false;
    long long cases = 0;
    double seconds = 0.0;
    std::vector<std::string> failures;  // capped
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);
std::vector<SuiteResult> run_all_suites(const SuiteOptions& opt);

}  // namespace equik
