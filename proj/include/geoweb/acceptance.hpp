#pragma once

// Whole-library acceptance run: every headline property the laboratory
// claims, measured once with pinned inputs against hard gates. The ctest
// acceptance binary and the CLI selftest both come through here.

#include <iosfwd>
#include <string>
#include <vector>

namespace geoweb {

struct CriterionResult {
    int index = 0;
    std::string title;
    bool pass = false;
    std::string detail;  // measured values against their gates, one line
    double seconds = 0;
};

// Runs all criteria in order, streaming one pass/FAIL line per criterion
// to out as each finishes. Never throws: a criterion that raises instead
// of measuring is reported as failed with the error text.
std::vector<CriterionResult> run_acceptance_suite(std::ostream& out);

} // namespace geoweb
