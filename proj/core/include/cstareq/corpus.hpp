#pragma once

// Built-in regression corpus: the worked matrix examples with their expected
// outcomes, compiled into the library so running them needs no file I/O.

#include <string>
#include <vector>

namespace cstareq {

struct CorpusResult {
    std::string name;    // short slug for the example
    std::string anchor;  // one-line statement of the fact being checked
    bool pass = false;
    std::string detail;  // diagnostics on failure, summary on success
};

// Run every built-in example; results are ordered by example index.
std::vector<CorpusResult> run_corpus();

}  // namespace cstareq
