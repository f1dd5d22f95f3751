#pragma once

#include <stdexcept>
#include <string>

namespace vdec {

// Exit-code taxonomy shared by the library and the CLI:
//   2 = input could not be parsed
//   3 = a documented precondition was violated
//   4 = a constructive stage gave up (search budget, internal certificate)
//   5 = a final verification rejected an output
struct Error : std::runtime_error {
    int exit_code;
    Error(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
};

struct ParseError : Error {
    int line;
    ParseError(int line_no, const std::string& what)
        : Error(2, "parse error at line " + std::to_string(line_no) + ": " + what),
          line(line_no) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(3, what) {}
};

struct NotVdecError : PreconditionError {
    explicit NotVdecError(const std::string& what) : PreconditionError(what) {}
};

struct StageError : Error {
    explicit StageError(const std::string& what) : Error(4, what) {}
};

// Potential local search hit its restart budget without reaching a coloring
// in which every color set appears on at most two vertices.
struct SemiVdFailedError : StageError {
    explicit SemiVdFailedError(const std::string& what) : StageError(what) {}
};

// Both linear-forest strategies (factor search, deficiency construction)
// were exhausted.
struct ForestFailedError : StageError {
    explicit ForestFailedError(const std::string& what) : StageError(what) {}
};

// The degree-constrained bipartite subgraph does not exist; callers derive
// its existence from maximality of the deleted set, so this flags a caller bug.
struct HallViolatedError : StageError {
    explicit HallViolatedError(const std::string& what) : StageError(what) {}
};

// A candidate color set that the counting argument proves nonempty came up
// empty; indicates corrupted inputs rather than bad luck.
struct CandidateExhaustedError : StageError {
    explicit CandidateExhaustedError(const std::string& what) : StageError(what) {}
};

// Backtracking over path 3-colorings ran out of options.
struct SearchExhaustedError : StageError {
    explicit SearchExhaustedError(const std::string& what) : StageError(what) {}
};

struct SemiVdViolatedError : PreconditionError {
    explicit SemiVdViolatedError(const std::string& what) : PreconditionError(what) {}
};

// An exact-mode routine was handed a graph larger than its subset-enumeration
// threshold; callers fall back to the heuristic route instead.
struct SizeExceededError : PreconditionError {
    explicit SizeExceededError(const std::string& what) : PreconditionError(what) {}
};

struct VerificationError : Error {
    explicit VerificationError(const std::string& what) : Error(5, what) {}
};

}  // namespace vdec
