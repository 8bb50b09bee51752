#pragma once

#include <stdexcept>
#include <string>

namespace prizecorr {

// Error categories. Each carries a stable machine-greppable code that the
// CLI prints on stderr and maps to an exit status.
enum class errc {
    domain,       // invalid argument to a numeric primitive
    convergence,  // an iterative method exhausted its budget
    no_solution,  // a root/inversion target lies outside the attainable range
    parse,        // malformed descriptor document
    data,         // dataset invariant violation or method/data mismatch
    estimation,   // an estimator could not produce a result
};

inline const char* errc_code(errc c) {
    switch (c) {
        case errc::domain: return "E_DOMAIN";
        case errc::convergence: return "E_CONVERGENCE";
        case errc::no_solution: return "E_NO_SOLUTION";
        case errc::parse: return "E_PARSE";
        case errc::data: return "E_DATA";
        case errc::estimation: return "E_ESTIMATION";
    }
    return "E_UNKNOWN";
}

class error : public std::runtime_error {
  public:
    error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

class domain_error : public error {
  public:
    explicit domain_error(const std::string& msg) : error(errc::domain, msg) {}
};

// Carries the best available estimate so callers can decide whether the
// requested tolerance actually mattered.
class convergence_error : public error {
  public:
    convergence_error(const std::string& msg, double best)
        : error(errc::convergence, msg), best_estimate(best) {}
    double best_estimate;
};

class no_solution_error : public error {
  public:
    no_solution_error(const std::string& msg, double lo, double hi)
        : error(errc::no_solution, msg), attainable_lo(lo), attainable_hi(hi) {}
    double attainable_lo;
    double attainable_hi;
};

class parse_error : public error {
  public:
    parse_error(const std::string& msg, std::string key = {}, int line = 0)
        : error(errc::parse, msg), key(std::move(key)), line(line) {}
    std::string key;  // offending key, when known
    int line;         // 1-based line in the source document, 0 if unknown
};

class data_error : public error {
  public:
    explicit data_error(const std::string& msg) : error(errc::data, msg) {}
};

class estimation_error : public error {
  public:
    explicit estimation_error(const std::string& msg) : error(errc::estimation, msg) {}
};

}  // namespace prizecorr
