#pragma once

#include <stdexcept>
#include <string>

namespace levycross {

// Error taxonomy shared by the library and the CLI. Every error carries a
// short machine-readable code; the CLI maps codes to exit statuses
// (config -> 2, budget -> 4, everything else -> 3).
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct domain_error : error {
    explicit domain_error(const std::string& what, const char* code = "domain")
        : error(code, what) {}
};

struct pole_error : domain_error {
    explicit pole_error(const std::string& what) : domain_error(what, "pole") {}
};

struct overflow_error : domain_error {
    explicit overflow_error(const std::string& what) : domain_error(what, "overflow") {}
};

struct adaptedness_error : domain_error {
    explicit adaptedness_error(const std::string& what) : domain_error(what, "adaptedness") {}
};

struct unsupported_error : domain_error {
    explicit unsupported_error(const std::string& what) : domain_error(what, "unsupported") {}
};

struct no_solution_error : domain_error {
    explicit no_solution_error(const std::string& what) : domain_error(what, "no_solution") {}
};

struct config_error : error {
    explicit config_error(const std::string& what) : error("config", what) {}
};

struct budget_error : error {
    explicit budget_error(const std::string& what) : error("budget", what) {}
};

} // namespace levycross
