#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace sitecalc {

using json = nlohmann::json;

// Every domain failure carries a stable code (e.g. "CycleError") and a
// machine-readable witness.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message, json witness = json::object())
        : std::runtime_error(message), code_(std::move(code)), witness_(std::move(witness)) {}

    const std::string& code() const noexcept { return code_; }
    const json& witness() const noexcept { return witness_; }

    json to_json() const {
        return {{"error", {{"code", code_}, {"message", what()}, {"witness", witness_}}}};
    }

private:
    std::string code_;
    json witness_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message,
                              json witness = json::object()) {
    throw Error(std::move(code), message, std::move(witness));
}

} // namespace sitecalc
