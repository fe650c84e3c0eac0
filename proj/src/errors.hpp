#pragma once

#include <stdexcept>
#include <string>

#include "epsol/epsol.h"

namespace epsol {

// Failure carrying the C-level status code; the C API maps it 1:1.
class Error : public std::runtime_error {
public:
    Error(epsol_status status, std::string message)
        : std::runtime_error(std::move(message)), status_(status) {}

    epsol_status status() const noexcept { return status_; }

private:
    epsol_status status_;
};

[[noreturn]] inline void fail(epsol_status status, const std::string& message) {
    throw Error(status, message);
}

inline const char* status_name(epsol_status status) {
    switch (status) {
        case EPSOL_OK: return "ok";
        case EPSOL_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case EPSOL_ERR_DOMAIN: return "domain-error";
        case EPSOL_ERR_INADMISSIBLE: return "inadmissible";
        case EPSOL_ERR_BRACKET_FAILURE: return "bracket-failure";
        case EPSOL_ERR_SONIC_SINGULARITY: return "sonic-singularity";
        case EPSOL_ERR_NON_MONOTONE: return "non-monotone";
        case EPSOL_ERR_DRIFT_EXCEEDED: return "drift-exceeded";
        case EPSOL_ERR_AMPLITUDE_TOO_SMALL: return "amplitude-too-small";
        case EPSOL_ERR_INSUFFICIENT_RESOLUTION: return "insufficient-resolution";
        case EPSOL_ERR_ALLOC: return "allocation-failure";
        case EPSOL_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

} // namespace epsol
