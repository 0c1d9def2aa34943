#pragma once

#include <doctest.h>

#include <string>

#include "error.hpp"

namespace support {

inline micvib::ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const micvib::Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return micvib::ErrorCode::invalid_argument;
}

inline std::string error_text(auto&& f)
{
    try {
        f();
    } catch (const micvib::Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace support
