#pragma once

#include <panorel/error.hpp>

#include <string>

// Error code raised by fn, or "" when it returns normally.
template <typename Fn>
std::string error_code(Fn&& fn)
{
    try {
        fn();
    } catch (const panorel::Error& e) {
        return e.code();
    }
    return "";
}
