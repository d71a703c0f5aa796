#pragma once

#include <ostream>

#include "doctest.h"
#include "ontoscen/errors.hpp"

namespace ontoscen {
inline std::ostream& operator<<(std::ostream& os, ErrorCode code) {
  return os << to_string(code);
}
}  // namespace ontoscen

// Asserts that `expr` throws ontoscen::Error with the given code.
#define CHECK_ERROR(expr, expected_code)                                  \
  do {                                                                    \
    try {                                                                 \
      (void)(expr);                                                       \
      FAIL("expected " #expected_code " from: " #expr);                   \
    } catch (const ontoscen::Error& e_) {                                 \
      CHECK(e_.code() == ontoscen::ErrorCode::expected_code);             \
    }                                                                     \
  } while (0)
