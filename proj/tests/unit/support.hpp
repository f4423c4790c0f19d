#pragma once

#include "doctest.h"
#include "packdim/error.hpp"

// Checks that expr throws packdim::Error with the given code.
#define CHECK_CODE(expr, expected)                                   \
  do {                                                               \
    bool thrown_ = false;                                            \
    try {                                                            \
      (void)(expr);                                                  \
    } catch (const packdim::Error& e_) {                             \
      thrown_ = true;                                                \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());             \
    }                                                                \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);         \
  } while (0)
