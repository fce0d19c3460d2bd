#pragma once

#include <doctest.h>

#include "nfzwda/error.hpp"

namespace nfzwda::testing {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an nfzwda::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace nfzwda::testing
