#pragma once

#include <stdexcept>
#include <string>

namespace pf {

// Error taxonomy maps onto CLI exit codes: InputError -> 2,
// PreconditionError -> 3, CheckFailure -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  std::string kind;
  PreconditionError(std::string k, const std::string& msg)
      : Error(k + ": " + msg), kind(std::move(k)) {}
};

struct CheckFailure : Error {
  using Error::Error;
};

inline PreconditionError undefined_choice(const std::string& state, const std::string& mode) {
  return {"UndefinedChoice", "no table entry for state '" + state + "' in mode {" + mode + "}"};
}
inline PreconditionError horizon_escape(const std::string& state) {
  return {"HorizonEscape", "run can pass the strategy horizon at '" + state + "' and no default_rule is set"};
}
inline PreconditionError not_acyclic(const std::string& detail) {
  return {"NotAcyclic", detail};
}
inline PreconditionError not_almost_sure(const std::string& state) {
  return {"NotAlmostSure", "state '" + state + "' is not almost-surely winning"};
}
inline PreconditionError empty_conditioned() {
  return {"EmptyConditioned", "no state has positive value"};
}
inline PreconditionError infinite_branch(const std::string& state) {
  return {"InfiniteBranch", "uncapped infinite successor enumeration at '" + state + "'"};
}
inline PreconditionError radius_exhausted(const std::string& detail) {
  return {"RadiusExhausted", detail};
}
inline PreconditionError encoding_overflow(const std::string& detail) {
  return {"EncodingOverflow", detail};
}
inline PreconditionError nonterm_guard(const std::string& state) {
  return {"NontermGuard", "successor enumeration at '" + state +
                              "' exceeded the cap although the model declared finite branching"};
}

}  // namespace pf
