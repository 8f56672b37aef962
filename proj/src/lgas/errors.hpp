#pragma once

#include <stdexcept>
#include <string>

namespace lgas {

class Error : public std::runtime_error {
 public:
  enum class Code {
    kInvalidArgument,
    kOutOfBounds,
    kInconsistentState,
    kDegenerate,
    kRunaway,
    kIo,
  };

  Error(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

inline void require(bool ok, Error::Code code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace lgas
