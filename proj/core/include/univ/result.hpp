#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace univ {

using Vertex = std::uint32_t;
using VertexList = std::vector<Vertex>;

// Algorithmic failure: something a randomized construction may legitimately
// run into. Precondition violations throw instead.
struct Failure {
  std::string stage;
  std::string reason;
  VertexList witness;

  std::string describe() const;
};

template <class T>
class Expected {
 public:
  Expected(T value) : data_(std::move(value)) {}
  Expected(Failure failure) : data_(std::move(failure)) {}

  bool ok() const { return data_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() {
    if (!ok()) throw std::logic_error("Expected::value on failure: " + error().describe());
    return std::get<0>(data_);
  }
  const T& value() const {
    if (!ok()) throw std::logic_error("Expected::value on failure: " + error().describe());
    return std::get<0>(data_);
  }
  T& operator*() { return value(); }
  const T& operator*() const { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

  const Failure& error() const { return std::get<1>(data_); }
  Failure& error() { return std::get<1>(data_); }

 private:
  std::variant<T, Failure> data_;
};

inline Failure fail(std::string stage, std::string reason, VertexList witness = {}) {
  return Failure{std::move(stage), std::move(reason), std::move(witness)};
}

// Prepends context to a failure coming from a sub-stage.
inline Failure nest(std::string stage, Failure inner) {
  inner.stage = stage + "/" + inner.stage;
  return inner;
}

}  // namespace univ
