#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace pypal {

/// Value-or-error return for operations whose failure is ordinary data
/// (a parse error, a runtime error), not an exceptional condition.
template <class T, class E>
class Result {
 public:
  Result(T value) : state_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : state_(std::in_place_index<1>, std::move(error)) {}

  [[nodiscard]] bool ok() const noexcept { return state_.index() == 0; }
  explicit operator bool() const noexcept { return ok(); }

  [[nodiscard]] const T& value() const& {
    if (!ok()) throw std::logic_error("Result holds an error");
    return std::get<0>(state_);
  }
  [[nodiscard]] T& value() & {
    if (!ok()) throw std::logic_error("Result holds an error");
    return std::get<0>(state_);
  }
  [[nodiscard]] T&& value() && {
    if (!ok()) throw std::logic_error("Result holds an error");
    return std::get<0>(std::move(state_));
  }

  [[nodiscard]] const E& error() const& {
    if (ok()) throw std::logic_error("Result holds a value");
    return std::get<1>(state_);
  }

 private:
  std::variant<T, E> state_;
};

}  // namespace pypal
