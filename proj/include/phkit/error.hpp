#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace phkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented type invariant (NaN weight, unsorted edge, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

namespace detail {
inline std::string cell_to_string(const std::vector<std::uint32_t>& cell) {
  std::string s = "{";
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(cell[i]);
  }
  return s + "}";
}
}  // namespace detail

class MonotonicityViolation : public Error {
 public:
  MonotonicityViolation(std::vector<std::uint32_t> cell, std::vector<std::uint32_t> face)
      : Error("face " + detail::cell_to_string(face) + " enters after its coface " +
              detail::cell_to_string(cell)),
        cell_(std::move(cell)),
        face_(std::move(face)) {}
  const std::vector<std::uint32_t>& cell() const { return cell_; }
  const std::vector<std::uint32_t>& face() const { return face_; }

 private:
  std::vector<std::uint32_t> cell_, face_;
};

class MissingFace : public Error {
 public:
  MissingFace(std::vector<std::uint32_t> cell, std::vector<std::uint32_t> face)
      : Error("cell " + detail::cell_to_string(cell) + " is missing its face " +
              detail::cell_to_string(face)),
        cell_(std::move(cell)),
        face_(std::move(face)) {}
  const std::vector<std::uint32_t>& cell() const { return cell_; }
  const std::vector<std::uint32_t>& face() const { return face_; }

 private:
  std::vector<std::uint32_t> cell_, face_;
};

class DuplicateCell : public Error {
 public:
  explicit DuplicateCell(const std::vector<std::uint32_t>& cell)
      : Error("cell " + detail::cell_to_string(cell) + " listed twice") {}
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class DuplicatePoints : public Error {
 public:
  DuplicatePoints(std::size_t first, std::size_t second)
      : Error("points " + std::to_string(first) + " and " + std::to_string(second) +
              " coincide"),
        first_(first),
        second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_, second_;
};

class UniformBitmap : public Error {
 public:
  UniformBitmap() : Error("binary bitmap has no foreground/background boundary") {}
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class EssentialPair : public Error {
 public:
  EssentialPair() : Error("pair never dies; it has no death column") {}
};

class NotDegreeOne : public Error {
 public:
  NotDegreeOne() : Error("cycle tightening is defined for degree-1 cycles only") {}
};

class BadRange : public Error {
 public:
  using Error::Error;
};

class BadParams : public Error {
 public:
  using Error::Error;
};

class BadDegree : public Error {
 public:
  explicit BadDegree(int degree)
      : Error("diagram has no degree " + std::to_string(degree)) {}
};

class NoPairs : public Error {
 public:
  NoPairs() : Error("diagram has no finite pairs") {}
};

class MissingProvenance : public Error {
 public:
  MissingProvenance() : Error("diagram file carries no provenance; recompute without --no-provenance") {}
};

/// Malformed text input; `line()` is 1-based (0 when not line-specific).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace phkit
