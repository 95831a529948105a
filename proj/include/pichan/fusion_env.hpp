#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "pichan/error.hpp"
#include "pichan/value.hpp"

namespace pichan {

class FusionClash : public Error {
 public:
  FusionClash(Literal left, Literal right);

  const Literal& left() const { return left_; }
  const Literal& right() const { return right_; }

 private:
  Literal left_;
  Literal right_;
};

// Union-find partition of names, each class optionally carrying one literal.
// Not internally synchronized; one VM instance owns one environment.
class FusionEnv {
 public:
  // Identifies a and b. Name-name merges classes, name-literal attaches the
  // literal to the class, literal-literal checks equality. Throws FusionClash
  // (leaving the environment unchanged) when two distinct literals would meet.
  void merge(const Value& a, const Value& b);

  bool fused_equal(const Value& a, const Value& b) const;

  std::optional<Literal> attachment(const Name& n) const;

  // Id of the class representative. Stable between merges.
  std::uint64_t representative(const Name& n) const;

 private:
  std::uint64_t find(std::uint64_t id) const;
  std::uint64_t find_compress(std::uint64_t id);

  std::map<std::uint64_t, std::uint64_t> parent_;
  std::map<std::uint64_t, std::uint64_t> size_;
  std::map<std::uint64_t, Literal> attached_;
};

}  // namespace pichan
