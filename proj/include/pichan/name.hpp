#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace pichan {

enum class NameOrigin { Source, Fresh };

// A channel name. Identity is the id alone; `display` is only a label for
// printing and never participates in comparisons.
struct Name {
  std::uint64_t id = 0;
  std::string display;
  NameOrigin origin = NameOrigin::Source;

  friend bool operator==(const Name& a, const Name& b) { return a.id == b.id; }
  friend std::strong_ordering operator<=>(const Name& a, const Name& b) {
    return a.id <=> b.id;
  }
};

// `display#id`, the form used by XIR and traces.
std::string qualified(const Name& n);

// Hands out ids in increasing order starting at `first`.
class NameSupply {
 public:
  explicit NameSupply(std::uint64_t first = 1) : next_(first) {}

  Name fresh(std::string display, NameOrigin origin = NameOrigin::Fresh) {
    return Name{next_++, std::move(display), origin};
  }
  std::uint64_t peek() const { return next_; }

 private:
  std::uint64_t next_;
};

}  // namespace pichan
