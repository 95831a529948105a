#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pichan/diagnostic.hpp"
#include "pichan/name.hpp"
#include "pichan/value.hpp"

namespace pichan {

struct ProcessNode;

// Immutable process term. Copies share structure, so passing by value is
// cheap and safe across threads.
class Process {
 public:
  Process();  // nil

  static Process nil(SourceSpan span = {});
  static Process par(Process left, Process right, SourceSpan span = {});
  static Process restrict(Name name, Process body, SourceSpan span = {});
  static Process output(Name subject, std::vector<Value> objects, Process cont,
                        SourceSpan span = {});
  static Process input(Name subject, std::vector<Name> objects, bool binding,
                       Process cont, SourceSpan span = {});
  static Process repeat(Process body, SourceSpan span = {});
  static Process fusion(Value left, Value right, SourceSpan span = {});

  const ProcessNode& node() const { return *node_; }
  const SourceSpan& span() const;

  template <typename T>
  const T* get_if() const;
  template <typename T>
  bool is() const {
    return get_if<T>() != nullptr;
  }

  // Structural equality on names by id; spans are ignored.
  friend bool operator==(const Process& a, const Process& b);

 private:
  explicit Process(std::shared_ptr<const ProcessNode> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const ProcessNode> node_;
};

struct Nil {};
struct Par {
  Process left;
  Process right;
};
struct New {
  Name name;
  Process body;
};
struct Out {
  Name subject;
  std::vector<Value> objects;
  Process cont;
};
// binding=true is surface sugar: the objects are binders for `cont`.
// In core form every input is non-binding and its objects are free names.
struct In {
  Name subject;
  std::vector<Name> objects;
  bool binding = false;
  Process cont;
};
struct Repeat {
  Process body;
};
struct Fusion {
  Value left;
  Value right;
};

using ProcessVariant = std::variant<Nil, Par, New, Out, In, Repeat, Fusion>;

struct ProcessNode {
  ProcessVariant term;
  SourceSpan span;
};

template <typename T>
const T* Process::get_if() const {
  return std::get_if<T>(&node_->term);
}

std::set<Name> free_names(const Process& p);

// Capture-avoiding replacement of the free occurrences of `from` by `to`.
// Binders that would capture `to` are renamed to ids above every id in play.
Process substitute(const Process& p, const Name& from, const Name& to);

// Node count, where every name or literal occurrence is one node.
std::size_t ast_size(const Process& p);

std::uint64_t max_name_id(const Process& p);

// True iff no binding input remains.
bool is_core(const Process& p);

enum class FreeNameMatch { ById, ByDisplay };

// Equality up to renaming of bound names. Free names are matched by id, or
// by display when comparing terms that came from different parses.
bool alpha_equivalent(const Process& a, const Process& b,
                      FreeNameMatch match = FreeNameMatch::ById);

// Compact debugging form with qualified names, e.g. `(par (out x#1 () nil) nil)`.
std::string sexpr(const Process& p);

}  // namespace pichan
