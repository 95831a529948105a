#include "pichan/fusion_env.hpp"

namespace pichan {

FusionClash::FusionClash(Literal left, Literal right)
    : Error("fusion clash: " + literal_text(left) + " = " + literal_text(right)),
      left_(std::move(left)),
      right_(std::move(right)) {}

std::uint64_t FusionEnv::find(std::uint64_t id) const {
  for (;;) {
    auto it = parent_.find(id);
    if (it == parent_.end() || it->second == id) return id;
    id = it->second;
  }
}

std::uint64_t FusionEnv::find_compress(std::uint64_t id) {
  std::uint64_t root = find(id);
  while (id != root) {
    auto it = parent_.find(id);
    std::uint64_t next = it->second;
    it->second = root;
    id = next;
  }
  return root;
}

std::uint64_t FusionEnv::representative(const Name& n) const {
  return find(n.id);
}

std::optional<Literal> FusionEnv::attachment(const Name& n) const {
  auto it = attached_.find(find(n.id));
  if (it == attached_.end()) return std::nullopt;
  return it->second;
}

bool FusionEnv::fused_equal(const Value& a, const Value& b) const {
  if (is_name(a) && is_name(b)) {
    return find(as_name(a).id) == find(as_name(b).id);
  }
  if (is_name(b)) return fused_equal(b, a);
  if (is_name(a)) {
    auto att = attachment(as_name(a));
    return att && *att == *as_literal(b);
  }
  return *as_literal(a) == *as_literal(b);
}

void FusionEnv::merge(const Value& a, const Value& b) {
  if (!is_name(a) && !is_name(b)) {
    auto la = *as_literal(a);
    auto lb = *as_literal(b);
    if (la != lb) throw FusionClash(la, lb);
    return;
  }
  if (!is_name(a)) {
    merge(b, a);
    return;
  }
  std::uint64_t ra = find_compress(as_name(a).id);
  if (!is_name(b)) {
    Literal lit = *as_literal(b);
    auto it = attached_.find(ra);
    if (it != attached_.end()) {
      if (it->second != lit) throw FusionClash(it->second, lit);
      return;
    }
    attached_.emplace(ra, std::move(lit));
    return;
  }
  std::uint64_t rb = find_compress(as_name(b).id);
  if (ra == rb) return;

  auto ia = attached_.find(ra);
  auto ib = attached_.find(rb);
  if (ia != attached_.end() && ib != attached_.end() &&
      ia->second != ib->second) {
    throw FusionClash(ia->second, ib->second);
  }

  std::uint64_t& sa = size_.try_emplace(ra, 1).first->second;
  std::uint64_t& sb = size_.try_emplace(rb, 1).first->second;
  std::uint64_t root = ra, child = rb;
  if (sa < sb || (sa == sb && rb < ra)) std::swap(root, child);
  parent_[child] = root;
  parent_.try_emplace(root, root);
  size_[root] = sa + sb;
  size_.erase(child);

  auto ic = attached_.find(child);
  if (ic != attached_.end()) {
    attached_.try_emplace(root, ic->second);
    attached_.erase(ic);
  }
}

}  // namespace pichan
