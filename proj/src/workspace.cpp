#include "pdfw/workspace.hpp"

#include <algorithm>

namespace pdfw {

std::string_view to_string(BufferSpace space) {
  switch (space) {
    case BufferSpace::Image: return "image";
    case BufferSpace::Transform: return "transform";
    case BufferSpace::Data: return "data";
  }
  return "unknown";
}

Vector AllocationLedger::allocate(std::string name, BufferSpace space, std::size_t length,
                                  bool persistent, double fill) {
  entries_.push_back({std::move(name), space, length, persistent});
  return Vector(length, fill);
}

std::size_t AllocationLedger::count(BufferSpace space, bool persistent) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return e.space == space && e.persistent == persistent;
  }));
}

std::size_t AllocationLedger::max_length(BufferSpace space, bool persistent) const {
  std::size_t best = 0;
  for (const auto& e : entries_) {
    if (e.space == space && e.persistent == persistent) best = std::max(best, e.length);
  }
  return best;
}

}  // namespace pdfw
