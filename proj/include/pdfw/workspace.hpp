#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pdfw/linops.hpp"

namespace pdfw {

enum class BufferSpace { Image, Transform, Data };

std::string_view to_string(BufferSpace space);

/// Record of every array a solver run allocates, tagged by the space it lives in.
class AllocationLedger {
 public:
  struct Entry {
    std::string name;
    BufferSpace space;
    std::size_t length;
    bool persistent;  // lives across iterations as solver state
  };

  Vector allocate(std::string name, BufferSpace space, std::size_t length, bool persistent,
                  double fill = 0.0);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t count(BufferSpace space, bool persistent) const;
  /// Largest single buffer recorded for `space`, optionally restricted to scratch or state.
  std::size_t max_length(BufferSpace space, bool persistent) const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace pdfw
