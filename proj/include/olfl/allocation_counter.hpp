// Copyright 2026 The olfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OLFL_ALLOCATION_COUNTER_HPP_
#define OLFL_ALLOCATION_COUNTER_HPP_

// Replaces the global allocation functions with versions that keep
// olfl::heap::live and olfl::heap::peak current. Include from exactly one
// translation unit of a binary.

#include <cstdlib>
#include <new>

#include "olfl/experiment.hpp"

namespace olfl::heap::detail {

// Each block carries its size in a 16-byte header.
inline constexpr std::size_t kHeader = 16;

inline void* allocate(std::size_t size) {
  void* raw = std::malloc(size + kHeader);
  if (raw == nullptr) throw std::bad_alloc();
  *static_cast<std::size_t*>(raw) = size;
  const std::size_t now = live.fetch_add(size) + size;
  std::size_t seen = peak.load();
  while (now > seen && !peak.compare_exchange_weak(seen, now)) {
  }
  return static_cast<char*>(raw) + kHeader;
}

// GCC cannot see that inlined operator delete pairs with this malloc.
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wmismatched-new-delete"
#endif
inline void release(void* p) noexcept {
  if (p == nullptr) return;
  char* raw = static_cast<char*>(p) - kHeader;
  live.fetch_sub(*reinterpret_cast<std::size_t*>(raw));
  std::free(raw);
}
#if defined(__GNUC__) && !defined(__clang__)
#pragma GCC diagnostic pop
#endif

struct Enable {
  Enable() { tracking.store(true); }
};
inline Enable enable;

}  // namespace olfl::heap::detail

void* operator new(std::size_t size) { return olfl::heap::detail::allocate(size); }
void* operator new[](std::size_t size) { return olfl::heap::detail::allocate(size); }
void operator delete(void* p) noexcept { olfl::heap::detail::release(p); }
void operator delete[](void* p) noexcept { olfl::heap::detail::release(p); }
void operator delete(void* p, std::size_t) noexcept { olfl::heap::detail::release(p); }
void operator delete[](void* p, std::size_t) noexcept { olfl::heap::detail::release(p); }

#endif  // OLFL_ALLOCATION_COUNTER_HPP_
