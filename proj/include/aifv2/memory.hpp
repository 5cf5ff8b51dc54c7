#pragma once

#include <cstddef>
#include <cstdint>
#include <new>
#include <type_traits>

#if defined(__linux__)
#include <sys/mman.h>
#endif

namespace aifv2 {

// Allocator for the multi-hundred-megabyte DP tables.  The per-layer passes
// walk those tables in strides of a few kilobytes, so with 4 KiB pages almost
// every touch costs a TLB miss once the tables outgrow the last-level cache;
// backing large blocks with 2 MiB transparent huge pages keeps the page-walk
// cost flat.  Blocks below the threshold, and every block on platforms
// without madvise, come from the ordinary heap.
template <class T>
struct BigTableAllocator {
  using value_type = T;
  using is_always_equal = std::true_type;

  BigTableAllocator() = default;
  template <class U>
  BigTableAllocator(const BigTableAllocator<U>&) {}

  static constexpr std::size_t kHugePage = std::size_t{2} << 20;
  static constexpr std::size_t kThreshold = std::size_t{8} << 20;

  T* allocate(std::size_t count) {
    const std::size_t bytes = count * sizeof(T);
#if defined(__linux__)
    if (bytes >= kThreshold) {
      // Over-allocate by one huge page and trim so the block itself is
      // 2 MiB-aligned; the kernel only assembles huge pages on aligned
      // ranges.
      const std::size_t len = round_up(bytes);
      void* raw = ::mmap(nullptr, len + kHugePage, PROT_READ | PROT_WRITE,
                         MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
      if (raw == MAP_FAILED) throw std::bad_alloc{};
      const auto addr = reinterpret_cast<std::uintptr_t>(raw);
      const std::uintptr_t base = (addr + kHugePage - 1) & ~(kHugePage - 1);
      if (base > addr) ::munmap(raw, base - addr);
      const std::uintptr_t tail = base + len;
      const std::uintptr_t end = addr + len + kHugePage;
      if (end > tail) ::munmap(reinterpret_cast<void*>(tail), end - tail);
      void* block = reinterpret_cast<void*>(base);
      ::madvise(block, len, MADV_HUGEPAGE);
      return static_cast<T*>(block);
    }
#endif
    return static_cast<T*>(::operator new(bytes));
  }

  void deallocate(T* p, std::size_t count) noexcept {
#if defined(__linux__)
    const std::size_t bytes = count * sizeof(T);
    if (bytes >= kThreshold) {
      ::munmap(p, round_up(bytes));
      return;
    }
#endif
    ::operator delete(p);
  }

  friend bool operator==(const BigTableAllocator&, const BigTableAllocator&) {
    return true;
  }
  friend bool operator!=(const BigTableAllocator&, const BigTableAllocator&) {
    return false;
  }

 private:
  static constexpr std::size_t round_up(std::size_t bytes) {
    return (bytes + kHugePage - 1) / kHugePage * kHugePage;
  }
};

}  // namespace aifv2
