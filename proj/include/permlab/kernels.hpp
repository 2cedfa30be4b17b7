#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Value-interval counting kernels for the enumeration inner loop.
//
// count_in_open_interval(data, len, lo, hi) returns |{ i < len : lo < data[i] < hi }|.
//
// Contract shared by all variants:
//   - 0 <= data[i] <= 126 for i < len, 0 <= lo <= hi <= 127;
//   - for the SIMD variants, data must be readable up to padded_len(len)
//     bytes and data[len .. padded_len(len)) must be 0xFF (the sentinel is
//     never counted: as a signed byte it fails lo < x for every lo >= 0).
//
// The scalar kernel is the reference; SIMD variants are selected at runtime
// (override with PERMLAB_KERNEL=scalar|avx2|neon) and are equivalence-tested
// against it.
namespace permlab::kernels {

inline constexpr int kPad = 32;
inline constexpr uint8_t kSentinel = 0xFF;

constexpr size_t padded_len(int len) {
    return (static_cast<size_t>(len) + kPad - 1) / kPad * kPad;
}

enum class Impl { scalar, avx2, neon };

std::string impl_name(Impl impl);

int count_in_open_interval_scalar(const uint8_t* data, int len, int lo, int hi);
#if defined(__x86_64__) || defined(_M_X64)
int count_in_open_interval_avx2(const uint8_t* data, int len, int lo, int hi);
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
int count_in_open_interval_neon(const uint8_t* data, int len, int lo, int hi);
#endif

// Variants compiled in and usable on this machine.
std::vector<Impl> available_impls();

Impl active_impl();
bool set_active_impl(Impl impl);  // false when the variant is unavailable

using CountFn = int (*)(const uint8_t*, int, int, int);
CountFn active_fn();

inline int count_in_open_interval(const uint8_t* data, int len, int lo, int hi) {
    return active_fn()(data, len, lo, hi);
}

}  // namespace permlab::kernels
