#include "permlab/kernels.hpp"

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

namespace permlab::kernels {

// Same sentinel contract as the AVX2 variant: padding 0xFF reads as -1
// signed and never satisfies lo < x.
int count_in_open_interval_neon(const uint8_t* data, int len, int lo, int hi) {
    const int8x16_t vlo = vdupq_n_s8(static_cast<int8_t>(lo));
    const int8x16_t vhi = vdupq_n_s8(static_cast<int8_t>(hi));
    int count = 0;
    for (int base = 0; base < len; base += 16) {
        const int8x16_t x = vreinterpretq_s8_u8(vld1q_u8(data + base));
        const uint8x16_t gt = vcgtq_s8(x, vlo);
        const uint8x16_t lt = vcltq_s8(x, vhi);
        const uint8x16_t both = vandq_u8(vandq_u8(gt, lt), vdupq_n_u8(1));
        count += vaddvq_u8(both);
    }
    return count;
}

}  // namespace permlab::kernels

#endif
