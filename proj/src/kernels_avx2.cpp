#include "permlab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace permlab::kernels {

// Whole-span compare: one 32-byte block covers every desk-scale prefix.
// Padding bytes are 0xFF = -1 as signed, so `x > lo` rejects them for any
// lo >= 0 and no tail masking is needed.
int count_in_open_interval_avx2(const uint8_t* data, int len, int lo, int hi) {
    const __m256i vlo = _mm256_set1_epi8(static_cast<char>(lo));
    const __m256i vhi = _mm256_set1_epi8(static_cast<char>(hi));
    int count = 0;
    for (int base = 0; base < len; base += kPad) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + base));
        const __m256i gt = _mm256_cmpgt_epi8(x, vlo);
        const __m256i lt = _mm256_cmpgt_epi8(vhi, x);
        const unsigned mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_and_si256(gt, lt)));
        count += __builtin_popcount(mask);
    }
    return count;
}

}  // namespace permlab::kernels

#endif
