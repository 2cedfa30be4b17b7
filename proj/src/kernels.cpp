#include "permlab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace permlab::kernels {

int count_in_open_interval_scalar(const uint8_t* data, int len, int lo, int hi) {
    int count = 0;
    for (int i = 0; i < len; ++i) {
        const int x = data[i];
        count += (x > lo) & (x < hi);
    }
    return count;
}

std::string impl_name(Impl impl) {
    switch (impl) {
        case Impl::scalar: return "scalar";
        case Impl::avx2: return "avx2";
        case Impl::neon: return "neon";
    }
    return "?";
}

namespace {

bool impl_usable(Impl impl) {
    switch (impl) {
        case Impl::scalar:
            return true;
        case Impl::avx2:
#if defined(PERMLAB_HAVE_AVX2_KERNEL)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Impl::neon:
#if defined(PERMLAB_HAVE_NEON_KERNEL)
            return true;  // baseline on aarch64
#else
            return false;
#endif
    }
    return false;
}

CountFn fn_for(Impl impl) {
    switch (impl) {
        case Impl::scalar:
            return &count_in_open_interval_scalar;
        case Impl::avx2:
#if defined(PERMLAB_HAVE_AVX2_KERNEL)
            return &count_in_open_interval_avx2;
#else
            break;
#endif
        case Impl::neon:
#if defined(PERMLAB_HAVE_NEON_KERNEL)
            return &count_in_open_interval_neon;
#else
            break;
#endif
    }
    return &count_in_open_interval_scalar;
}

Impl pick_default() {
    if (const char* env = std::getenv("PERMLAB_KERNEL")) {
        const std::string want(env);
        for (Impl impl : {Impl::scalar, Impl::avx2, Impl::neon})
            if (want == impl_name(impl) && impl_usable(impl)) return impl;
        // Unknown or unusable request falls through to auto-detection.
    }
#if defined(PERMLAB_HAVE_AVX2_KERNEL)
    if (impl_usable(Impl::avx2)) return Impl::avx2;
#endif
#if defined(PERMLAB_HAVE_NEON_KERNEL)
    if (impl_usable(Impl::neon)) return Impl::neon;
#endif
    return Impl::scalar;
}

struct Dispatch {
    std::atomic<Impl> impl;
    std::atomic<CountFn> fn;
    Dispatch() {
        const Impl d = pick_default();
        impl.store(d, std::memory_order_relaxed);
        fn.store(fn_for(d), std::memory_order_relaxed);
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

std::vector<Impl> available_impls() {
    std::vector<Impl> out;
    for (Impl impl : {Impl::scalar, Impl::avx2, Impl::neon})
        if (impl_usable(impl)) out.push_back(impl);
    return out;
}

Impl active_impl() { return dispatch().impl.load(std::memory_order_relaxed); }

bool set_active_impl(Impl impl) {
    if (!impl_usable(impl)) return false;
    dispatch().impl.store(impl, std::memory_order_relaxed);
    dispatch().fn.store(fn_for(impl), std::memory_order_relaxed);
    return true;
}

CountFn active_fn() { return dispatch().fn.load(std::memory_order_relaxed); }

}  // namespace permlab::kernels
