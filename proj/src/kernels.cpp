#include "irav/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace irav::kernels {

#if defined(IRAV_HAVE_AVX2)
const DistortionKernels& avx2_table();
#endif

namespace {

Isa detect() {
    if (std::getenv("IRAV_FORCE_SCALAR") != nullptr)
        return Isa::Scalar;
    return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if defined(IRAV_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const DistortionKernels* avx2() {
#if defined(IRAV_HAVE_AVX2)
    return avx2_supported() ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const DistortionKernels& active() {
    if (current().load(std::memory_order_relaxed) == Isa::Avx2)
        return *avx2();
    return scalar();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void select(Isa isa) {
    if (isa == Isa::Avx2 && !avx2_supported())
        throw UsageError("AVX2 kernels are not available on this machine");
    current().store(isa, std::memory_order_relaxed);
}

}  // namespace irav::kernels
