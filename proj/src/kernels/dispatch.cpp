#include <cstdlib>

#include "qsd/kernels.hpp"

namespace qsd::kernels {

const Kernels& scalar_lane();

#if defined(__x86_64__) || defined(_M_X64)
const Kernels& avx2_lane();

static bool host_has_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#if defined(__aarch64__)
const Kernels& neon_lane();
#endif

const Kernels* lane(const std::string& name) {
    if (name == "scalar") return &scalar_lane();
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && host_has_avx2()) return &avx2_lane();
#endif
#if defined(__aarch64__)
    if (name == "neon") return &neon_lane();
#endif
    return nullptr;
}

std::vector<std::string> available_lanes() {
    std::vector<std::string> names = {"scalar"};
#if defined(__x86_64__) || defined(_M_X64)
    if (host_has_avx2()) names.push_back("avx2");
#endif
#if defined(__aarch64__)
    names.push_back("neon");
#endif
    return names;
}

static const Kernels& pick() {
    const char* env = std::getenv("QSD_KERNEL");
    const std::string want = env ? env : "auto";
    if (want != "auto") {
        if (const Kernels* k = lane(want)) return *k;
        return scalar_lane();  // unknown or unavailable lane: safe fallback
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (host_has_avx2()) return avx2_lane();
#endif
#if defined(__aarch64__)
    return neon_lane();
#endif
    return scalar_lane();
}

const Kernels& active() {
    static const Kernels& chosen = pick();
    return chosen;
}

}  // namespace qsd::kernels
