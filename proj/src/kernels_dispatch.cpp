#include <atomic>
#include <cstdlib>
#include <string>

#include "ricci/errors.hpp"
#include "ricci/kernels.hpp"

namespace ricci::kernels {

#ifdef RICCI_WITH_AVX2
namespace detail {
const Ops* avx2_table();
}
#endif

const Ops* avx2_ops() {
#ifdef RICCI_WITH_AVX2
    if (__builtin_cpu_supports("avx2")) return detail::avx2_table();
#endif
    return nullptr;
}

namespace {

const Ops* select_initial() {
    const char* env = std::getenv("RICCI_DISC_KERNELS");
    const std::string want = env ? env : "auto";
    if (want == "scalar") return &scalar_ops();
    if (want == "avx2") {
        if (const Ops* t = avx2_ops()) return t;
        throw ConfigError("RICCI_DISC_KERNELS=avx2 but AVX2 is unavailable");
    }
    if (want != "auto" && !want.empty())
        throw ConfigError("RICCI_DISC_KERNELS must be auto, scalar or avx2");
    if (const Ops* t = avx2_ops()) return t;
    return &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

} // namespace

const Ops& ops() {
    const Ops* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = select_initial();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void force_lane(Lane lane) {
    switch (lane) {
    case Lane::Auto:
        g_active.store(select_initial(), std::memory_order_release);
        return;
    case Lane::Scalar:
        g_active.store(&scalar_ops(), std::memory_order_release);
        return;
    case Lane::Avx2:
        if (const Ops* t = avx2_ops()) {
            g_active.store(t, std::memory_order_release);
            return;
        }
        throw ConfigError("AVX2 kernels unavailable on this machine");
    }
}

const char* active_name() { return ops().name; }

} // namespace ricci::kernels
