#include "stablemc/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "stablemc/errors.hpp"

namespace stablemc::kernels {

const Ops& scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();
#endif

namespace {

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
    }
    return false;
}

Backend resolve_initial() {
    if (const char* env = std::getenv("STABLEMC_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return Backend::scalar;
        if (want == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
        // Unknown or unsupported request falls through to auto selection.
    }
    if (backend_supported(Backend::avx2)) return Backend::avx2;
    return Backend::scalar;
}

std::atomic<Backend>& active_slot() {
    static std::atomic<Backend> slot{resolve_initial()};
    return slot;
}

}  // namespace

const Ops& ops_for(Backend b) {
    switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return avx2_ops();
#endif
        default:
            return scalar_ops();
    }
}

const Ops& active() {
    return ops_for(active_slot().load(std::memory_order_relaxed));
}

Backend active_backend() {
    return active_slot().load(std::memory_order_relaxed);
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::scalar};
    if (backend_supported(Backend::avx2)) out.push_back(Backend::avx2);
    return out;
}

void force_backend(Backend b) {
    if (!backend_supported(b)) {
        throw DomainError("kernel backend '" + backend_name(b) + "' not supported on this CPU");
    }
    active_slot().store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
    }
    return "unknown";
}

}  // namespace stablemc::kernels
