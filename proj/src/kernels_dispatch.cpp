#include <atomic>
#include <cstdlib>
#include <string>

#include "uq/errors.hpp"
#include "uq/kernels.hpp"

namespace uq::kernels {

const Impl* avx2_impl_compiled();  // defined in kernels_avx2.cpp

const Impl* avx2_impl() {
    static const Impl* impl = []() -> const Impl* {
        const Impl* compiled = avx2_impl_compiled();
        if (compiled == nullptr) return nullptr;
#if defined(__x86_64__) || defined(__i386__)
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            return compiled;
        }
#endif
        return nullptr;
    }();
    return impl;
}

namespace {

std::atomic<const Impl*> g_active{nullptr};

const Impl* lookup(std::string_view name) {
    if (name == "scalar") return &scalar_impl();
    if (name == "avx2") return avx2_impl();
    return nullptr;
}

const Impl* resolve_default() {
    if (const char* env = std::getenv("UQ_KERNELS"); env != nullptr && *env != '\0') {
        const Impl* chosen = lookup(env);
        if (chosen == nullptr) {
            throw ConfigError(std::string("UQ_KERNELS requests unavailable kernel variant '") +
                              env + "'");
        }
        return chosen;
    }
    if (const Impl* a = avx2_impl()) return a;
    return &scalar_impl();
}

}  // namespace

const Impl& active() {
    const Impl* current = g_active.load(std::memory_order_acquire);
    if (current == nullptr) {
        current = resolve_default();
        g_active.store(current, std::memory_order_release);
    }
    return *current;
}

void select(std::string_view name) {
    const Impl* chosen = lookup(name);
    if (chosen == nullptr) {
        throw ConfigError("unknown or unavailable kernel variant '" + std::string(name) + "'");
    }
    g_active.store(chosen, std::memory_order_release);
}

}  // namespace uq::kernels
