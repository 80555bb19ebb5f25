#include "advwb/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace advwb {

namespace {

unsigned default_threads() {
    if (const char* env = std::getenv("ADVWB_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& configured() {
    static std::atomic<unsigned> n{default_threads()};
    return n;
}

}  // namespace

unsigned thread_count() {
    return configured().load();
}

void set_thread_count(unsigned n) {
    configured().store(std::max(1u, n));
}

}  // namespace advwb
