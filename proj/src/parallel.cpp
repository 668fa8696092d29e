#include "beatgen/parallel.hpp"

#include <cstdlib>
#include <string>

namespace beatgen {

unsigned resolve_worker_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BEATGEN_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
            // fall through to hardware concurrency
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace beatgen
