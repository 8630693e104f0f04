#include "kedial/tensor.hpp"

#include <atomic>
#include <sstream>

namespace kedial {

namespace {
std::atomic<bool> g_checked{true};
}

void set_checked_mode(bool on) { g_checked.store(on, std::memory_order_relaxed); }
bool checked_mode() { return g_checked.load(std::memory_order_relaxed); }

bool all_finite(const Tensor& t) {
    for (double x : t.data) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

void check_finite(const Tensor& t, const char* op) {
    if (!checked_mode()) return;
    if (!all_finite(t)) {
        throw NumericError(std::string("op '") + op + "' produced a non-finite value");
    }
}

std::string shape_str(const std::vector<int>& shape) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ", ";
        os << shape[i];
    }
    os << "]";
    return os.str();
}

}  // namespace kedial
