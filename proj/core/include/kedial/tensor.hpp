#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kedial {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by tensor ops: bad shapes, non-finite values in checked mode.
struct NumericError : Error {
    using Error::Error;
};

// Thrown by corpus loaders and instance builders.
struct DataError : Error {
    using Error::Error;
};

// Thrown by checkpoint save/restore.
struct CheckpointError : Error {
    using Error::Error;
};

// Checked mode makes every op scan its output for NaN/Inf and throw
// NumericError naming the op. On by default; training loops may keep it on,
// the cost is one linear scan per op.
void set_checked_mode(bool on);
bool checked_mode();

using Rng = std::mt19937_64;

// Dense row-major tensor of doubles. Rank 1 or 2 covers everything the
// models need; shape is kept as a vector so rank-3 would slot in.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<int> shape_in, double fill = 0.0)
        : shape(std::move(shape_in)) {
        data.assign(static_cast<size_t>(numel_of(shape)), fill);
    }

    Tensor(std::vector<int> shape_in, std::vector<double> data_in)
        : shape(std::move(shape_in)), data(std::move(data_in)) {
        if (static_cast<int64_t>(data.size()) != numel_of(shape)) {
            throw NumericError("tensor data length does not match shape");
        }
    }

    static Tensor vec(std::vector<double> values) {
        const int n = static_cast<int>(values.size());
        return Tensor({n}, std::move(values));
    }

    static Tensor randn(std::vector<int> shape_in, Rng& rng, double stddev) {
        Tensor t(std::move(shape_in));
        std::normal_distribution<double> dist(0.0, stddev);
        for (double& x : t.data) x = dist(rng);
        return t;
    }

    int64_t numel() const { return static_cast<int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }

    int rows() const { return rank() == 2 ? shape[0] : (rank() == 1 ? 1 : 0); }
    int cols() const { return rank() == 2 ? shape[1] : (rank() == 1 ? shape[0] : 0); }

    double& at(int i) { return data[static_cast<size_t>(i)]; }
    double at(int i) const { return data[static_cast<size_t>(i)]; }
    double& at(int i, int j) { return data[static_cast<size_t>(i) * shape[1] + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * shape[1] + j]; }

    double* row_ptr(int i) { return data.data() + static_cast<size_t>(i) * shape[1]; }
    const double* row_ptr(int i) const { return data.data() + static_cast<size_t>(i) * shape[1]; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    static int64_t numel_of(const std::vector<int>& shape) {
        int64_t n = 1;
        for (int d : shape) {
            if (d <= 0) throw NumericError("tensor dimensions must be positive");
            n *= d;
        }
        return n;
    }

    std::vector<int> shape;
    std::vector<double> data;
};

bool all_finite(const Tensor& t);

// Throws NumericError naming `op` if checked mode is on and t has NaN/Inf.
void check_finite(const Tensor& t, const char* op);

std::string shape_str(const std::vector<int>& shape);

}  // namespace kedial
