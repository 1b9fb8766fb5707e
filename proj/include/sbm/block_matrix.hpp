#pragma once

#include <stdexcept>
#include <vector>

namespace sbm {

// Symmetric K x K matrix of block parameters. Entries whose block contains no
// node pairs carry an explicit undefined mark; aggregations skip them.
class BlockMatrix {
public:
    BlockMatrix() = default;
    explicit BlockMatrix(int k, double fill = 0.0)
        : k_(k), vals_(static_cast<size_t>(k) * k, fill), defined_(static_cast<size_t>(k) * k, 1) {
        if (k < 1) throw std::invalid_argument("block matrix: k must be >= 1");
    }

    int k() const { return k_; }

    double at(int a, int b) const { return vals_[idx(a, b)]; }
    bool is_defined(int a, int b) const { return defined_[idx(a, b)] != 0; }

    void set(int a, int b, double v) {
        vals_[idx(a, b)] = v;
        vals_[idx(b, a)] = v;
        defined_[idx(a, b)] = defined_[idx(b, a)] = 1;
    }
    void set_undefined(int a, int b) {
        defined_[idx(a, b)] = defined_[idx(b, a)] = 0;
        vals_[idx(a, b)] = vals_[idx(b, a)] = 0.0;
    }

    bool all_in_unit_interval() const {
        for (size_t t = 0; t < vals_.size(); ++t)
            if (defined_[t] && !(vals_[t] >= 0.0 && vals_[t] <= 1.0)) return false;
        return true;
    }

private:
    size_t idx(int a, int b) const {
        if (a < 0 || b < 0 || a >= k_ || b >= k_) throw std::invalid_argument("block index out of range");
        return static_cast<size_t>(a) * k_ + b;
    }

    int k_ = 0;
    std::vector<double> vals_;
    std::vector<unsigned char> defined_;
};

}  // namespace sbm
