#pragma once

#include <stdexcept>
#include <vector>

namespace sbm {

// Class membership vector: labels[i] in {0,...,k-1}. Classes may be empty.
struct ClassAssignment {
    int k = 1;
    std::vector<int> labels;

    ClassAssignment() = default;
    ClassAssignment(int k_, std::vector<int> labels_) : k(k_), labels(std::move(labels_)) {
        if (k < 1) throw std::invalid_argument("assignment: k must be >= 1");
        for (int c : labels)
            if (c < 0 || c >= k) throw std::invalid_argument("assignment: label out of range");
    }

    int n_nodes() const { return static_cast<int>(labels.size()); }

    std::vector<int> class_sizes() const {
        std::vector<int> sz(k, 0);
        for (int c : labels) ++sz[c];
        return sz;
    }
};

}  // namespace sbm
