#pragma once

#include <string>
#include <vector>

#include "partlin/ode.hpp"
#include "partlin/time_function.hpp"

namespace partlin {

enum class StructureTag { Diagonal, Triangular, Full };

// x' = A(t) x with expression-defined entries.
class LinearSystem {
public:
    LinearSystem(std::vector<std::vector<TimeFunction>> entries, StructureTag tag);

    // Diagonal system from its diagonal entries.
    static LinearSystem diagonal(std::vector<TimeFunction> diag);

    int dim() const { return n_; }
    StructureTag structure() const { return tag_; }
    const TimeFunction& entry(int i, int j) const { return entries_[i][j]; }

    Mat matrix_at(double t) const;

    // The field view x' = A(t) x.
    const VectorField& field() const { return *field_; }

private:
    int n_;
    std::vector<std::vector<TimeFunction>> entries_;
    StructureTag tag_;
    std::shared_ptr<VectorField> field_;
};

// Evolution operator Phi(t, s); Phi(s, s) = I exactly.
Mat transition_matrix(const LinearSystem& A, double t, double s,
                      const IntegratorConfig& cfg = {});

} // namespace partlin
