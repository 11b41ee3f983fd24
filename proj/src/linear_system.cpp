#include "partlin/linear_system.hpp"

namespace partlin {

namespace {

class LinearField : public VectorField {
public:
    LinearField(const std::vector<std::vector<TimeFunction>>* entries, int n)
        : entries_(entries), n_(n) {}
    int dim() const override { return n_; }
    void eval(double t, const Vec& x, Vec& out) const override {
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) acc += (*entries_)[i][j].eval(t) * x[j];
            out[i] = acc;
        }
    }
    Mat jacobian(double t, const Vec&) const override {
        Mat J(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) J(i, j) = (*entries_)[i][j].eval(t);
        return J;
    }

private:
    const std::vector<std::vector<TimeFunction>>* entries_;
    int n_;
};

bool is_zero_expr(const TimeFunction& f) {
    double v;
    if (f.is_constant(&v)) return v == 0.0;
    // Spot-check a few times; structural zero detection is not required.
    for (double t : {0.0, 0.37, 1.91, -2.63, 7.77}) {
        try {
            if (f.eval(t) != 0.0) return false;
        } catch (const DomainError&) {
            return false;
        }
    }
    return true;
}

} // namespace

LinearSystem::LinearSystem(std::vector<std::vector<TimeFunction>> entries, StructureTag tag)
    : n_(static_cast<int>(entries.size())), entries_(std::move(entries)), tag_(tag) {
    if (n_ < 1) throw ParamError("linear system needs dimension >= 1");
    for (const auto& row : entries_)
        if (static_cast<int>(row.size()) != n_) throw ParamError("matrix of entries not square");
    if (tag_ == StructureTag::Diagonal) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (i != j && !is_zero_expr(entries_[i][j]))
                    throw ParamError("structure tag 'diagonal' with nonzero off-diagonal entry");
    }
    field_ = std::make_shared<LinearField>(&entries_, n_);
}

LinearSystem LinearSystem::diagonal(std::vector<TimeFunction> diag) {
    const int n = static_cast<int>(diag.size());
    std::vector<std::vector<TimeFunction>> entries(n, std::vector<TimeFunction>(n));
    for (int i = 0; i < n; ++i) entries[i][i] = std::move(diag[i]);
    return LinearSystem(std::move(entries), StructureTag::Diagonal);
}

Mat LinearSystem::matrix_at(double t) const {
    Mat A(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) A(i, j) = entries_[i][j].eval(t);
    return A;
}

namespace {

// Matrix ODE X' = A(t) X, flattened column-major.
class TransitionField : public VectorField {
public:
    explicit TransitionField(const LinearSystem& A) : A_(A), n_(A.dim()) {}
    int dim() const override { return n_ * n_; }
    void eval(double t, const Vec& z, Vec& out) const override {
        Mat At = A_.matrix_at(t);
        Eigen::Map<const Mat> X(z.data(), n_, n_);
        Eigen::Map<Mat>(out.data(), n_, n_) = At * X;
    }

private:
    const LinearSystem& A_;
    int n_;
};

} // namespace

Mat transition_matrix(const LinearSystem& A, double t, double s, const IntegratorConfig& cfg) {
    const int n = A.dim();
    if (t == s) return Mat::Identity(n, n);
    TransitionField f(A);
    Vec z0(n * n);
    Eigen::Map<Mat>(z0.data(), n, n) = Mat::Identity(n, n);
    IntegratorConfig c = cfg;
    c.blowup_cap = std::max(cfg.blowup_cap, 1e30); // transition norms grow exponentially
    Vec zf = flow(f, s, t, z0, c);
    return Eigen::Map<const Mat>(zf.data(), n, n);
}

} // namespace partlin
