#include "dppost/types.hpp"

#include "dppost/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dppost {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
    }
}

}  // namespace

Tabulation::Tabulation(std::vector<double> values, std::vector<std::string> labels, Stratum stratum)
    : values_(std::move(values)), labels_(std::move(labels)), stratum_(std::move(stratum)) {
    if (values_.empty()) {
        throw std::invalid_argument("tabulation: at least one value required");
    }
    if (labels_.size() != values_.size()) {
        throw DimensionMismatch(values_.size(), labels_.size());
    }
    require_finite(values_, "tabulation");
}

const char* to_string(MechanismFamily family) noexcept {
    switch (family) {
        case MechanismFamily::Gaussian: return "gaussian";
        case MechanismFamily::Laplace: return "laplace";
    }
    return "unknown";
}

MechanismFamily parse_family(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "gaussian" || lower == "gauss") {
        return MechanismFamily::Gaussian;
    }
    if (lower == "laplace") {
        return MechanismFamily::Laplace;
    }
    throw std::invalid_argument("unknown mechanism family '" + name + "'");
}

MechanismSpec::MechanismSpec(MechanismFamily family, double scale, std::string provenance)
    : family_(family), scale_(scale), provenance_(std::move(provenance)) {
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
        throw std::invalid_argument("mechanism scale must be positive and finite");
    }
}

NoisyMeasurement::NoisyMeasurement(std::vector<double> values, MechanismSpec mechanism, Stratum stratum)
    : values_(std::move(values)), mechanism_(std::move(mechanism)), stratum_(std::move(stratum)) {
    if (values_.empty()) {
        throw std::invalid_argument("noisy measurement: at least one value required");
    }
    require_finite(values_, "noisy measurement");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionMismatch(rows_ * cols_, data_.size());
    }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) {
            throw DimensionMismatch(cols, r.size());
        }
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
}

ConstraintSystem::ConstraintSystem(std::vector<double> lower, std::vector<double> upper, Matrix matrix)
    : lower_(std::move(lower)), upper_(std::move(upper)), matrix_(std::move(matrix)) {
    const std::size_t p = matrix_.rows();
    if (lower_.size() != p) {
        throw DimensionMismatch(p, lower_.size());
    }
    if (upper_.size() != p) {
        throw DimensionMismatch(p, upper_.size());
    }
    if (matrix_.cols() == 0) {
        throw std::invalid_argument("constraint system: matrix has no columns");
    }
    require_finite(matrix_.data(), "constraint matrix");
    for (std::size_t k = 0; k < p; ++k) {
        if (std::isnan(lower_[k]) || std::isnan(upper_[k])) {
            throw std::invalid_argument("constraint system: NaN bound in row " + std::to_string(k));
        }
        if (lower_[k] > upper_[k]) {
            throw std::invalid_argument("constraint system: lower > upper in row " + std::to_string(k));
        }
        if (lower_[k] == kInf || upper_[k] == -kInf) {
            throw std::invalid_argument("constraint system: unsatisfiable infinite bound in row " +
                                        std::to_string(k));
        }
        const auto r = matrix_.row(k);
        if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) {
            throw std::invalid_argument("constraint system: all-zero row " + std::to_string(k));
        }
    }
}

double ConstraintSystem::row_value(std::size_t row, std::span<const double> y) const noexcept {
    const auto r = matrix_.row(row);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        acc += r[j] * y[j];
    }
    return acc;
}

PosteriorDraws::PosteriorDraws(std::size_t n, std::size_t m, std::vector<double> draws, std::size_t burn_in,
                               double acceptance_rate, std::uint64_t seed, Stratum stratum)
    : n_(n), m_(m), draws_(std::move(draws)), burn_in_(burn_in), acceptance_rate_(acceptance_rate),
      seed_(seed), stratum_(std::move(stratum)) {
    if (n_ == 0 || m_ == 0) {
        throw std::invalid_argument("posterior draws: need at least one draw of positive dimension");
    }
    if (draws_.size() != n_ * m_) {
        throw DimensionMismatch(n_ * m_, draws_.size());
    }
    if (!(acceptance_rate_ >= 0.0 && acceptance_rate_ <= 1.0)) {
        throw std::invalid_argument("posterior draws: acceptance rate outside [0, 1]");
    }
}

std::vector<double> PosteriorDraws::column(std::size_t j) const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = draws_[i * m_ + j];
    }
    return out;
}

std::vector<double> PosteriorDraws::column_means() const {
    std::vector<double> mean(m_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            mean[j] += draws_[i * m_ + j];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(n_);
    }
    return mean;
}

void validate_dimensions(std::size_t m, const ConstraintSystem& cs) {
    if (cs.dimension() != m) {
        throw DimensionMismatch(cs.dimension(), m);
    }
}

void validate_dimensions(const Tabulation& tab, const ConstraintSystem& cs) {
    validate_dimensions(tab.size(), cs);
}

}  // namespace dppost
