#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace dppost {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Stratum = std::string;

// A vector of confidential counts with per-coordinate labels.
class Tabulation {
public:
    Tabulation(std::vector<double> values, std::vector<std::string> labels, Stratum stratum = {});

    std::span<const double> values() const noexcept { return values_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Stratum& stratum() const noexcept { return stratum_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
    std::vector<std::string> labels_;
    Stratum stratum_;
};

enum class MechanismFamily { Gaussian, Laplace };

const char* to_string(MechanismFamily family) noexcept;
MechanismFamily parse_family(const std::string& name);

// Noise family plus its scale: sigma for Gaussian, lambda for Laplace.
class MechanismSpec {
public:
    MechanismSpec(MechanismFamily family, double scale, std::string provenance = {});

    MechanismFamily family() const noexcept { return family_; }
    double scale() const noexcept { return scale_; }
    const std::string& provenance() const noexcept { return provenance_; }

private:
    MechanismFamily family_;
    double scale_;
    std::string provenance_;
};

class NoisyMeasurement {
public:
    NoisyMeasurement(std::vector<double> values, MechanismSpec mechanism, Stratum stratum = {});

    std::span<const double> values() const noexcept { return values_; }
    const MechanismSpec& mechanism() const noexcept { return mechanism_; }
    const Stratum& stratum() const noexcept { return stratum_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
    MechanismSpec mechanism_;
    Stratum stratum_;
};

// Dense row-major matrix; sized for the handful of rows a constraint system carries.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// The polytope lower <= D y <= upper, with +-infinity admitted in the bounds.
class ConstraintSystem {
public:
    ConstraintSystem(std::vector<double> lower, std::vector<double> upper, Matrix matrix);

    std::size_t rows() const noexcept { return matrix_.rows(); }
    std::size_t dimension() const noexcept { return matrix_.cols(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    const Matrix& matrix() const noexcept { return matrix_; }

    double row_value(std::size_t row, std::span<const double> y) const noexcept;

    bool operator==(const ConstraintSystem&) const = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    Matrix matrix_;
};

// n x m matrix of posterior draws with chain bookkeeping.
class PosteriorDraws {
public:
    PosteriorDraws(std::size_t n, std::size_t m, std::vector<double> draws, std::size_t burn_in,
                   double acceptance_rate, std::uint64_t seed, Stratum stratum = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t dimension() const noexcept { return m_; }
    std::span<const double> row(std::size_t i) const noexcept { return {draws_.data() + i * m_, m_}; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return draws_[i * m_ + j]; }
    std::vector<double> column(std::size_t j) const;
    std::vector<double> column_means() const;
    const std::vector<double>& data() const noexcept { return draws_; }

    std::size_t burn_in() const noexcept { return burn_in_; }
    double acceptance_rate() const noexcept { return acceptance_rate_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const Stratum& stratum() const noexcept { return stratum_; }

private:
    std::size_t n_;
    std::size_t m_;
    std::vector<double> draws_;
    std::size_t burn_in_;
    double acceptance_rate_;
    std::uint64_t seed_;
    Stratum stratum_;
};

// The three published PH5 ratios; blown_up marks a zero denominator (values are NaN then).
struct RatioTriple {
    double under18 = 0.0;
    double over18 = 0.0;
    double total = 0.0;
    bool blown_up = false;

    double operator[](std::size_t k) const noexcept {
        return k == 0 ? under18 : (k == 1 ? over18 : total);
    }
};

void validate_dimensions(const Tabulation& tab, const ConstraintSystem& cs);
void validate_dimensions(std::size_t m, const ConstraintSystem& cs);

}  // namespace dppost
