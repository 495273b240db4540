#include "sftid/errors.hpp"
#include "sftid/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sftid {

namespace {

constexpr int kMaxSquarings = 200;
constexpr long kMaxPowerSteps = 1'000'000;
constexpr double kRayleighTolerance = 1e-13;
constexpr double kResidualTolerance = 1e-10;

using Matrix = std::vector<double>;

Matrix square(const Matrix& b, std::size_t n) {
    Matrix c(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double bik = b[i * n + k];
            if (bik == 0.0)
                continue;
            const double* brow = &b[k * n];
            double* crow = &c[i * n];
            for (std::size_t j = 0; j < n; ++j)
                crow[j] += bik * brow[j];
        }
    return c;
}

void normalize_sum(std::vector<double>& v) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& x : v)
        x /= s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

std::vector<double> apply_right(std::span<const double> m, std::size_t n, std::span<const double> x) {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = dot(m.subspan(i * n, n), x);
    return y;
}

std::vector<double> apply_left(std::span<const double> m, std::size_t n, std::span<const double> x) {
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            y[j] += x[i] * m[i * n + j];
    return y;
}

[[noreturn]] void fail(const std::string& what, std::size_t dim, int squarings, long steps, double last) {
    std::ostringstream os;
    os << "Perron solve failed: " << what << " (dimension " << dim << ", " << squarings
       << " squarings, " << steps << " power steps, last change " << last << ")";
    throw NumericalError(os.str());
}

} // namespace

PerronData perron(std::span<const double> entries, std::size_t dim) {
    if (dim == 0 || entries.size() != dim * dim)
        throw InvalidArgument("Perron solve needs a non-empty square matrix");
    double scale = 0.0;
    for (double x : entries) {
        if (!std::isfinite(x) || x < 0.0)
            throw InvalidArgument("Perron solve needs finite nonnegative entries");
        scale = std::max(scale, x);
    }
    if (scale == 0.0)
        throw NumericalError("Perron solve on the zero matrix");

    // M/s + I keeps the Perron vectors and makes the leading eigenvalue
    // strictly dominant even when the support is nearly periodic.
    Matrix b(entries.begin(), entries.end());
    for (auto& x : b)
        x /= scale;
    for (std::size_t i = 0; i < dim; ++i)
        b[i * dim + i] += 1.0;

    int squarings = 0;
    double change = std::numeric_limits<double>::infinity();
    while (squarings < kMaxSquarings) {
        Matrix c = square(b, dim);
        const double total = std::accumulate(c.begin(), c.end(), 0.0);
        double peak = 0.0;
        change = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] /= total;
            peak = std::max(peak, c[i]);
            change = std::max(change, std::abs(c[i] - b[i]));
        }
        b.swap(c);
        ++squarings;
        if (squarings >= 4 && change <= 1e-13 * peak)
            break;
    }
    if (change > 1e-10)
        fail("squaring did not reach the rank-one projector", dim, squarings, 0, change);

    PerronData out;
    out.right.assign(dim, 0.0);
    out.left.assign(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            out.right[i] += b[i * dim + j];
            out.left[j] += b[i * dim + j];
        }
    normalize_sum(out.right);
    normalize_sum(out.left);

    auto rayleigh = [&](const std::vector<double>& mh) {
        return dot(out.left, mh) / dot(out.left, out.right);
    };
    std::vector<double> mh = apply_right(entries, dim, out.right);
    double lambda = rayleigh(mh);
    long steps = 0;
    for (;;) {
        if (++steps > kMaxPowerSteps)
            fail("power iteration hit its cap", dim, squarings, steps, change);
        out.right = mh;
        normalize_sum(out.right);
        out.left = apply_left(entries, dim, out.left);
        normalize_sum(out.left);
        mh = apply_right(entries, dim, out.right);
        const double next = rayleigh(mh);
        change = std::abs(next - lambda) / next;
        lambda = next;
        if (change <= kRayleighTolerance)
            break;
    }

    const double hmax = *std::max_element(out.right.begin(), out.right.end());
    double residual = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        residual = std::max(residual, std::abs(mh[i] - lambda * out.right[i]));
    if (!(lambda > 0.0) || residual > kResidualTolerance * lambda * hmax)
        fail("eigen-residual too large", dim, squarings, steps, residual);
    for (std::size_t i = 0; i < dim; ++i)
        if (!(out.right[i] > 0.0) || !(out.left[i] > 0.0))
            fail("Perron vector is not strictly positive; support is not primitive", dim, squarings,
                 steps, change);

    const double pairing = dot(out.left, out.right);
    for (auto& x : out.left)
        x /= pairing;
    out.lambda = lambda;
    out.iterations = squarings + static_cast<int>(steps);
    return out;
}

PerronData perron(const TransferMatrix& m) {
    return perron(m.entries, m.dim());
}

} // namespace sftid
