#include "fm2i/transforms.hpp"

#include "fm2i/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fm2i {
namespace {

MatrixRepr blank(MatrixKind kind, int side, int source_len) {
    MatrixRepr m;
    m.kind = kind;
    m.side = side;
    m.source_len = source_len;
    m.data.assign(static_cast<std::size_t>(side) * side, 0.0);
    return m;
}

void require_unit_range(std::span<const double> s, const char* what) {
    for (double v : s)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string(what) + ": input outside [0,1]");
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double clamp01(double v) { return std::clamp(v, -1.0, 1.0); }

} // namespace

const char* matrix_kind_name(MatrixKind k) {
    switch (k) {
    case MatrixKind::stam: return "stam";
    case MatrixKind::mac: return "mac";
    case MatrixKind::gasf: return "gasf";
    case MatrixKind::gc: return "gc";
    case MatrixKind::gcs1: return "gcs1";
    case MatrixKind::gcs2: return "gcs2";
    case MatrixKind::rpm: return "rpm";
    }
    return "?";
}

MatrixKind matrix_kind_from_name(const std::string& name) {
    if (name == "stam") return MatrixKind::stam;
    if (name == "mac") return MatrixKind::mac;
    if (name == "gasf") return MatrixKind::gasf;
    if (name == "gc") return MatrixKind::gc;
    if (name == "gcs1") return MatrixKind::gcs1;
    if (name == "gcs2") return MatrixKind::gcs2;
    if (name == "rpm") return MatrixKind::rpm;
    throw std::invalid_argument("unknown matrix kind: " + name);
}

bool is_gc_family(MatrixKind k) {
    return k == MatrixKind::gc || k == MatrixKind::gcs1 || k == MatrixKind::gcs2;
}

const char* estimator_path_name(EstimatorPath p) {
    switch (p) {
    case EstimatorPath::least_squares: return "least_squares";
    case EstimatorPath::median: return "median";
    case EstimatorPath::diagonal: return "diagonal";
    case EstimatorPath::column_median_fallback: return "column_median_fallback";
    case EstimatorPath::diagonal_fallback: return "diagonal_fallback";
    case EstimatorPath::greedy_backsub: return "greedy_backsub";
    case EstimatorPath::constant_fallback: return "constant_fallback";
    }
    return "?";
}

const char* estimator_variant_name(EstimatorVariant v) {
    return v == EstimatorVariant::standard ? "standard" : "diagonal";
}

EstimatorVariant estimator_variant_from_name(const std::string& name) {
    if (name == "standard") return EstimatorVariant::standard;
    if (name == "diagonal") return EstimatorVariant::diagonal;
    throw std::invalid_argument("unknown estimator variant: " + name);
}

MatrixRepr to_stam(std::span<const double> s) {
    if (s.size() < 2)
        throw std::invalid_argument("to_stam: need at least 2 values");
    const auto ac = autocorr(s);
    const int n = static_cast<int>(s.size());
    MatrixRepr m = blank(MatrixKind::stam, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = ac.gamma[std::abs(i - j)];
    return m;
}

MatrixRepr to_mac(std::span<const double> s) {
    if (s.empty())
        throw std::invalid_argument("to_mac: empty series");
    const int n = static_cast<int>(s.size());
    MatrixRepr m = blank(MatrixKind::mac, n, n);
#pragma omp parallel for schedule(static) if (n >= 128)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = s[i] * s[j];
    return m;
}

MatrixRepr to_gasf(std::span<const double> s) {
    require_unit_range(s, "to_gasf");
    const int n = static_cast<int>(s.size());
    MatrixRepr m = blank(MatrixKind::gasf, n, n);
    std::vector<double> root(n);
    for (int i = 0; i < n; ++i) root[i] = std::sqrt(1.0 - s[i] * s[i]);
#pragma omp parallel for schedule(static) if (n >= 128)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = s[i] * s[j] - root[i] * root[j];
    return m;
}

MatrixRepr to_gc(std::span<const double> s) {
    require_unit_range(s, "to_gc");
    const int n = static_cast<int>(s.size());
    if (n < 1)
        throw std::invalid_argument("to_gc: empty series");
    MatrixRepr m = blank(MatrixKind::gc, n, n);
    std::vector<double> root(n);
    for (int i = 0; i < n; ++i) root[i] = std::sqrt(1.0 - s[i] * s[i]);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                const double den = 2.0 * s[i];
                if (std::abs(den) < 1e-12)
                    throw std::invalid_argument("to_gc: GC singularity");
                m.at(i, j) = 1.0 / den;
                continue;
            }
            const double den = s[i] * root[j] + s[j] * root[i];
            if (std::abs(den) < 1e-12)
                throw std::invalid_argument("to_gc: GC singularity");
            m.at(i, j) = root[i] / den;
        }
    }
    return m;
}

MatrixRepr to_gcs1(std::span<const double> s) {
    MatrixRepr gc = to_gc(s);
    MatrixRepr m = blank(MatrixKind::gcs1, gc.side, gc.source_len);
    for (int i = 0; i < gc.side; ++i)
        for (int j = 0; j < gc.side; ++j)
            m.at(i, j) = 0.5 * (gc.at(i, j) + gc.at(j, i));
    return m;
}

MatrixRepr to_gcs2(std::span<const double> s) {
    MatrixRepr gc = to_gc(s);
    MatrixRepr m = blank(MatrixKind::gcs2, gc.side, gc.source_len);
    // Upper triangle mirrored from the lower one; diagonal kept from GC.
    for (int i = 0; i < gc.side; ++i)
        for (int j = 0; j < gc.side; ++j)
            m.at(i, j) = (i < j) ? gc.at(j, i) : gc.at(i, j);
    return m;
}

MatrixRepr to_rpm(std::span<const double> s) {
    if (s.size() < 2)
        throw std::invalid_argument("to_rpm: need at least 2 values");
    require_unit_range(s, "to_rpm");
    const int n = static_cast<int>(s.size());
    MatrixRepr m = blank(MatrixKind::rpm, n, n);
#pragma omp parallel for schedule(static) if (n >= 128)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = 0.5 * (s[i] - s[j] + 1.0);
    return m;
}

MatrixRepr make_matrix(MatrixKind kind, std::span<const double> s) {
    switch (kind) {
    case MatrixKind::stam: return to_stam(s);
    case MatrixKind::mac: return to_mac(s);
    case MatrixKind::gasf: return to_gasf(s);
    case MatrixKind::gc: return to_gc(s);
    case MatrixKind::gcs1: return to_gcs1(s);
    case MatrixKind::gcs2: return to_gcs2(s);
    case MatrixKind::rpm: return to_rpm(s);
    }
    throw std::invalid_argument("make_matrix: bad kind");
}

std::pair<MatrixRepr, RegionMask> extend_for_forecast(const MatrixRepr& m, int h) {
    if (h < 0)
        throw std::invalid_argument("extend_for_forecast: negative horizon");
    const int side = m.side + h;
    MatrixRepr out = blank(m.kind, side, m.source_len);
    out.horizon = h;
    RegionMask mask;
    mask.side = side;
    mask.known.assign(static_cast<std::size_t>(side) * side, 0);
    for (int i = 0; i < m.side; ++i)
        for (int j = 0; j < m.side; ++j) {
            out.at(i, j) = m.at(i, j);
            mask.known[static_cast<std::size_t>(i) * side + j] = 1;
        }
    return {std::move(out), std::move(mask)};
}

namespace {

double mac_estimate(const MatrixRepr& m, std::span<const double> s, int f, EstimatorVariant variant,
                    EstimatorPath& path) {
    const int L = static_cast<int>(s.size());
    double num = 0.0, den = 0.0, peak = 0.0;
    for (int i = 0; i < L; ++i) {
        num += s[i] * m.at(i, f);
        den += s[i] * s[i];
        peak = std::max(peak, std::abs(s[i]));
    }
    if (variant == EstimatorVariant::standard && peak >= 1e-9) {
        path = EstimatorPath::least_squares;
        return num / den;
    }
    // Degenerate known block: fall back to the diagonal, signed by the
    // least-squares numerator.
    path = (variant == EstimatorVariant::diagonal) ? EstimatorPath::diagonal
                                                   : EstimatorPath::diagonal_fallback;
    const double mag = std::sqrt(std::max(m.at(f, f), 0.0));
    return (num < 0.0) ? -mag : mag;
}

double gasf_estimate(const MatrixRepr& m, std::span<const double> s, int f, EstimatorVariant variant,
                     EstimatorPath& path) {
    const double diag = std::cos(std::acos(clamp01(m.at(f, f))) / 2.0);
    if (variant == EstimatorVariant::diagonal) {
        path = EstimatorPath::diagonal;
        return diag;
    }
    const int L = static_cast<int>(s.size());
    std::vector<double> cands;
    cands.reserve(L);
    for (int i = 0; i < L; ++i)
        cands.push_back(std::cos(std::acos(clamp01(m.at(i, f))) - std::acos(clamp01(s[i]))));
    std::sort(cands.begin(), cands.end());
    path = EstimatorPath::median;
    const std::size_t n = cands.size();
    if (n % 2 == 1) return cands[n / 2];
    // Even count: the diagonal inversion breaks the tie between the two
    // central candidates.
    const double a = cands[n / 2 - 1];
    const double b = cands[n / 2];
    if (a == b) return a;
    return (std::abs(a - diag) <= std::abs(b - diag)) ? a : b;
}

double gc_estimate(const MatrixRepr& m, std::span<const double> s, int f, double eps,
                   EstimatorPath& path) {
    const double dval = m.at(f, f);
    double diag = 0.0;
    bool diag_ok = false;
    if (std::abs(dval) >= 1e-12) {
        diag = 1.0 / (2.0 * dval);
        diag_ok = diag >= eps && diag <= 1.0 - eps;
    }
    if (diag_ok) {
        path = EstimatorPath::diagonal;
        return diag;
    }
    // Column-median fallback: invert cosg(theta_i, theta_f) for x_f. With
    // c = sin(theta_i)/g = sin(theta_i+theta_f), the two candidate roots are
    // c*sin(theta_i) +- x_i*sqrt(1-c^2).
    const int L = static_cast<int>(s.size());
    std::vector<double> cands;
    for (int i = 0; i < L; ++i) {
        const double g = m.at(i, f);
        if (std::abs(g) < 1e-12) continue;
        const double a = std::sqrt(1.0 - s[i] * s[i]);
        const double c = clamp01(a / g);
        const double t = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (const double cand : {c * a + s[i] * t, c * a - s[i] * t})
            if (cand >= eps && cand <= 1.0 - eps) cands.push_back(cand);
    }
    if (!cands.empty()) {
        path = EstimatorPath::column_median_fallback;
        return median_of(std::move(cands));
    }
    path = EstimatorPath::diagonal_fallback;
    return std::clamp(std::abs(dval) >= 1e-12 ? diag : eps, eps, 1.0 - eps);
}

double rpm_estimate(const MatrixRepr& m, std::span<const double> z, int f, EstimatorPath& path) {
    const int L = static_cast<int>(z.size());
    std::vector<double> cands;
    cands.reserve(L);
    for (int i = 0; i < L; ++i)
        cands.push_back(2.0 * m.at(f, i) - 1.0 + z[i]);
    path = EstimatorPath::median;
    return median_of(std::move(cands));
}

void stam_extract(const MatrixRepr& m, std::span<const double> s, int h, ForecastExtraction& out) {
    const int L = static_cast<int>(s.size());
    const int side = m.side; // == L + h
    // Diagonal means of the inpainted region estimate gamma at lags L..side-1.
    std::vector<double> gamma_hat(side, 0.0);
    for (int k = L; k < side; ++k) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i + k < side; ++i) {
            sum += m.at(i, i + k);
            sum += m.at(i + k, i);
            count += 2;
        }
        gamma_hat[k] = sum / count;
    }
    // The back-substitution needs every referenced index solved already,
    // which holds only while h <= L; past that (and for a vanishing leading
    // value) fall back to a constant continuation.
    if (h > L || std::abs(s[0]) < 1e-9) {
        for (int j = 0; j < h; ++j) {
            out.values.push_back(s[L - 1]);
            out.paths.push_back(EstimatorPath::constant_fallback);
        }
        return;
    }
    // Solve the lag equations from the largest lag down; each step has a
    // single unknown multiplying s[0].
    std::vector<double> full(s.begin(), s.end());
    full.resize(side, 0.0);
    for (int lag = side - 1; lag >= L; --lag) {
        double rest = 0.0;
        for (int k = lag + 1; k < side; ++k)
            rest += full[k] * full[k - lag];
        full[lag] = (gamma_hat[lag] * side - rest) / s[0];
    }
    for (int j = 0; j < h; ++j) {
        out.values.push_back(full[L + j]);
        out.paths.push_back(EstimatorPath::greedy_backsub);
    }
}

} // namespace

ForecastExtraction extract_forecast(const MatrixRepr& filled, const TransformContext& ctx,
                                    std::span<const double> known_scaled, int h,
                                    EstimatorVariant variant) {
    if (h < 0)
        throw std::invalid_argument("extract_forecast: negative horizon");
    const int L = static_cast<int>(known_scaled.size());
    if (filled.side != L + h)
        throw std::invalid_argument("extract_forecast: matrix side does not match series + horizon");

    ForecastExtraction out;
    if (h == 0) return out;
    if (L < 1)
        throw std::invalid_argument("extract_forecast: empty known series");

    if (ctx.kind == MatrixKind::stam) {
        stam_extract(filled, known_scaled, h, out);
        return out;
    }

    for (int f = L; f < L + h; ++f) {
        EstimatorPath path{};
        double value = 0.0;
        switch (ctx.kind) {
        case MatrixKind::mac:
            value = mac_estimate(filled, known_scaled, f, variant, path);
            break;
        case MatrixKind::gasf:
            value = gasf_estimate(filled, known_scaled, f, variant, path);
            break;
        case MatrixKind::gc:
        case MatrixKind::gcs1:
        case MatrixKind::gcs2:
            value = gc_estimate(filled, known_scaled, f, ctx.clamp_eps, path);
            break;
        case MatrixKind::rpm:
            value = rpm_estimate(filled, known_scaled, f, path);
            break;
        case MatrixKind::stam:
            break; // handled above
        }
        out.values.push_back(value);
        out.paths.push_back(path);
    }
    return out;
}

void write_matrix_csv(const MatrixRepr& m, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw std::runtime_error("write_matrix_csv: cannot open " + path);
    for (int i = 0; i < m.side; ++i) {
        for (int j = 0; j < m.side; ++j)
            std::fprintf(f, j + 1 < m.side ? "%.17g," : "%.17g\n", m.at(i, j));
    }
    std::fclose(f);
}

} // namespace fm2i
