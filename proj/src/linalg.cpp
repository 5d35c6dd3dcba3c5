#include "rayfuse/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace rayfuse {

double orthonormality_deviation(const Mat3& r) {
    const Mat3 g = r.transposed() * r;
    double dev = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            dev = std::max(dev, std::fabs(g(i, j) - target));
        }
    return dev;
}

Mat3 orthonormalized(const Mat3& r) {
    // R (R^T R)^(-1/2) via the eigendecomposition of R^T R.
    Mat3 g = r.transposed() * r;
    double values[3];
    double vecs[9];
    jacobi_eigen_symmetric(3, g.m.data(), values, vecs);
    Mat3 v;
    std::copy(vecs, vecs + 9, v.m.begin());
    Mat3 inv_sqrt = Mat3::zero();
    for (int k = 0; k < 3; ++k) {
        const double lambda = std::max(values[k], 1e-30);
        const double s = 1.0 / std::sqrt(lambda);
        const Vec3 axis = v.col(k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double ai = (i == 0) ? axis.x : (i == 1) ? axis.y : axis.z;
                const double aj = (j == 0) ? axis.x : (j == 1) ? axis.y : axis.z;
                inv_sqrt(i, j) += s * ai * aj;
            }
    }
    return r * inv_sqrt;
}

Mat3 rotation_x(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Mat3{{1, 0, 0, 0, c, -s, 0, s, c}};
}

Mat3 rotation_y(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Mat3{{c, 0, s, 0, 1, 0, -s, 0, c}};
}

Mat3 rotation_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
}

Mat3 rotation_axis_angle(const Vec3& axis, double angle) {
    const Vec3 u = normalized(axis);
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    return Mat3{{t * u.x * u.x + c,       t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y,
                 t * u.x * u.y + s * u.z, t * u.y * u.y + c,       t * u.y * u.z - s * u.x,
                 t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c}};
}

void jacobi_eigen_symmetric(int n, double* a, double* values, double* vecs) {
    auto at = [&](double* m, int r, int c) -> double& { return m[r * n + c]; };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) at(vecs, i, j) = (i == j) ? 1.0 : 0.0;

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(at(a, i, j)));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
        if (off < 1e-30 * scale * scale) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = at(a, k, p);
                    const double akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(a, p, k);
                    const double aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = at(vecs, k, p);
                    const double vkq = at(vecs, k, q);
                    at(vecs, k, p) = c * vkp - s * vkq;
                    at(vecs, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    for (int i = 0; i < n; ++i) values[i] = at(a, i, i);

    // Descending eigenvalues, stable selection for determinism.
    for (int i = 0; i < n; ++i) {
        int best = i;
        for (int j = i + 1; j < n; ++j)
            if (values[j] > values[best]) best = j;
        if (best != i) {
            std::swap(values[i], values[best]);
            for (int k = 0; k < n; ++k) std::swap(at(vecs, k, i), at(vecs, k, best));
        }
    }

    // Fix each eigenvector's sign: largest-magnitude component positive.
    for (int j = 0; j < n; ++j) {
        int arg = 0;
        for (int k = 1; k < n; ++k)
            if (std::fabs(at(vecs, k, j)) > std::fabs(at(vecs, arg, j))) arg = k;
        if (at(vecs, arg, j) < 0.0)
            for (int k = 0; k < n; ++k) at(vecs, k, j) = -at(vecs, k, j);
    }
}

}  // namespace rayfuse
