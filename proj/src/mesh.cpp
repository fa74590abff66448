#include "sfor/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfor/error.hpp"

namespace sfor {

GradedMesh::GradedMesh(double T, std::size_t N, double r) : T_(T), N_(N), r_(r) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw ValidationError("graded mesh: final time T must be positive and finite, got " +
                              std::to_string(T));
    }
    if (N == 0) {
        throw ValidationError("graded mesh: number of intervals N must be at least 1");
    }
    if (!(r >= 1.0) || !std::isfinite(r)) {
        throw ValidationError("graded mesh: grading exponent r must satisfy r >= 1, got " +
                              std::to_string(r));
    }

    points_.resize(N + 1);
    points_[0] = 0.0;
    for (std::size_t k = 1; k < N; ++k) {
        points_[k] = T * std::pow(static_cast<double>(k) / static_cast<double>(N), r);
    }
    points_[N] = T;

    steps_.resize(N);
    for (std::size_t k = 1; k <= N; ++k) {
        steps_[k - 1] = points_[k] - points_[k - 1];
        if (!(steps_[k - 1] > 0.0)) {
            throw ValidationError("graded mesh: step " + std::to_string(k) +
                                  " underflows to zero; reduce N or r");
        }
    }
    for (std::size_t k = 1; k + 1 <= N; ++k) {
        max_ratio_ = std::max(max_ratio_, steps_[k - 1] / steps_[k]);
    }
}

GradedMesh GradedMesh::uniform(double T, std::size_t N) { return GradedMesh(T, N, 1.0); }

double GradedMesh::r_l1_v(double alpha) { return (4.0 - alpha) / (2.0 - alpha); }

double GradedMesh::r_l1_z(double alpha) { return std::max((4.0 - alpha) / alpha, 2.0); }

double GradedMesh::r_alikhanov_v(double alpha) { return 4.0 / (2.0 - alpha); }

double GradedMesh::r_alikhanov_z(double alpha) {
    return std::max(4.0 / alpha, 8.0 / (4.0 - alpha));
}

double GradedMesh::point(std::size_t k) const {
    if (k > N_) {
        throw ValidationError("graded mesh: point index " + std::to_string(k) + " exceeds N = " +
                              std::to_string(N_));
    }
    return points_[k];
}

double GradedMesh::step(std::size_t k) const {
    if (k == 0 || k > N_) {
        throw ValidationError("graded mesh: step index " + std::to_string(k) +
                              " outside [1, " + std::to_string(N_) + "]");
    }
    return steps_[k - 1];
}

double GradedMesh::ratio(std::size_t k) const {
    if (k == 0 || k >= N_) {
        throw ValidationError("graded mesh: ratio index " + std::to_string(k) +
                              " outside [1, N-1]");
    }
    return steps_[k - 1] / steps_[k];
}

double GradedMesh::offset_time(std::size_t n, double theta) const {
    if (n == 0 || n > N_) {
        throw ValidationError("graded mesh: offset level " + std::to_string(n) +
                              " outside [1, " + std::to_string(N_) + "]");
    }
    if (!(theta >= 0.0 && theta < 1.0)) {
        throw ValidationError("graded mesh: offset θ must lie in [0, 1)");
    }
    return theta * points_[n - 1] + (1.0 - theta) * points_[n];
}

GradedMesh build_graded_mesh(double T, std::size_t N, double r) { return GradedMesh(T, N, r); }

}  // namespace sfor
