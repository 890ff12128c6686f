// MIT License
//
// Copyright (c) 2026 the lioekf authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to deal
// in the Software without restriction, including without limitation the rights
// to use, copy, modify, distribute, sublicense, and/or sell copies of the
// Software, and to permit persons to whom the Software is furnished to do so,
// subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in all
// copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
// OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
// SOFTWARE.
#include "lioekf/voxel_map.hpp"

#include <limits>
#include <stdexcept>

#include "lioekf/parallel.hpp"

namespace lioekf {

VoxelMap::VoxelMap(double voxel_size, int max_points_per_voxel, double r_max)
    : voxel_size_(voxel_size), max_points_per_voxel_(max_points_per_voxel), r_max_(r_max) {
    if (!(voxel_size > 0.0)) {
        throw std::invalid_argument("VoxelMap: voxel size must be positive");
    }
    if (max_points_per_voxel < 1) {
        throw std::invalid_argument("VoxelMap: max points per voxel must be at least 1");
    }
    if (!(r_max > 0.0)) {
        throw std::invalid_argument("VoxelMap: max range must be positive");
    }
}

void VoxelMap::Insert(const std::vector<Eigen::Vector3d> &points) {
    for (const auto &p : points) {
        auto &bucket = grid_[PointToVoxel(p, voxel_size_)];
        if (static_cast<int>(bucket.size()) >= max_points_per_voxel_) continue;
        bool duplicate = false;
        for (const auto &q : bucket) {
            if (q == p) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) bucket.push_back(p);
    }
}

void VoxelMap::Prune(const Eigen::Vector3d &origin) {
    for (auto it = grid_.begin(); it != grid_.end();) {
        const Eigen::Vector3d center((it->first.x + 0.5) * voxel_size_,
                                     (it->first.y + 0.5) * voxel_size_,
                                     (it->first.z + 0.5) * voxel_size_);
        if ((center - origin).norm() > r_max_) {
            it = grid_.erase(it);
        } else {
            ++it;
        }
    }
}

void VoxelMap::Merge(const std::vector<Eigen::Vector3d> &points, const Eigen::Vector3d &origin) {
    Insert(points);
    Prune(origin);
}

bool VoxelMap::NearestNeighbor(const Eigen::Vector3d &query, double max_distance,
                               Eigen::Vector3d *neighbor) const {
    const Voxel center = PointToVoxel(query, voxel_size_);
    double best_sq = max_distance * max_distance;
    bool found = false;
    Eigen::Vector3d best = Eigen::Vector3d::Zero();
    for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dz = -1; dz <= 1; ++dz) {
                const auto it = grid_.find(Voxel{center.x + dx, center.y + dy, center.z + dz});
                if (it == grid_.end()) continue;
                for (const auto &p : it->second) {
                    const double d_sq = (p - query).squaredNorm();
                    if (d_sq < best_sq) {
                        best_sq = d_sq;
                        best = p;
                        found = true;
                    }
                }
            }
        }
    }
    if (found && neighbor != nullptr) *neighbor = best;
    return found;
}

std::size_t VoxelMap::NumPoints() const {
    std::size_t n = 0;
    for (const auto &kv : grid_) n += kv.second.size();
    return n;
}

std::vector<Eigen::Vector3d> VoxelMap::Points() const {
    std::vector<Eigen::Vector3d> out;
    out.reserve(NumPoints());
    for (const auto &kv : grid_) {
        out.insert(out.end(), kv.second.begin(), kv.second.end());
    }
    return out;
}

CorrespondenceSet FindCorrespondences(const std::vector<Eigen::Vector3d> &source,
                                      const VoxelMap &map, double tau) {
    const std::size_t n = source.size();
    // Slot array keeps results aligned with the source order regardless of
    // which worker produced them.
    std::vector<uint8_t> matched(n, 0);
    std::vector<Eigen::Vector3d> targets(n, Eigen::Vector3d::Zero());
    ParallelChunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Eigen::Vector3d nb;
            if (map.NearestNeighbor(source[i], tau, &nb)) {
                matched[i] = 1;
                targets[i] = nb;
            }
        }
    });
    CorrespondenceSet out;
    out.source.reserve(n);
    out.target.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (matched[i]) {
            out.source.push_back(source[i]);
            out.target.push_back(targets[i]);
        }
    }
    return out;
}

}  // namespace lioekf
