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
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace lioekf {

/// Integer voxel index. Points map to voxels by componentwise floor(p / v).
struct Voxel {
    int32_t x = 0;
    int32_t y = 0;
    int32_t z = 0;
    bool operator==(const Voxel &o) const { return x == o.x && y == o.y && z == o.z; }
};

struct VoxelHash {
    std::size_t operator()(const Voxel &v) const {
        return static_cast<std::size_t>(
            (static_cast<uint64_t>(static_cast<uint32_t>(v.x)) * 73856093u) ^
            (static_cast<uint64_t>(static_cast<uint32_t>(v.y)) * 19349669u) ^
            (static_cast<uint64_t>(static_cast<uint32_t>(v.z)) * 83492791u));
    }
};

inline Voxel PointToVoxel(const Eigen::Vector3d &p, double voxel_size) {
    return Voxel{static_cast<int32_t>(std::floor(p.x() / voxel_size)),
                 static_cast<int32_t>(std::floor(p.y() / voxel_size)),
                 static_cast<int32_t>(std::floor(p.z() / voxel_size))};
}

/// Matched (source point, map point) pairs in corresponding slots.
struct CorrespondenceSet {
    std::vector<Eigen::Vector3d> source;
    std::vector<Eigen::Vector3d> target;
    std::size_t size() const { return source.size(); }
    bool empty() const { return source.empty(); }
};

/// Sparse voxel grid over world-frame points. Each voxel stores at most
/// `max_points_per_voxel` points, kept in first-inserted order; exact
/// duplicates of an already stored point are dropped so re-merging the same
/// frame leaves the map unchanged.
class VoxelMap {
   public:
    VoxelMap(double voxel_size, int max_points_per_voxel, double r_max);

    /// Inserts world-frame points, then prunes voxels whose centers lie
    /// farther than r_max from `origin`.
    void Merge(const std::vector<Eigen::Vector3d> &points, const Eigen::Vector3d &origin);

    /// Inserts world-frame points without pruning.
    void Insert(const std::vector<Eigen::Vector3d> &points);

    /// Removes voxels whose centers are farther than r_max from `origin`.
    void Prune(const Eigen::Vector3d &origin);

    /// Nearest stored point within `max_distance` of `query`, searching the
    /// query's voxel and its 26 face/edge/corner neighbours. Returns false if
    /// the neighbourhood holds no point within the radius.
    bool NearestNeighbor(const Eigen::Vector3d &query, double max_distance,
                         Eigen::Vector3d *neighbor) const;

    bool Empty() const { return grid_.empty(); }
    std::size_t NumVoxels() const { return grid_.size(); }
    std::size_t NumPoints() const;
    double VoxelSize() const { return voxel_size_; }
    int MaxPointsPerVoxel() const { return max_points_per_voxel_; }

    /// All stored points (voxel iteration order; intended for tests).
    std::vector<Eigen::Vector3d> Points() const;

   private:
    double voxel_size_;
    int max_points_per_voxel_;
    double r_max_;
    std::unordered_map<Voxel, std::vector<Eigen::Vector3d>, VoxelHash> grid_;
};

/// Pairs every source point with its nearest map point within `tau`.
/// Output slots follow the source order; unmatched points are skipped.
CorrespondenceSet FindCorrespondences(const std::vector<Eigen::Vector3d> &source,
                                      const VoxelMap &map, double tau);

}  // namespace lioekf
