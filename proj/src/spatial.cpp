#include "pmfht/spatial.hpp"
#include "pmfht/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace pmfht {

namespace {
constexpr int kLeafSize = 16;
}

NeighborIndex::NeighborIndex(const PointCloud& cloud) {
    cloud.validate();
    points_ = cloud.points;
    const int n = static_cast<int>(points_.rows());
    order_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        order_[static_cast<std::size_t>(i)] = i;
    nodes_.reserve(static_cast<std::size_t>(2 * n / kLeafSize + 2));
    root_ = build(0, n);
    bbox_ = nodes_[static_cast<std::size_t>(root_)].box;
}

int NeighborIndex::build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.box.setEmpty();
    for (int k = begin; k < end; ++k)
        node.box.extend(point(order_[static_cast<std::size_t>(k)]));

    if (end - begin > kLeafSize) {
        int axis = 0;
        node.box.sizes().maxCoeff(&axis);
        const int mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](int a, int b) { return points_(a, axis) < points_(b, axis); });
        node.axis = axis;
        node.split = points_(order_[static_cast<std::size_t>(mid)], axis);
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[static_cast<std::size_t>(id)].left = left;
        nodes_[static_cast<std::size_t>(id)].right = right;
        return id;
    }
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
}

std::vector<int> NeighborIndex::radius_query(const Eigen::Vector3d& center, double radius) const {
    std::vector<int> result;
    const double r2 = radius * radius;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (node.box.squaredExteriorDistance(center) > r2)
            continue;
        if (node.left < 0) {
            for (int k = node.begin; k < node.end; ++k) {
                const int i = order_[static_cast<std::size_t>(k)];
                if ((point(i) - center).squaredNorm() <= r2)
                    result.push_back(i);
            }
        } else {
            stack.push_back(node.left);
            stack.push_back(node.right);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<int> NeighborIndex::knn_query(const Eigen::Vector3d& center, int k) const {
    using Entry = std::pair<double, int>; // (squared distance, index)
    std::priority_queue<Entry> heap;      // max-heap keeps the k best seen

    const auto consider = [&](int i) {
        const Entry e{(point(i) - center).squaredNorm(), i};
        if (static_cast<int>(heap.size()) < k) {
            heap.push(e);
        } else if (e < heap.top()) {
            heap.pop();
            heap.push(e);
        }
    };

    // Depth-first, nearer child first, pruning on the current k-th distance.
    const std::function<void(int)> visit = [&](int id) {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (static_cast<int>(heap.size()) == k &&
            node.box.squaredExteriorDistance(center) > heap.top().first)
            return;
        if (node.left < 0) {
            for (int j = node.begin; j < node.end; ++j)
                consider(order_[static_cast<std::size_t>(j)]);
            return;
        }
        const int near = center[node.axis] < node.split ? node.left : node.right;
        const int far = near == node.left ? node.right : node.left;
        visit(near);
        visit(far);
    };
    visit(root_);

    std::vector<Entry> entries;
    entries.reserve(heap.size());
    while (!heap.empty()) {
        entries.push_back(heap.top());
        heap.pop();
    }
    std::sort(entries.begin(), entries.end());
    std::vector<int> result;
    result.reserve(entries.size());
    for (const auto& [d2, i] : entries)
        result.push_back(i);
    return result;
}

NeighborIndex build_index(const PointCloud& cloud) {
    return NeighborIndex(cloud);
}

SamplingEstimate estimate_epsilon(const NeighborIndex& index, const PointCloud& cloud) {
    const Eigen::Index n = cloud.size();
    if (n < 2)
        throw InputError("epsilon estimation needs at least 2 points");

    SamplingEstimate est;
    est.per_point_nn.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto nn = index.knn_query(cloud.point(i), 2);
        // nn[0] is the point itself (distance 0) unless a duplicate sorts first;
        // either way the second entry is a nearest other point.
        int other = nn[0] == static_cast<int>(i) ? nn[1] : nn[0];
        est.per_point_nn[i] = (cloud.point(i) - cloud.point(other)).norm();
    }
    est.epsilon = est.per_point_nn.mean();
    if (est.epsilon <= 0.0)
        throw InputError("degenerate sampling: every point coincides with another point");
    return est;
}

} // namespace pmfht
